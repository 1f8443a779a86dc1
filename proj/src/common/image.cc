// Copyright 2026 The Partition Pilot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "partition_pilot/image.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include "partition_pilot/status.h"

namespace ppilot {

Plane extract_block(const Image& img, int x, int y, int size) {
  if (x < 0 || y < 0 || x + size > img.width || y + size > img.height) {
    throw Error(ErrorCode::kOutOfBounds, "block outside image");
  }
  Plane p(size);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) p.at(c, r) = img.at(x + c, y + r);
  }
  return p;
}

std::vector<BlockOrigin> root_block_origins(const Image& img, int size) {
  std::vector<BlockOrigin> out;
  for (int y = 0; y + size <= img.height; y += size) {
    for (int x = 0; x + size <= img.width; x += size) out.push_back({x, y});
  }
  return out;
}

namespace {

// Next header token of a PNM file, skipping whitespace and comments.
std::string next_token(const std::string& s, size_t& pos) {
  for (;;) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) {
      ++pos;
    }
    if (pos < s.size() && s[pos] == '#') {
      while (pos < s.size() && s[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  const size_t start = pos;
  while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos]))) {
    ++pos;
  }
  return s.substr(start, pos - start);
}

int parse_positive(const std::string& tok, const char* what) {
  int v = 0;
  try {
    size_t used = 0;
    v = std::stoi(tok, &used);
    if (used != tok.size()) v = 0;
  } catch (const std::logic_error&) {
    v = 0;
  }
  if (v <= 0) {
    throw Error(ErrorCode::kIoFailure, std::string("bad PGM ") + what);
  }
  return v;
}

}  // namespace

Image parse_pgm(const std::string& bytes) {
  size_t pos = 0;
  if (next_token(bytes, pos) != "P5") {
    throw Error(ErrorCode::kIoFailure, "not a binary PGM (P5)");
  }
  const int w = parse_positive(next_token(bytes, pos), "width");
  const int h = parse_positive(next_token(bytes, pos), "height");
  const int maxval = parse_positive(next_token(bytes, pos), "maxval");
  if (maxval > 255) {
    throw Error(ErrorCode::kIoFailure, "only 8-bit PGM is supported");
  }
  ++pos;  // single whitespace byte after maxval
  const size_t n = static_cast<size_t>(w) * static_cast<size_t>(h);
  if (bytes.size() < pos + n) {
    throw Error(ErrorCode::kIoFailure, "PGM raster is truncated");
  }
  Image img(w, h);
  std::copy_n(reinterpret_cast<const std::uint8_t*>(bytes.data() + pos), n,
              img.pixels.begin());
  return img;
}

Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  try {
    return parse_pgm(bytes);
  } catch (const Error& e) {
    throw Error(ErrorCode::kIoFailure, path + ": " + e.what());
  }
}

void write_pgm(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot create " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path);
}

Image make_synthetic_image(int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> level(16, 240);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> canvas(static_cast<size_t>(width) * height,
                             static_cast<double>(level(rng)));
  const auto paint = [&](int x0, int y0, int w, int h, double base,
                         double gx, double gy) {
    for (int y = y0; y < y0 + h && y < height; ++y) {
      for (int x = x0; x < x0 + w && x < width; ++x) {
        canvas[static_cast<size_t>(y) * width + x] =
            base + gx * (x - x0) + gy * (y - y0);
      }
    }
  };

  // Rectangles snapped to the 4-sample grid, larger ones first.
  const int count = std::max(4, (width * height) / 1024);
  for (int i = 0; i < count; ++i) {
    const double scale = 1.0 - static_cast<double>(i) / count;
    const int max_side = std::max(8, static_cast<int>(64 * scale));
    std::uniform_int_distribution<int> side(2, std::max(2, max_side / 4));
    const int w = 4 * side(rng);
    const int h = 4 * side(rng);
    const int x = 4 * std::uniform_int_distribution<int>(
                          0, std::max(0, (width - w) / 4))(rng);
    const int y = 4 * std::uniform_int_distribution<int>(
                          0, std::max(0, (height - h) / 4))(rng);
    const bool textured = unit(rng) < 0.3;
    const double gx = textured ? (unit(rng) - 0.5) * 1.5 : 0.0;
    const double gy = textured ? (unit(rng) - 0.5) * 1.5 : 0.0;
    paint(x, y, w, h, level(rng), gx, gy);
  }

  std::normal_distribution<double> noise(0.0, 1.5);
  Image img(width, height);
  for (size_t i = 0; i < canvas.size(); ++i) {
    img.pixels[i] = static_cast<std::uint8_t>(
        std::clamp(std::lround(canvas[i] + noise(rng)), 0L, 255L));
  }
  return img;
}

}  // namespace ppilot
