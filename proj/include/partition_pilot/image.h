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

#ifndef PARTITION_PILOT_IMAGE_H_
#define PARTITION_PILOT_IMAGE_H_

#include <cstdint>
#include <string>
#include <vector>

namespace ppilot {

// 8-bit grayscale picture.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  Image() = default;
  Image(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h),
        pixels(static_cast<size_t>(w) * static_cast<size_t>(h), fill) {}

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<size_t>(y) * width + x];
  }
  bool operator==(const Image&) const = default;
};

// Square block of samples as doubles, the working type of the cost model.
struct Plane {
  int size = 0;
  std::vector<double> samples;

  Plane() = default;
  explicit Plane(int n, double fill = 0.0)
      : size(n), samples(static_cast<size_t>(n) * n, fill) {}

  double at(int x, int y) const {
    return samples[static_cast<size_t>(y) * size + x];
  }
  double& at(int x, int y) { return samples[static_cast<size_t>(y) * size + x]; }
};

Plane extract_block(const Image& img, int x, int y, int size);

// Top-left corners of the whole `size` x `size` blocks of an image in raster
// order; partial blocks at the right and bottom edges are skipped.
struct BlockOrigin {
  int x;
  int y;
};
std::vector<BlockOrigin> root_block_origins(const Image& img, int size = 64);

// Binary PGM (P5) with maxval <= 255.  Throws Error(kIoFailure) on malformed
// input.
Image read_pgm(const std::string& path);
Image parse_pgm(const std::string& bytes);
void write_pgm(const std::string& path, const Image& img);

// Deterministic test content: nested axis-aligned rectangles on the 4-sample
// grid with flat fills, gentle gradients, and low-amplitude noise.
Image make_synthetic_image(int width, int height, std::uint64_t seed);

}  // namespace ppilot

#endif  // PARTITION_PILOT_IMAGE_H_
