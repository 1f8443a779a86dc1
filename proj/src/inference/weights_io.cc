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

#include "partition_pilot/binary_io.h"
#include "partition_pilot/inference.h"
#include "partition_pilot/status.h"

namespace ppilot {

namespace {

constexpr std::string_view kMagic = "BPWT";
constexpr std::uint32_t kVersion = 1;

}  // namespace

size_t LayerWeights::expected_weight_count() const {
  const size_t k = static_cast<size_t>(kernel_size());
  return static_cast<size_t>(out_channels) * in_channels * k * k;
}

size_t NetworkWeights::parameter_count() const {
  size_t n = 0;
  for (const LayerWeights& l : layers) n += l.parameter_count();
  return n;
}

NetworkWeights load_weights(std::span<const std::byte> bytes) {
  ByteReader in(bytes);
  if (!in.magic(kMagic)) throw Error(ErrorCode::kBadMagic, "not a BPWT file");
  const std::uint32_t version = in.u32();
  if (version != kVersion) {
    throw Error(ErrorCode::kVersionUnsupported,
                "BPWT version " + std::to_string(version));
  }
  NetworkWeights w;
  const std::uint8_t component = in.u8();
  if (component > 1) {
    throw Error(ErrorCode::kShapeMismatch, "unknown component tag");
  }
  w.component = static_cast<Component>(component);
  const std::uint32_t layer_count = in.u32();

  for (std::uint32_t i = 0; i < layer_count; ++i) {
    LayerWeights l;
    const std::uint8_t kind = in.u8();
    if (kind > 2) {
      throw Error(ErrorCode::kShapeMismatch,
                  "layer " + std::to_string(i) + " has unknown kind");
    }
    l.kind = static_cast<LayerKind>(kind);
    const std::uint32_t in_ch = in.u32();
    const std::uint32_t out_ch = in.u32();
    if (in_ch == 0 || out_ch == 0 || in_ch > (1u << 20) || out_ch > (1u << 20)) {
      throw Error(ErrorCode::kShapeMismatch,
                  "layer " + std::to_string(i) + " has bad channel counts");
    }
    l.in_channels = static_cast<int>(in_ch);
    l.out_channels = static_cast<int>(out_ch);
    const size_t count = l.expected_weight_count();
    // Check before allocating so a corrupt header cannot request gigabytes.
    if (in.remaining() / 4 < count + out_ch) {
      throw Error(ErrorCode::kTruncatedStream,
                  "layer " + std::to_string(i) + " tensor is cut short");
    }
    l.weights.resize(count);
    in.f32s(l.weights);
    l.bias.resize(out_ch);
    in.f32s(l.bias);
    w.layers.push_back(std::move(l));
  }
  in.expect_crc_trailer();
  return w;
}

NetworkWeights load_weights_file(const std::string& path) {
  return load_weights(read_file_bytes(path));
}

std::vector<std::byte> serialize_weights(const NetworkWeights& w) {
  ByteWriter out;
  out.magic(kMagic);
  out.u32(kVersion);
  out.u8(static_cast<std::uint8_t>(w.component));
  out.u32(static_cast<std::uint32_t>(w.layers.size()));
  for (const LayerWeights& l : w.layers) {
    if (l.weights.size() != l.expected_weight_count() ||
        l.bias.size() != static_cast<size_t>(l.out_channels)) {
      throw Error(ErrorCode::kShapeMismatch, "layer tensor sizes disagree");
    }
    out.u8(static_cast<std::uint8_t>(l.kind));
    out.u32(static_cast<std::uint32_t>(l.in_channels));
    out.u32(static_cast<std::uint32_t>(l.out_channels));
    out.f32s(l.weights);
    out.f32s(l.bias);
  }
  out.crc_trailer();
  return out.take();
}

}  // namespace ppilot
