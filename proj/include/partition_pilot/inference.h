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

#ifndef PARTITION_PILOT_INFERENCE_H_
#define PARTITION_PILOT_INFERENCE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "partition_pilot/geometry.h"

namespace ppilot {

inline constexpr int kPatchSize = kRootSize + 1;  // 65
inline constexpr int kPatchArea = kPatchSize * kPatchSize;

// Network input: a 64x64 root block plus its one-sample causal border, with
// samples normalized to [0,1].  Channels are stored plane after plane.
struct Patch {
  Component component = Component::kLuma;
  std::vector<float> samples;  // channels() * 65 * 65
  float qstep_norm = 0.0f;

  static Patch zeros(Component c);
  int channels() const { return component == Component::kLuma ? 1 : 2; }
  float at(int channel, int row, int col) const {
    return samples[static_cast<size_t>(channel) * kPatchArea +
                   static_cast<size_t>(row) * kPatchSize + col];
  }
  float& at(int channel, int row, int col) {
    return samples[static_cast<size_t>(channel) * kPatchArea +
                   static_cast<size_t>(row) * kPatchSize + col];
  }
  bool operator==(const Patch&) const = default;
};

// Throws Error(kShapeMismatch / kOutOfRange) when a Patch breaks its
// invariants.
void validate_patch(const Patch& p);

// Channel-major activation tensor.
struct FeatureMap {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  FeatureMap() = default;
  FeatureMap(int c, int h, int w, float fill = 0.0f)
      : channels(c), height(h), width(w),
        data(static_cast<size_t>(c) * h * w, fill) {}

  float at(int c, int y, int x) const {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }
  float& at(int c, int y, int x) {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }
  std::span<const float> plane(int c) const {
    return {data.data() + static_cast<size_t>(c) * height * width,
            static_cast<size_t>(height) * width};
  }
  std::span<float> plane(int c) {
    return {data.data() + static_cast<size_t>(c) * height * width,
            static_cast<size_t>(height) * width};
  }
  bool operator==(const FeatureMap&) const = default;
};

enum class LayerKind : std::uint8_t {
  kConv3x3 = 0,
  kConv1x1 = 1,
  kFullyConnected = 2,
};

// Weights are ordered (out, in, kernel row, kernel col).
struct LayerWeights {
  LayerKind kind = LayerKind::kConv3x3;
  int in_channels = 0;
  int out_channels = 0;
  std::vector<float> weights;
  std::vector<float> bias;

  int kernel_size() const { return kind == LayerKind::kConv3x3 ? 3 : 1; }
  size_t expected_weight_count() const;
  size_t parameter_count() const { return weights.size() + bias.size(); }
  bool operator==(const LayerWeights&) const = default;
};

struct NetworkWeights {
  Component component = Component::kLuma;
  std::vector<LayerWeights> layers;

  size_t parameter_count() const;
  bool operator==(const NetworkWeights&) const = default;
};

struct ScalingBlock {
  int residual_units = 2;
  int channels = 16;
  int pool_size = 2;
};

// Layout of the boundary network: a 3x3 stem, scaling blocks of residual
// units each closed by a max pool, an optional extra pool, an optional 1x1
// reduction, then a single fully-connected layer over the flattened features
// plus the normalized Qstep, and a sigmoid.
struct ArchitectureSpec {
  int input_channels = 1;
  int stem_channels = 16;
  std::vector<ScalingBlock> blocks;
  int final_pool = 4;     // 1 disables the extra pool
  int head_channels = 24; // 0 disables the 1x1 reduction
  int output_size = kBoundaryCount;

  // 13 3x3 convolutions, ~226k parameters.
  static ArchitectureSpec standard(Component c = Component::kLuma);

  struct LayerShape {
    LayerKind kind;
    int in_channels;
    int out_channels;
    bool operator==(const LayerShape&) const = default;
  };
  // Expected layer sequence of the weight file: stem; per residual unit
  // conv_a, conv_b, then a 1x1 skip projection when channels change; the
  // reduction; the fully-connected layer.
  std::vector<LayerShape> layer_shapes() const;
  // Spatial side of the features entering the head for a 65x65 input.
  int head_side() const;
  int conv3x3_count() const;
  size_t parameter_count() const;
};

ArchitectureSpec parse_architecture_json(const std::string& text);
ArchitectureSpec load_architecture_file(const std::string& path);
std::string architecture_to_json(const ArchitectureSpec& arch);

// BPWT reader/writer.  Errors: kBadMagic, kVersionUnsupported,
// kShapeMismatch, kTruncatedStream, kChecksumMismatch.
NetworkWeights load_weights(std::span<const std::byte> bytes);
NetworkWeights load_weights_file(const std::string& path);
std::vector<std::byte> serialize_weights(const NetworkWeights& w);

// Throws Error(kShapeMismatch) unless `w` has exactly the layers of `arch`.
void check_compatible(const NetworkWeights& w, const ArchitectureSpec& arch);

// Deterministic He-style initialization, for fixtures and benchmarks.
NetworkWeights random_weights(const ArchitectureSpec& arch, Component c,
                              std::uint64_t seed);
NetworkWeights zero_weights(const ArchitectureSpec& arch, Component c);

// Kernels.  The default versions parallelize over output channels with
// OpenMP; every output element is accumulated in the same order whatever
// the thread count.  The `_reference` versions are plain scalar loops kept
// as test oracles and benchmark baselines.
FeatureMap conv2d_same(const FeatureMap& in, const LayerWeights& layer);
FeatureMap conv2d_same_reference(const FeatureMap& in,
                                 const LayerWeights& layer);
void relu_inplace(FeatureMap& m);
// ReLU(in + conv_b(ReLU(conv_a(in)))), with `projection` (1x1) on the skip
// path when it is not null.
FeatureMap residual_unit(const FeatureMap& in, const LayerWeights& conv_a,
                         const LayerWeights& conv_b,
                         const LayerWeights* projection = nullptr);
FeatureMap residual_unit_reference(const FeatureMap& in,
                                   const LayerWeights& conv_a,
                                   const LayerWeights& conv_b,
                                   const LayerWeights* projection = nullptr);
// size x size max pooling with stride `size`; ragged edges pool over the
// samples that exist.
FeatureMap max_pool(const FeatureMap& in, int size = 2);
std::vector<float> fully_connected(std::span<const float> in,
                                   const LayerWeights& layer);

// Immutable network; forward() is safe to call concurrently.
class Network {
 public:
  Network(NetworkWeights weights, ArchitectureSpec arch);

  // Errors: kChannelMismatch, kOutOfRange (qstep_norm), kShapeMismatch.
  BoundaryVector forward(const Patch& patch) const;
  BoundaryVector forward_reference(const Patch& patch) const;

  const NetworkWeights& weights() const { return weights_; }
  const ArchitectureSpec& architecture() const { return arch_; }

 private:
  template <bool kReference>
  BoundaryVector run(const Patch& patch) const;

  NetworkWeights weights_;
  ArchitectureSpec arch_;
};

BoundaryVector forward(const NetworkWeights& w, const ArchitectureSpec& arch,
                       const Patch& p);

}  // namespace ppilot

#endif  // PARTITION_PILOT_INFERENCE_H_
