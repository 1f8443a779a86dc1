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

#include <algorithm>
#include <cmath>
#include <limits>

#include "partition_pilot/inference.h"
#include "partition_pilot/status.h"

namespace ppilot {

Patch Patch::zeros(Component c) {
  Patch p;
  p.component = c;
  p.samples.assign(static_cast<size_t>(p.channels()) * kPatchArea, 0.0f);
  return p;
}

void validate_patch(const Patch& p) {
  if (p.samples.size() != static_cast<size_t>(p.channels()) * kPatchArea) {
    throw Error(ErrorCode::kShapeMismatch, "patch must be 65x65 per channel");
  }
  if (!(p.qstep_norm >= 0.0f && p.qstep_norm <= 1.0f)) {
    throw Error(ErrorCode::kOutOfRange, "qstep_norm outside [0,1]");
  }
}

Network::Network(NetworkWeights weights, ArchitectureSpec arch)
    : weights_(std::move(weights)), arch_(std::move(arch)) {
  check_compatible(weights_, arch_);
}

namespace {

float sigmoid(float z) {
  const float s = 1.0f / (1.0f + std::exp(-z));
  // Saturate at the representable neighbours of 0 and 1.
  return std::clamp(s, std::numeric_limits<float>::min(),
                    std::nextafter(1.0f, 0.0f));
}

}  // namespace

template <bool kReference>
BoundaryVector Network::run(const Patch& patch) const {
  validate_patch(patch);
  if (patch.channels() != arch_.input_channels) {
    throw Error(ErrorCode::kChannelMismatch,
                "model takes " + std::to_string(arch_.input_channels) +
                    " channels, patch has " + std::to_string(patch.channels()));
  }
  const auto conv = [](const FeatureMap& m, const LayerWeights& l) {
    if constexpr (kReference) {
      return conv2d_same_reference(m, l);
    } else {
      return conv2d_same(m, l);
    }
  };
  const auto unit = [](const FeatureMap& m, const LayerWeights& a,
                       const LayerWeights& b, const LayerWeights* p) {
    if constexpr (kReference) {
      return residual_unit_reference(m, a, b, p);
    } else {
      return residual_unit(m, a, b, p);
    }
  };

  const auto& layers = weights_.layers;
  size_t li = 0;
  FeatureMap x(patch.channels(), kPatchSize, kPatchSize);
  x.data = patch.samples;

  x = conv(x, layers[li++]);
  relu_inplace(x);
  for (const ScalingBlock& block : arch_.blocks) {
    for (int u = 0; u < block.residual_units; ++u) {
      const LayerWeights& a = layers[li++];
      const LayerWeights& b = layers[li++];
      const LayerWeights* projection = nullptr;
      if (x.channels != block.channels) projection = &layers[li++];
      x = unit(x, a, b, projection);
    }
    x = max_pool(x, block.pool_size);
  }
  if (arch_.final_pool > 1) x = max_pool(x, arch_.final_pool);
  if (arch_.head_channels > 0) {
    x = conv(x, layers[li++]);
    relu_inplace(x);
  }

  std::vector<float> features = std::move(x.data);
  features.push_back(patch.qstep_norm);
  const std::vector<float> logits = fully_connected(features, layers[li]);

  BoundaryVector out;
  for (int i = 0; i < kBoundaryCount; ++i) {
    out[i] = sigmoid(logits[static_cast<size_t>(i)]);
  }
  return out;
}

BoundaryVector Network::forward(const Patch& patch) const {
  return run<false>(patch);
}

BoundaryVector Network::forward_reference(const Patch& patch) const {
  return run<true>(patch);
}

BoundaryVector forward(const NetworkWeights& w, const ArchitectureSpec& arch,
                       const Patch& p) {
  return Network(w, arch).forward(p);
}

}  // namespace ppilot
