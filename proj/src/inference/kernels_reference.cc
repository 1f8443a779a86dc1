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

// Scalar reference kernels, independent of kernels.cc.

#include <algorithm>

#include "partition_pilot/inference.h"
#include "partition_pilot/status.h"

namespace ppilot {

FeatureMap conv2d_same_reference(const FeatureMap& in,
                                 const LayerWeights& l) {
  if (l.kind == LayerKind::kFullyConnected || in.channels != l.in_channels) {
    throw Error(ErrorCode::kShapeMismatch, "reference conv shape mismatch");
  }
  const int k = l.kernel_size();
  const int r = k / 2;
  FeatureMap out(l.out_channels, in.height, in.width);
  for (int oc = 0; oc < l.out_channels; ++oc) {
    for (int y = 0; y < in.height; ++y) {
      for (int x = 0; x < in.width; ++x) {
        float acc = l.bias[static_cast<size_t>(oc)];
        for (int ic = 0; ic < l.in_channels; ++ic) {
          for (int ky = 0; ky < k; ++ky) {
            for (int kx = 0; kx < k; ++kx) {
              const int sy = y + ky - r;
              const int sx = x + kx - r;
              if (sy < 0 || sy >= in.height || sx < 0 || sx >= in.width) {
                continue;
              }
              const size_t wi =
                  ((static_cast<size_t>(oc) * l.in_channels + ic) * k + ky) * k +
                  kx;
              acc += l.weights[wi] * in.at(ic, sy, sx);
            }
          }
        }
        out.at(oc, y, x) = acc;
      }
    }
  }
  return out;
}

FeatureMap residual_unit_reference(const FeatureMap& in,
                                   const LayerWeights& conv_a,
                                   const LayerWeights& conv_b,
                                   const LayerWeights* projection) {
  FeatureMap mid = conv2d_same_reference(in, conv_a);
  for (float& v : mid.data) v = v > 0.0f ? v : 0.0f;
  FeatureMap out = conv2d_same_reference(mid, conv_b);
  const FeatureMap skip = projection ? conv2d_same_reference(in, *projection) : in;
  if (skip.data.size() != out.data.size()) {
    throw Error(ErrorCode::kShapeMismatch, "reference residual shape mismatch");
  }
  for (size_t i = 0; i < out.data.size(); ++i) {
    const float v = out.data[i] + skip.data[i];
    out.data[i] = v > 0.0f ? v : 0.0f;
  }
  return out;
}

}  // namespace ppilot
