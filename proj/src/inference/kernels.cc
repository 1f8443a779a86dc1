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

#include <omp.h>

#include <algorithm>
#include <limits>

#include "partition_pilot/inference.h"
#include "partition_pilot/status.h"

namespace ppilot {

namespace {

void check_conv(const FeatureMap& in, const LayerWeights& l) {
  if (l.kind == LayerKind::kFullyConnected) {
    throw Error(ErrorCode::kShapeMismatch, "fully-connected layer used as conv");
  }
  if (in.channels != l.in_channels ||
      l.weights.size() != l.expected_weight_count() ||
      l.bias.size() != static_cast<size_t>(l.out_channels)) {
    throw Error(ErrorCode::kShapeMismatch,
                "conv expects " + std::to_string(l.in_channels) +
                    " input channels, got " + std::to_string(in.channels));
  }
}

}  // namespace

FeatureMap conv2d_same(const FeatureMap& in, const LayerWeights& l) {
  check_conv(in, l);
  const int h = in.height;
  const int w = in.width;
  const int k = l.kernel_size();
  const int r = k / 2;
  FeatureMap out(l.out_channels, h, w);

#pragma omp parallel for schedule(static)
  for (int oc = 0; oc < l.out_channels; ++oc) {
    std::span<float> dst = out.plane(oc);
    std::fill(dst.begin(), dst.end(), l.bias[static_cast<size_t>(oc)]);
    for (int ic = 0; ic < l.in_channels; ++ic) {
      const float* src = in.plane(ic).data();
      const float* kernel =
          l.weights.data() + (static_cast<size_t>(oc) * l.in_channels + ic) * k * k;
      for (int ky = 0; ky < k; ++ky) {
        const int dy = ky - r;
        const int y0 = std::max(0, -dy);
        const int y1 = std::min(h, h - dy);
        for (int kx = 0; kx < k; ++kx) {
          const int dx = kx - r;
          const int x0 = std::max(0, -dx);
          const int x1 = std::min(w, w - dx);
          const float wt = kernel[ky * k + kx];
          for (int y = y0; y < y1; ++y) {
            const float* s = src + static_cast<size_t>(y + dy) * w + dx;
            float* d = dst.data() + static_cast<size_t>(y) * w;
            for (int x = x0; x < x1; ++x) d[x] += wt * s[x];
          }
        }
      }
    }
  }
  return out;
}

void relu_inplace(FeatureMap& m) {
  for (float& v : m.data) v = std::max(v, 0.0f);
}

FeatureMap residual_unit(const FeatureMap& in, const LayerWeights& conv_a,
                         const LayerWeights& conv_b,
                         const LayerWeights* projection) {
  FeatureMap mid = conv2d_same(in, conv_a);
  relu_inplace(mid);
  FeatureMap out = conv2d_same(mid, conv_b);
  const FeatureMap skip = projection ? conv2d_same(in, *projection) : in;
  if (skip.data.size() != out.data.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "residual branch and skip path differ in shape");
  }
  for (size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] = std::max(out.data[i] + skip.data[i], 0.0f);
  }
  return out;
}

FeatureMap max_pool(const FeatureMap& in, int size) {
  const int oh = (in.height + size - 1) / size;
  const int ow = (in.width + size - 1) / size;
  FeatureMap out(in.channels, oh, ow);
  for (int c = 0; c < in.channels; ++c) {
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        float m = -std::numeric_limits<float>::infinity();
        const int y_end = std::min(in.height, (oy + 1) * size);
        const int x_end = std::min(in.width, (ox + 1) * size);
        for (int y = oy * size; y < y_end; ++y) {
          for (int x = ox * size; x < x_end; ++x) m = std::max(m, in.at(c, y, x));
        }
        out.at(c, oy, ox) = m;
      }
    }
  }
  return out;
}

std::vector<float> fully_connected(std::span<const float> in,
                                   const LayerWeights& l) {
  if (l.kind != LayerKind::kFullyConnected ||
      in.size() != static_cast<size_t>(l.in_channels) ||
      l.weights.size() != l.expected_weight_count()) {
    throw Error(ErrorCode::kShapeMismatch,
                "fully-connected layer expects " +
                    std::to_string(l.in_channels) + " inputs, got " +
                    std::to_string(in.size()));
  }
  std::vector<float> out(static_cast<size_t>(l.out_channels));
  for (int o = 0; o < l.out_channels; ++o) {
    const float* row = l.weights.data() + static_cast<size_t>(o) * l.in_channels;
    float acc = l.bias[static_cast<size_t>(o)];
    for (size_t i = 0; i < in.size(); ++i) acc += row[i] * in[i];
    out[static_cast<size_t>(o)] = acc;
  }
  return out;
}

}  // namespace ppilot
