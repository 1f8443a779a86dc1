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

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include "partition_pilot/rdosim.h"

namespace ppilot {

double qstep_for_qp(int qp) { return std::exp2((qp - 4) / 6.0); }

namespace {

constexpr int kMaxTransform = kRootSize;

// Orthonormal DCT-II basis, basis[k * n + i] for sizes 4, 8, ..., 64.
class DctBank {
 public:
  static const DctBank& instance() {
    static const DctBank bank;
    return bank;
  }

  const std::vector<double>& basis(int n) const {
    return bases_[static_cast<size_t>(n / kUnit)];
  }

 private:
  DctBank() : bases_(kMaxTransform / kUnit + 1) {
    for (int n = kUnit; n <= kMaxTransform; n += kUnit) {
      auto& b = bases_[static_cast<size_t>(n / kUnit)];
      b.resize(static_cast<size_t>(n) * n);
      for (int k = 0; k < n; ++k) {
        const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
        for (int i = 0; i < n; ++i) {
          b[static_cast<size_t>(k) * n + i] =
              scale * std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * n));
        }
      }
    }
  }

  std::vector<std::vector<double>> bases_;
};

}  // namespace

LeafCost leaf_cost(const Plane& block, const BlockRect& rect,
                   const CostModel& model) {
  const int w = rect.width;
  const int h = rect.height;
  const auto& cw = DctBank::instance().basis(w);
  const auto& ch = DctBank::instance().basis(h);
  const size_t n = static_cast<size_t>(w) * h;

  std::vector<double> src(n), tmp(n), coef(n);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      src[static_cast<size_t>(r) * w + c] = block.at(rect.x + c, rect.y + r);
    }
  }

  // Rows: tmp[r][k] = sum_i src[r][i] * cw[k][i].
  for (int r = 0; r < h; ++r) {
    for (int k = 0; k < w; ++k) {
      double acc = 0.0;
      for (int i = 0; i < w; ++i) {
        acc += src[static_cast<size_t>(r) * w + i] *
               cw[static_cast<size_t>(k) * w + i];
      }
      tmp[static_cast<size_t>(r) * w + k] = acc;
    }
  }
  // Columns: coef[k][c] = sum_r ch[k][r] * tmp[r][c].
  for (int k = 0; k < h; ++k) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int r = 0; r < h; ++r) {
        acc += ch[static_cast<size_t>(k) * h + r] *
               tmp[static_cast<size_t>(r) * w + c];
      }
      coef[static_cast<size_t>(k) * w + c] = acc;
    }
  }

  const double qstep = model.qstep();
  int nonzero = 0;
  for (double& v : coef) {
    const double level = std::round(v / qstep);
    if (level != 0.0) ++nonzero;
    v = level * qstep;
  }

  // Inverse: tmp[r][c] = sum_k ch[k][r] * coef[k][c]; rec = tmp * cw.
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      for (int k = 0; k < h; ++k) {
        acc += ch[static_cast<size_t>(k) * h + r] *
               coef[static_cast<size_t>(k) * w + c];
      }
      tmp[static_cast<size_t>(r) * w + c] = acc;
    }
  }
  LeafCost out;
  for (int r = 0; r < h; ++r) {
    for (int i = 0; i < w; ++i) {
      double acc = 0.0;
      for (int k = 0; k < w; ++k) {
        acc += tmp[static_cast<size_t>(r) * w + k] *
               cw[static_cast<size_t>(k) * w + i];
      }
      const double err = src[static_cast<size_t>(r) * w + i] - acc;
      out.distortion += err * err;
    }
  }
  out.rate = nonzero * model.coef_bits + model.header_bits;
  return out;
}

double tree_cost(const Plane& block, const PartitionTree& tree,
                 const CostModel& model) {
  if (tree.children.empty()) {
    const LeafCost lc = leaf_cost(block, tree.rect, model);
    return lc.distortion + model.lambda() * lc.rate;
  }
  double sum = 0.0;
  for (const auto& c : tree.children) sum += tree_cost(block, c, model);
  return sum + model.lambda() * model.split_signal_bits;
}

}  // namespace ppilot
