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

#ifndef PARTITION_PILOT_TESTS_SUPPORT_ORACLES_H_
#define PARTITION_PILOT_TESTS_SUPPORT_ORACLES_H_

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "partition_pilot/geometry.h"
#include "partition_pilot/image.h"
#include "partition_pilot/inference.h"
#include "partition_pilot/rdosim.h"

namespace ppilot::testing {

// Random tree whose every split is legal under `limits`.
PartitionTree random_tree(std::mt19937_64& rng, int root_size,
                          const TreeLimits& limits, double split_prob);

// Limits allowing every split family down to 4x4.
TreeLimits permissive_limits(int btabt_depth = 4);

// Internal edges found by labelling every 4x4 unit with its leaf and
// comparing neighbours.
std::set<int> unit_grid_edges(const PartitionTree& tree);

Plane random_plane(std::mt19937_64& rng, int size);

// Textured block: piecewise-constant regions on the 4-sample grid plus noise.
Plane structured_plane(std::mt19937_64& rng, int size);

// Direct 2-D DCT-II of a w x h region: coef[v * w + u].
std::vector<double> direct_dct2(const Plane& block, const BlockRect& r);
std::vector<double> direct_idct2(const std::vector<double>& coef, int w,
                                 int h);

// Leaf cost from the direct transforms above.
LeafCost direct_leaf_cost(const Plane& block, const BlockRect& r,
                          const CostModel& model);

// Sum-of-products convolution with zero padding.
FeatureMap naive_conv(const FeatureMap& in, const LayerWeights& layer);

struct BruteForceResult {
  double cost = 0.0;
  PartitionTree tree;
  std::int64_t visits = 0;
};

// RD search without memoization: every child pair of every legal split is
// tried, the pair (partner, partner) of a BT split whose parent allows QT
// excluded.
BruteForceResult brute_force_rdo(const Plane& block, const TreeLimits& limits,
                                 const CostModel& model);

// Number of distinct trees under `limits` with the same sibling rule.
std::uint64_t count_trees(int root_size, const TreeLimits& limits);

}  // namespace ppilot::testing

#endif  // PARTITION_PILOT_TESTS_SUPPORT_ORACLES_H_
