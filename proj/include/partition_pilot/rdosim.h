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

#ifndef PARTITION_PILOT_RDOSIM_H_
#define PARTITION_PILOT_RDOSIM_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "partition_pilot/geometry.h"
#include "partition_pilot/image.h"
#include "partition_pilot/selector.h"

namespace ppilot {

inline constexpr int kMinQp = 19;
inline constexpr int kMaxQp = 41;

// qstep = 2^((qp - 4) / 6).
double qstep_for_qp(int qp);

// Rate-distortion cost model of the toy intra coder.  Costs are
// J = D + lambda * R with lambda = lambda_scale * qstep^2.
struct CostModel {
  int qp = 32;
  double lambda_scale = 0.057;
  double coef_bits = 4.0;
  double header_bits = 8.0;
  double split_signal_bits = 2.0;

  double qstep() const { return qstep_for_qp(qp); }
  double lambda() const { return lambda_scale * qstep() * qstep(); }
};

struct LeafCost {
  double distortion = 0.0;
  double rate = 0.0;
};

// Codes `rect` of `block` as one leaf: separable orthonormal DCT-II of the
// exact leaf size, uniform quantization with step qstep (round half away
// from zero), reconstruction, and squared error in the sample domain.
// Rate counts coef_bits per nonzero level plus header_bits.
LeafCost leaf_cost(const Plane& block, const BlockRect& rect,
                   const CostModel& model);

// RD cost of a fixed tree.  Split nodes pay split_signal_bits each.
double tree_cost(const Plane& block, const PartitionTree& tree,
                 const CostModel& model);

struct RDResult {
  PartitionTree tree;
  double cost = 0.0;
  // Distinct (block, context) states evaluated.
  std::int64_t nodes_checked = 0;
  int leaves = 0;
};

// Minimum-cost tree over every structure `limits` permits.  The root is the
// whole plane (a power of two between 4 and 64).
RDResult exhaustive_rdo(const Plane& block, const TreeLimits& limits,
                        const CostModel& model);
RDResult exhaustive_rdo(const Plane& block, const SpeedControlConfig& cfg,
                        const CostModel& model);

// Same search restricted at each node to the modes kept by select_splits()
// and apply_constraints() for `boundary`.  The plane must be 64x64.
RDResult pruned_rdo(const Plane& block, const BoundaryVector& boundary,
                    const SpeedControlConfig& cfg, const CostModel& model,
                    Component component = Component::kLuma);

// Ground-truth boundaries of the exhaustive optimum.
BoundaryVector oracle_boundaries(const Plane& block, const TreeLimits& limits,
                                 const CostModel& model);

enum class RuleSet { kQt, kQtBt, kQtBtAbt };

struct EnumerationCounts {
  // Distinct (block, context) states, i.e. evaluations with memoization.
  std::uint64_t memoized = 0;
  // Node visits of a search without memoization (saturates at 2^64 - 1).
  std::uint64_t raw = 0;
};

// Sub-block evaluations of an exhaustive search over a `root_size` root.
// `limits.allow_bt` and `limits.allow_abt` are overridden by `rules`.
EnumerationCounts enumerate_combinations(int root_size, TreeLimits limits,
                                         RuleSet rules);

using BoundaryPredictor =
    std::function<BoundaryVector(const Image& img, int root_x, int root_y,
                                 int qp)>;

struct SweepOptions {
  std::vector<double> speed_controls;
  CostModel model;
  ThresholdSchedule schedule;
  // Replaces the schedule's luma thresholds for every speed-control value.
  std::optional<ThresholdTable> thresholds;
  int threads = 1;
};

struct SweepRow {
  double speed_control = 0.0;
  double cost_increase_pct = 0.0;  // mean over root blocks
  double node_ratio = 0.0;         // pruned / anchor nodes checked
  double time_ratio = 0.0;         // (prediction + pruned) / anchor time
};

// Compares pruned search against the exhaustive anchor with the same tree
// structure for every speed-control value.  Throws Error(kEmptyCorpus) when
// the corpus holds no whole 64x64 block.
std::vector<SweepRow> sweep_tradeoff(const std::vector<Image>& corpus,
                                     const SweepOptions& options,
                                     const BoundaryPredictor& predict);

std::vector<double> speed_control_range(double from, double to, double step);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_sweep_json(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace ppilot

#endif  // PARTITION_PILOT_RDOSIM_H_
