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

#ifndef PARTITION_PILOT_SELECTOR_H_
#define PARTITION_PILOT_SELECTOR_H_

#include <array>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "partition_pilot/geometry.h"

namespace ppilot {

// Deepest split depth that carries its own thresholds; deeper nodes reuse
// the last row.
inline constexpr int kThresholdDepths = 16;

// Pruning thresholds indexed by split depth (number of splits from the root)
// and split family.
class ThresholdTable {
 public:
  ThresholdTable() { fill(0.0); }

  static ThresholdTable uniform(double t) {
    ThresholdTable table;
    table.fill(t);
    return table;
  }

  double at(int depth, SplitFamily family) const;
  void set(int depth, SplitFamily family, double value);
  void fill(double value);

  bool operator==(const ThresholdTable&) const = default;

 private:
  std::array<std::array<double, kNumSplitFamilies>, kThresholdDepths> values_;
};

// One row of the speed-control to tree-structure mapping.
struct TreeStructureRow {
  double begin;  // inclusive
  double end;    // exclusive; infinity for the last row
  int max_qt_depth;
  // BT/ABT depth allowed at QT levels 2 (64x64), 3 (32x32), 4 (16x16).
  std::array<int, 3> btabt_depth;
};

const std::vector<TreeStructureRow>& tree_structure_rows();
inline constexpr double kMinSpeedControl = 0.65;

// Calibration constants of the threshold schedule:
//   t(depth) = clamp(base + slope * (s - row_begin) + per_depth * depth, 0, 1)
struct ThresholdSchedule {
  double base = 0.2;
  double slope = 0.4;
  double per_depth = 0.05;
};

struct SpeedControlConfig {
  double speed_control = kMinSpeedControl;
  TreeLimits limits;
  ThresholdTable luma_thresholds;
  ThresholdTable chroma_thresholds;

  const ThresholdTable& thresholds(Component c) const {
    return c == Component::kLuma ? luma_thresholds : chroma_thresholds;
  }
  ThresholdTable& thresholds(Component c) {
    return c == Component::kLuma ? luma_thresholds : chroma_thresholds;
  }
  void set_all_thresholds(double t) {
    luma_thresholds.fill(t);
    chroma_thresholds.fill(t);
  }
};

// Throws Error(kOutOfRange) when s < 0.65 or s is not finite.
SpeedControlConfig config_from_speed_control(
    double s, const ThresholdSchedule& schedule = {});

// Reads `depth.family = value` lines (family: qt, bt, abt; depth: integer or
// `*`), optionally prefixed with `luma.` or `chroma.` (default luma).  `#`
// starts a comment.  Throws Error(kConfigSyntax) with the line number.
void load_thresholds(std::istream& in, SpeedControlConfig& cfg);
void load_thresholds_file(const std::string& path, SpeedControlConfig& cfg);

enum class Half { kFirst = 0, kSecond = 1 };

// Mean probability over one half of `line`.  With an odd segment count the
// middle segment belongs to the first half.
double line_half_score(const BoundaryImage& img, const SplitLine& line,
                       Half half);

// Half score of the single split line of a BT or ABT mode.  NoSplit, QT (two
// lines; see split_lines()), and splits impossible for `rect` raise
// Error(kIllegalSplitForRect).
double half_boundary_score(const BoundaryImage& img, const BlockRect& rect,
                           SplitMode mode, Half half);

// A threshold passes when it is not positive or the score exceeds it.
inline bool score_passes(double score, double threshold) {
  return threshold <= 0.0 || score > threshold;
}

struct HalfScore {
  SplitMode mode;
  Orientation orientation;
  Half half;
  double value;
};

struct SplitDecision {
  BlockRect rect;
  SplitSet candidates;
  std::vector<HalfScore> half_scores;
};

// Probable split selection for one sub-block of a 64x64 root.  NoSplit is
// always kept; every other legal mode is kept when its half scores pass the
// threshold for (depth, family).  QT needs a passing half on both lines.
SplitDecision select_splits(const BoundaryImage& img, const BlockRect& rect,
                            const SpeedControlConfig& cfg,
                            const TreeContext& ctx,
                            Component component = Component::kLuma);

// What the encoder already decided around the current block.
struct ExploredRecord {
  SplitMode parent_split = SplitMode::kNoSplit;
  int child_index = 0;
  std::optional<SplitMode> first_sibling_split;
  bool qt_legal_at_parent = false;
};

// The BT mode that, applied to both children of a BT split `parent`, would
// reproduce the QT partition of the parent.
std::optional<SplitMode> qt_emulation_partner(SplitMode parent);

// Encoder constraints: drops QT below BT/ABT, drops the BT direction that
// would complete a QT emulation under a BT parent whose QT was legal, and
// falls back to NoSplit when nothing remains.
SplitDecision apply_constraints(SplitDecision d, const TreeContext& ctx,
                                const ExploredRecord& history);

}  // namespace ppilot

#endif  // PARTITION_PILOT_SELECTOR_H_
