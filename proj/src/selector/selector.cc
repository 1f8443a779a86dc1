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

#include "partition_pilot/selector.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "partition_pilot/status.h"

namespace ppilot {

double ThresholdTable::at(int depth, SplitFamily family) const {
  depth = std::clamp(depth, 0, kThresholdDepths - 1);
  return values_[static_cast<size_t>(depth)][static_cast<size_t>(family)];
}

void ThresholdTable::set(int depth, SplitFamily family, double value) {
  if (depth < 0 || depth >= kThresholdDepths) {
    throw Error(ErrorCode::kOutOfRange,
                "threshold depth " + std::to_string(depth));
  }
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "threshold outside [0,1]");
  }
  values_[static_cast<size_t>(depth)][static_cast<size_t>(family)] = value;
}

void ThresholdTable::fill(double value) {
  for (auto& row : values_) row.fill(value);
}

const std::vector<TreeStructureRow>& tree_structure_rows() {
  static const std::vector<TreeStructureRow> rows = {
      {0.65, 1.04, 2, {8, 0, 0}},
      {1.04, 1.7, 3, {2, 8, 0}},
      {1.7, 3.2, 4, {0, 4, 8}},
      {3.2, std::numeric_limits<double>::infinity(), 3, {0, 8, 0}},
  };
  return rows;
}

SpeedControlConfig config_from_speed_control(double s,
                                             const ThresholdSchedule& sched) {
  if (!std::isfinite(s) || s < kMinSpeedControl) {
    throw Error(ErrorCode::kOutOfRange,
                "speed-control must be >= 0.65, got " + std::to_string(s));
  }
  const auto& rows = tree_structure_rows();
  const auto row = std::find_if(rows.begin(), rows.end(), [s](const auto& r) {
    return s >= r.begin && s < r.end;
  });

  SpeedControlConfig cfg;
  cfg.speed_control = s;
  cfg.limits.max_qt_depth = row->max_qt_depth;
  cfg.limits.btabt_depth_per_level.fill(0);
  for (size_t i = 0; i < row->btabt_depth.size(); ++i) {
    cfg.limits.btabt_depth_per_level[kRootQtLevel + i] = row->btabt_depth[i];
  }
  for (int depth = 0; depth < kThresholdDepths; ++depth) {
    const double t = std::clamp(sched.base + sched.slope * (s - row->begin) +
                                    sched.per_depth * depth,
                                0.0, 1.0);
    for (int f = 0; f < kNumSplitFamilies; ++f) {
      cfg.luma_thresholds.set(depth, static_cast<SplitFamily>(f), t);
      cfg.chroma_thresholds.set(depth, static_cast<SplitFamily>(f), t);
    }
  }
  return cfg;
}

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_dots(const std::string& key) {
  std::vector<std::string> parts;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, '.')) parts.push_back(trim(part));
  return parts;
}

}  // namespace

void load_thresholds(std::istream& in, SpeedControlConfig& cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::kConfigSyntax,
                  "line " + std::to_string(lineno) + ": " + why);
    };
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected `depth.family = value`");

    std::vector<std::string> key = split_dots(trim(line.substr(0, eq)));
    Component component = Component::kLuma;
    if (key.size() == 3) {
      if (key[0] == "luma") {
        component = Component::kLuma;
      } else if (key[0] == "chroma") {
        component = Component::kChroma;
      } else {
        fail("unknown component `" + key[0] + "`");
      }
      key.erase(key.begin());
    }
    if (key.size() != 2) fail("expected `depth.family = value`");

    SplitFamily family;
    if (key[1] == "qt") {
      family = SplitFamily::kQt;
    } else if (key[1] == "bt") {
      family = SplitFamily::kBt;
    } else if (key[1] == "abt") {
      family = SplitFamily::kAbt;
    } else {
      fail("unknown split family `" + key[1] + "`");
    }

    double value = 0.0;
    const std::string rhs = trim(line.substr(eq + 1));
    try {
      size_t used = 0;
      value = std::stod(rhs, &used);
      if (used != rhs.size()) fail("trailing characters after value");
    } catch (const std::logic_error&) {
      fail("bad number `" + rhs + "`");
    }
    if (!(value >= 0.0 && value <= 1.0)) fail("threshold outside [0,1]");

    ThresholdTable& table = cfg.thresholds(component);
    if (key[0] == "*") {
      for (int d = 0; d < kThresholdDepths; ++d) table.set(d, family, value);
      continue;
    }
    int depth = -1;
    try {
      size_t used = 0;
      depth = std::stoi(key[0], &used);
      if (used != key[0].size()) depth = -1;
    } catch (const std::logic_error&) {
      depth = -1;
    }
    if (depth < 0 || depth >= kThresholdDepths) {
      fail("depth must be `*` or an integer in [0," +
           std::to_string(kThresholdDepths - 1) + "]");
    }
    table.set(depth, family, value);
  }
}

void load_thresholds_file(const std::string& path, SpeedControlConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  load_thresholds(in, cfg);
}

double line_half_score(const BoundaryImage& img, const SplitLine& line,
                       Half half) {
  const int n = line.segment_count();
  const int first_len = (n + 1) / 2;
  const int from = half == Half::kFirst ? 0 : first_len;
  const int to = half == Half::kFirst ? first_len : n;
  if (to <= from) return 0.0;
  double sum = 0.0;
  for (int i = from; i < to; ++i) {
    const BoundaryIndex b = line.segment(i);
    sum += img.at(b.orientation, b.line, b.segment);
  }
  return sum / (to - from);
}

double half_boundary_score(const BoundaryImage& img, const BlockRect& rect,
                           SplitMode mode, Half half) {
  if (!is_binary(mode)) {
    throw Error(ErrorCode::kIllegalSplitForRect,
                std::string(to_string(mode)) + " has no single split line");
  }
  if (!rect.valid() || !can_split(rect, mode)) {
    throw Error(ErrorCode::kIllegalSplitForRect,
                std::string(to_string(mode)) + " off the 4-sample grid in " +
                    to_string(rect));
  }
  return line_half_score(img, split_lines(rect, mode).front(), half);
}

SplitDecision select_splits(const BoundaryImage& img, const BlockRect& rect,
                            const SpeedControlConfig& cfg,
                            const TreeContext& ctx, Component component) {
  SplitDecision d;
  d.rect = rect;
  d.candidates.insert(SplitMode::kNoSplit);
  const SplitSet legal = legal_splits(rect, cfg.limits, ctx);
  const int depth = split_depth(ctx);
  const ThresholdTable& table = cfg.thresholds(component);

  for (SplitMode mode : legal.modes()) {
    if (mode == SplitMode::kNoSplit) continue;
    const double t = table.at(depth, family_of(mode));
    bool every_line_fires = true;
    for (const SplitLine& line : split_lines(rect, mode)) {
      bool fires = false;
      for (Half h : {Half::kFirst, Half::kSecond}) {
        const double s = line_half_score(img, line, h);
        d.half_scores.push_back({mode, line.orientation, h, s});
        fires = fires || score_passes(s, t);
      }
      every_line_fires = every_line_fires && fires;
    }
    if (every_line_fires) d.candidates.insert(mode);
  }
  return d;
}

std::optional<SplitMode> qt_emulation_partner(SplitMode parent) {
  if (parent == SplitMode::kBtHorizontal) return SplitMode::kBtVertical;
  if (parent == SplitMode::kBtVertical) return SplitMode::kBtHorizontal;
  return std::nullopt;
}

SplitDecision apply_constraints(SplitDecision d, const TreeContext& ctx,
                                const ExploredRecord& history) {
  if (ctx.btabt_depth > 0) d.candidates.erase(SplitMode::kQt);

  const auto partner = qt_emulation_partner(history.parent_split);
  if (partner && history.qt_legal_at_parent && history.child_index == 1 &&
      history.first_sibling_split == *partner) {
    d.candidates.erase(*partner);
  }

  if (d.candidates.empty()) d.candidates.insert(SplitMode::kNoSplit);
  return d;
}

}  // namespace ppilot
