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
#include <cstdint>
#include <functional>
#include <limits>
#include <unordered_map>

#include "partition_pilot/rdosim.h"
#include "partition_pilot/status.h"

namespace ppilot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint32_t rect_key(const BlockRect& r) {
  return static_cast<std::uint32_t>(r.x / kUnit) |
         static_cast<std::uint32_t>(r.y / kUnit) << 5 |
         static_cast<std::uint32_t>(r.width / kUnit) << 10 |
         static_cast<std::uint32_t>(r.height / kUnit) << 15;
}

std::uint32_t state_key(const BlockRect& r, const TreeContext& ctx) {
  return rect_key(r) | static_cast<std::uint32_t>(ctx.qt_level) << 20 |
         static_cast<std::uint32_t>(ctx.btabt_depth) << 23;
}

using CandidateFn =
    std::function<SplitSet(const BlockRect&, const TreeContext&)>;

// Memoized RD search over (block, context) states.  Each state stores the
// best cost of every explored top-level mode.
class PartitionSearch {
 public:
  PartitionSearch(const Plane& block, const TreeLimits& limits,
                  const CostModel& model, CandidateFn candidates)
      : block_(block),
        limits_(limits),
        model_(model),
        lambda_(model.lambda()),
        candidates_(std::move(candidates)) {}

  RDResult run() {
    const BlockRect root = BlockRect::root(block_.size);
    const TreeContext ctx = root_context(block_.size);
    const Entry& e = eval(root, ctx);
    RDResult result;
    result.cost = e.best(e.candidates);
    result.tree = build_best(root, ctx, e.candidates);
    result.nodes_checked = static_cast<std::int64_t>(memo_.size());
    result.leaves = result.tree.leaf_count();
    return result;
  }

 private:
  struct Entry {
    SplitSet candidates;
    bool qt_legal = false;
    std::array<double, kNumSplitModes> mode_cost;
    // For BT modes: the first child takes the QT-emulation partner.
    std::array<bool, kNumSplitModes> partner_first{};

    double best(SplitSet allowed) const {
      double b = kInf;
      for (SplitMode m : allowed.modes()) {
        if (candidates.contains(m)) b = std::min(b, cost(m));
      }
      return b;
    }
    SplitMode best_mode(SplitSet allowed) const {
      SplitMode pick = SplitMode::kNoSplit;
      double b = kInf;
      for (SplitMode m : allowed.modes()) {
        if (candidates.contains(m) && cost(m) < b) {
          b = cost(m);
          pick = m;
        }
      }
      return pick;
    }
    double cost(SplitMode m) const {
      return mode_cost[static_cast<size_t>(m)];
    }
  };

  // Candidates of the second child of BT `parent` once the first child
  // took `first_split`.
  static SplitSet second_child_allowed(const Entry& child, SplitMode parent,
                                       const TreeContext& child_ctx) {
    SplitDecision d;
    d.candidates = child.candidates;
    ExploredRecord history;
    history.parent_split = parent;
    history.child_index = 1;
    history.first_sibling_split = qt_emulation_partner(parent);
    history.qt_legal_at_parent = true;
    return apply_constraints(std::move(d), child_ctx, history).candidates;
  }

  double leaf(const BlockRect& r) {
    const std::uint32_t k = rect_key(r);
    if (auto it = leaf_cache_.find(k); it != leaf_cache_.end()) {
      return it->second;
    }
    const LeafCost lc = leaf_cost(block_, r, model_);
    const double j = lc.distortion + lambda_ * lc.rate;
    leaf_cache_.emplace(k, j);
    return j;
  }

  const Entry& eval(const BlockRect& r, const TreeContext& ctx) {
    const std::uint32_t key = state_key(r, ctx);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    Entry e;
    e.mode_cost.fill(kInf);
    e.candidates = candidates_(r, ctx);
    e.qt_legal = legal_splits(r, limits_, ctx).contains(SplitMode::kQt);
    const double split_cost = lambda_ * model_.split_signal_bits;

    for (SplitMode m : e.candidates.modes()) {
      auto& slot = e.mode_cost[static_cast<size_t>(m)];
      if (m == SplitMode::kNoSplit) {
        slot = leaf(r);
        continue;
      }
      const TreeContext next = child_context(ctx, m);
      const std::vector<BlockRect> kids = split_rect(r, m);
      const auto partner = qt_emulation_partner(m);
      if (partner && e.qt_legal) {
        const Entry& c0 = eval(kids[0], next);
        const Entry& c1 = eval(kids[1], next);
        SplitSet without_partner = c0.candidates;
        without_partner.erase(*partner);
        double free_sum = 0.0;
        free_sum += c0.best(without_partner);
        free_sum += c1.best(c1.candidates);
        double partner_sum = kInf;
        if (c0.candidates.contains(*partner)) {
          partner_sum = 0.0;
          partner_sum += c0.cost(*partner);
          partner_sum += c1.best(second_child_allowed(c1, m, next));
        }
        e.partner_first[static_cast<size_t>(m)] = partner_sum < free_sum;
        slot = std::min(free_sum, partner_sum) + split_cost;
        continue;
      }
      double sum = 0.0;
      for (const BlockRect& k : kids) {
        const Entry& c = eval(k, next);
        sum += c.best(c.candidates);
      }
      slot = sum + split_cost;
    }
    return memo_.emplace(key, e).first->second;
  }

  PartitionTree build_best(const BlockRect& r, const TreeContext& ctx,
                           SplitSet allowed) {
    const Entry& e = memo_.at(state_key(r, ctx));
    return build_mode(r, ctx, e.best_mode(allowed));
  }

  PartitionTree build_mode(const BlockRect& r, const TreeContext& ctx,
                           SplitMode m) {
    PartitionTree t{r, m, {}};
    if (m == SplitMode::kNoSplit) return t;
    const Entry& e = memo_.at(state_key(r, ctx));
    const TreeContext next = child_context(ctx, m);
    const std::vector<BlockRect> kids = split_rect(r, m);
    const auto partner = qt_emulation_partner(m);
    if (partner && e.qt_legal) {
      const Entry& c0 = memo_.at(state_key(kids[0], next));
      const Entry& c1 = memo_.at(state_key(kids[1], next));
      if (e.partner_first[static_cast<size_t>(m)]) {
        t.children.push_back(build_mode(kids[0], next, *partner));
        t.children.push_back(
            build_best(kids[1], next, second_child_allowed(c1, m, next)));
      } else {
        SplitSet without_partner = c0.candidates;
        without_partner.erase(*partner);
        t.children.push_back(build_best(kids[0], next, without_partner));
        t.children.push_back(build_best(kids[1], next, c1.candidates));
      }
      return t;
    }
    for (const BlockRect& k : kids) {
      const Entry& c = memo_.at(state_key(k, next));
      t.children.push_back(build_best(k, next, c.candidates));
    }
    return t;
  }

  const Plane& block_;
  TreeLimits limits_;
  CostModel model_;
  double lambda_;
  CandidateFn candidates_;
  std::unordered_map<std::uint32_t, Entry> memo_;
  std::unordered_map<std::uint32_t, double> leaf_cache_;
};

void check_root(const Plane& block) {
  if (block.size < kUnit || block.size > kRootSize ||
      (block.size & (block.size - 1)) != 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "root block side must be a power of two in [4, 64]");
  }
}

}  // namespace

RDResult exhaustive_rdo(const Plane& block, const TreeLimits& limits,
                        const CostModel& model) {
  check_root(block);
  PartitionSearch search(block, limits, model,
                         [&limits](const BlockRect& r, const TreeContext& c) {
                           return legal_splits(r, limits, c);
                         });
  return search.run();
}

RDResult exhaustive_rdo(const Plane& block, const SpeedControlConfig& cfg,
                        const CostModel& model) {
  return exhaustive_rdo(block, cfg.limits, model);
}

RDResult pruned_rdo(const Plane& block, const BoundaryVector& boundary,
                    const SpeedControlConfig& cfg, const CostModel& model,
                    Component component) {
  if (block.size != kRootSize) {
    throw Error(ErrorCode::kShapeMismatch, "pruned search needs a 64x64 root");
  }
  const BoundaryImage img = boundaries_to_image(boundary);
  PartitionSearch search(
      block, cfg.limits, model,
      [&](const BlockRect& r, const TreeContext& c) {
        SplitDecision d = select_splits(img, r, cfg, c, component);
        return apply_constraints(std::move(d), c, {}).candidates;
      });
  return search.run();
}

BoundaryVector oracle_boundaries(const Plane& block, const TreeLimits& limits,
                                 const CostModel& model) {
  return tree_to_boundaries(exhaustive_rdo(block, limits, model).tree);
}

}  // namespace ppilot
