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

#include <limits>
#include <unordered_map>

#include "partition_pilot/rdosim.h"

namespace ppilot {

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  return a > max - b ? max : a + b;
}

class Enumerator {
 public:
  explicit Enumerator(const TreeLimits& limits) : limits_(limits) {}

  // Raw visit count of the subtree search rooted at (r, ctx).
  std::uint64_t visit(const BlockRect& r, const TreeContext& ctx) {
    const Key key{r, ctx};
    if (auto it = raw_.find(key); it != raw_.end()) return it->second;
    std::uint64_t total = 1;
    for (SplitMode m : legal_splits(r, limits_, ctx).modes()) {
      if (m == SplitMode::kNoSplit) continue;
      const TreeContext next = child_context(ctx, m);
      for (const BlockRect& k : split_rect(r, m, limits_.min_block_size)) {
        total = saturating_add(total, visit(k, next));
      }
    }
    raw_.emplace(key, total);
    return total;
  }

  std::uint64_t distinct_states() const { return raw_.size(); }

 private:
  struct Key {
    BlockRect rect;
    TreeContext ctx;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      size_t h = static_cast<size_t>(k.rect.x);
      for (int v : {k.rect.y, k.rect.width, k.rect.height, k.ctx.qt_level,
                    k.ctx.btabt_depth}) {
        h = h * 131 + static_cast<size_t>(v);
      }
      return h;
    }
  };

  TreeLimits limits_;
  std::unordered_map<Key, std::uint64_t, KeyHash> raw_;
};

}  // namespace

EnumerationCounts enumerate_combinations(int root_size, TreeLimits limits,
                                         RuleSet rules) {
  limits.allow_bt = rules != RuleSet::kQt;
  limits.allow_abt = rules == RuleSet::kQtBtAbt;
  Enumerator e(limits);
  EnumerationCounts counts;
  counts.raw = e.visit(BlockRect::root(root_size), root_context(root_size));
  counts.memoized = e.distinct_states();
  return counts;
}

}  // namespace ppilot
