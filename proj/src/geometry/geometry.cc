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

#include "partition_pilot/geometry.h"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

namespace ppilot {

namespace {

constexpr std::array<std::string_view, kNumSplitModes> kModeNames = {
    "no_split", "qt", "bt_h", "bt_v", "abt_top", "abt_bottom", "abt_left",
    "abt_right"};

bool child_dims_ok(int dim, int min_size) {
  return dim >= min_size && dim % kUnit == 0;
}

}  // namespace

std::string_view to_string(SplitMode mode) {
  return kModeNames[static_cast<size_t>(mode)];
}

std::optional<SplitMode> split_mode_from_string(std::string_view name) {
  for (size_t i = 0; i < kModeNames.size(); ++i) {
    if (kModeNames[i] == name) return static_cast<SplitMode>(i);
  }
  return std::nullopt;
}

SplitFamily family_of(SplitMode mode) {
  switch (mode) {
    case SplitMode::kQt:
      return SplitFamily::kQt;
    case SplitMode::kBtHorizontal:
    case SplitMode::kBtVertical:
      return SplitFamily::kBt;
    case SplitMode::kAbtTop:
    case SplitMode::kAbtBottom:
    case SplitMode::kAbtLeft:
    case SplitMode::kAbtRight:
      return SplitFamily::kAbt;
    case SplitMode::kNoSplit:
      break;
  }
  throw GeometryError("no_split has no split family");
}

int SplitSet::size() const { return std::popcount(bits_); }

std::vector<SplitMode> SplitSet::modes() const {
  std::vector<SplitMode> out;
  for (SplitMode m : kAllSplitModes) {
    if (contains(m)) out.push_back(m);
  }
  return out;
}

std::string to_string(SplitSet set) {
  std::string out = "{";
  bool first = true;
  for (SplitMode m : set.modes()) {
    if (!first) out += ",";
    out += to_string(m);
    first = false;
  }
  return out + "}";
}

bool BlockRect::valid(int root_size) const {
  return x >= 0 && y >= 0 && width >= kUnit && height >= kUnit &&
         x % kUnit == 0 && y % kUnit == 0 && width % kUnit == 0 &&
         height % kUnit == 0 && x + width <= root_size &&
         y + height <= root_size;
}

std::string to_string(const BlockRect& r) {
  std::ostringstream os;
  os << r.width << "x" << r.height << "@(" << r.x << "," << r.y << ")";
  return os.str();
}

bool can_split(const BlockRect& r, SplitMode mode, int min_size) {
  const int w = r.width;
  const int h = r.height;
  switch (mode) {
    case SplitMode::kNoSplit:
      return false;
    case SplitMode::kQt:
      return w == h && w % 2 == 0 && child_dims_ok(w / 2, min_size);
    case SplitMode::kBtHorizontal:
      return h % 2 == 0 && child_dims_ok(h / 2, min_size);
    case SplitMode::kBtVertical:
      return w % 2 == 0 && child_dims_ok(w / 2, min_size);
    case SplitMode::kAbtTop:
    case SplitMode::kAbtBottom:
      return h % 4 == 0 && child_dims_ok(h / 4, min_size);
    case SplitMode::kAbtLeft:
    case SplitMode::kAbtRight:
      return w % 4 == 0 && child_dims_ok(w / 4, min_size);
  }
  return false;
}

std::vector<BlockRect> split_rect(const BlockRect& r, SplitMode mode,
                                  int min_size) {
  if (mode == SplitMode::kNoSplit) return {};
  if (!can_split(r, mode, min_size)) {
    throw GeometryError("split " + std::string(to_string(mode)) +
                        " is not possible for block " + to_string(r));
  }
  const int x = r.x, y = r.y, w = r.width, h = r.height;
  switch (mode) {
    case SplitMode::kQt:
      return {{x, y, w / 2, h / 2},
              {x + w / 2, y, w / 2, h / 2},
              {x, y + h / 2, w / 2, h / 2},
              {x + w / 2, y + h / 2, w / 2, h / 2}};
    case SplitMode::kBtHorizontal:
      return {{x, y, w, h / 2}, {x, y + h / 2, w, h / 2}};
    case SplitMode::kBtVertical:
      return {{x, y, w / 2, h}, {x + w / 2, y, w / 2, h}};
    case SplitMode::kAbtTop:
      return {{x, y, w, h / 4}, {x, y + h / 4, w, 3 * h / 4}};
    case SplitMode::kAbtBottom:
      return {{x, y, w, 3 * h / 4}, {x, y + 3 * h / 4, w, h / 4}};
    case SplitMode::kAbtLeft:
      return {{x, y, w / 4, h}, {x + w / 4, y, 3 * w / 4, h}};
    case SplitMode::kAbtRight:
      return {{x, y, 3 * w / 4, h}, {x + 3 * w / 4, y, w / 4, h}};
    case SplitMode::kNoSplit:
      break;
  }
  return {};
}

PartitionTree PartitionTree::split_once(const BlockRect& rect,
                                        SplitMode mode) {
  PartitionTree t{rect, mode, {}};
  for (const BlockRect& c : split_rect(rect, mode)) {
    t.children.push_back(leaf(c));
  }
  return t;
}

int PartitionTree::leaf_count() const {
  if (children.empty()) return 1;
  int n = 0;
  for (const auto& c : children) n += c.leaf_count();
  return n;
}

int PartitionTree::node_count() const {
  int n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

std::vector<BlockRect> PartitionTree::leaves() const {
  std::vector<BlockRect> out;
  std::vector<const PartitionTree*> stack{this};
  while (!stack.empty()) {
    const PartitionTree* t = stack.back();
    stack.pop_back();
    if (t->children.empty()) {
      out.push_back(t->rect);
      continue;
    }
    for (auto it = t->children.rbegin(); it != t->children.rend(); ++it) {
      stack.push_back(&*it);
    }
  }
  return out;
}

namespace {

void validate_node(const PartitionTree& t, int root_size) {
  if (!t.rect.valid(root_size)) {
    throw GeometryError("invalid block " + to_string(t.rect));
  }
  if (t.split == SplitMode::kNoSplit) {
    if (!t.children.empty()) {
      throw GeometryError("leaf " + to_string(t.rect) + " has children");
    }
    return;
  }
  const std::vector<BlockRect> expected = split_rect(t.rect, t.split);
  if (t.children.size() != expected.size()) {
    throw GeometryError("wrong child count under " + to_string(t.rect));
  }
  for (size_t i = 0; i < expected.size(); ++i) {
    if (t.children[i].rect != expected[i]) {
      throw GeometryError("child " + to_string(t.children[i].rect) +
                          " does not tile " + to_string(t.rect));
    }
    validate_node(t.children[i], root_size);
  }
}

}  // namespace

void validate_tree(const PartitionTree& tree, int root_size) {
  if (tree.rect != BlockRect::root(root_size)) {
    throw GeometryError("tree is not rooted at the full root block");
  }
  validate_node(tree, root_size);
}

int BoundaryIndex::canonical() const {
  if (line < 0 || line >= kInternalLines || segment < 0 ||
      segment >= kGridUnits) {
    throw GeometryError("boundary index out of range");
  }
  const int base =
      orientation == Orientation::kVertical ? 0 : kBoundariesPerOrientation;
  return base + line * kGridUnits + segment;
}

BoundaryIndex BoundaryIndex::from_canonical(int index) {
  if (index < 0 || index >= kBoundaryCount) {
    throw GeometryError("canonical boundary index out of range");
  }
  BoundaryIndex b;
  if (index >= kBoundariesPerOrientation) {
    b.orientation = Orientation::kHorizontal;
    index -= kBoundariesPerOrientation;
  }
  b.line = index / kGridUnits;
  b.segment = index % kGridUnits;
  return b;
}

bool BoundaryVector::is_binary() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](float v) { return v == 0.0f || v == 1.0f; });
}

int BoundaryVector::count_ones() const {
  return static_cast<int>(
      std::count(values_.begin(), values_.end(), 1.0f));
}

float BoundaryImage::at(Orientation o, int line, int segment) const {
  const auto& g = o == Orientation::kVertical ? vertical : horizontal;
  return g.at(static_cast<size_t>(line * kGridUnits + segment));
}

float& BoundaryImage::at(Orientation o, int line, int segment) {
  auto& g = o == Orientation::kVertical ? vertical : horizontal;
  return g.at(static_cast<size_t>(line * kGridUnits + segment));
}

BoundaryImage boundaries_to_image(const BoundaryVector& v) {
  BoundaryImage img;
  std::copy_n(v.values().begin(), kBoundariesPerOrientation,
              img.vertical.begin());
  std::copy_n(v.values().begin() + kBoundariesPerOrientation,
              kBoundariesPerOrientation, img.horizontal.begin());
  return img;
}

BoundaryVector image_to_vector(const BoundaryImage& img) {
  BoundaryVector v;
  std::copy(img.vertical.begin(), img.vertical.end(), v.values().begin());
  std::copy(img.horizontal.begin(), img.horizontal.end(),
            v.values().begin() + kBoundariesPerOrientation);
  return v;
}

BoundaryIndex SplitLine::segment(int i) const {
  return {orientation, position / kUnit - 1, start / kUnit + i};
}

std::vector<SplitLine> split_lines(const BlockRect& r, SplitMode mode) {
  const auto vline = [&](int pos) {
    return SplitLine{Orientation::kVertical, pos, r.y, r.height};
  };
  const auto hline = [&](int pos) {
    return SplitLine{Orientation::kHorizontal, pos, r.x, r.width};
  };
  switch (mode) {
    case SplitMode::kNoSplit:
      return {};
    case SplitMode::kQt:
      return {vline(r.x + r.width / 2), hline(r.y + r.height / 2)};
    case SplitMode::kBtHorizontal:
      return {hline(r.y + r.height / 2)};
    case SplitMode::kBtVertical:
      return {vline(r.x + r.width / 2)};
    case SplitMode::kAbtTop:
      return {hline(r.y + r.height / 4)};
    case SplitMode::kAbtBottom:
      return {hline(r.y + 3 * r.height / 4)};
    case SplitMode::kAbtLeft:
      return {vline(r.x + r.width / 4)};
    case SplitMode::kAbtRight:
      return {vline(r.x + 3 * r.width / 4)};
  }
  return {};
}

namespace {

void mark_split_lines(const PartitionTree& t, BoundaryVector& v) {
  for (const SplitLine& line : split_lines(t.rect, t.split)) {
    for (int i = 0; i < line.segment_count(); ++i) {
      v.at(line.segment(i)) = 1.0f;
    }
  }
  for (const auto& c : t.children) mark_split_lines(c, v);
}

}  // namespace

BoundaryVector tree_to_boundaries(const PartitionTree& tree) {
  validate_tree(tree);
  BoundaryVector v;
  mark_split_lines(tree, v);
  return v;
}

std::set<int> edge_set(const BoundaryVector& v) {
  std::set<int> out;
  for (int i = 0; i < kBoundaryCount; ++i) {
    if (v[i] >= 0.5f) out.insert(i);
  }
  return out;
}

std::set<int> leaf_boundary_edges(const PartitionTree& tree) {
  std::set<int> out;
  const auto add_side = [&](Orientation o, int pos, int from, int to) {
    if (pos <= 0 || pos >= kRootSize) return;
    for (int s = from; s < to; s += kUnit) {
      out.insert(BoundaryIndex{o, pos / kUnit - 1, s / kUnit}.canonical());
    }
  };
  for (const BlockRect& r : tree.leaves()) {
    add_side(Orientation::kVertical, r.x, r.y, r.y + r.height);
    add_side(Orientation::kVertical, r.x + r.width, r.y, r.y + r.height);
    add_side(Orientation::kHorizontal, r.y, r.x, r.x + r.width);
    add_side(Orientation::kHorizontal, r.y + r.height, r.x, r.x + r.width);
  }
  return out;
}

namespace {

class TreeRebuilder {
 public:
  explicit TreeRebuilder(const BoundaryVector& v) : set_(edge_set(v)) {}

  std::optional<PartitionTree> build(const BlockRect& r) {
    if (auto it = memo_.find(r); it != memo_.end()) return it->second;
    std::optional<PartitionTree> result;
    if (!has_interior_edge(r)) {
      result = PartitionTree::leaf(r);
    } else {
      for (SplitMode mode : kAllSplitModes) {
        if (mode == SplitMode::kNoSplit || !can_split(r, mode)) continue;
        if (!lines_set(r, mode)) continue;
        PartitionTree t{r, mode, {}};
        bool ok = true;
        for (const BlockRect& c : split_rect(r, mode)) {
          auto sub = build(c);
          if (!sub) {
            ok = false;
            break;
          }
          t.children.push_back(std::move(*sub));
        }
        if (ok) {
          result = std::move(t);
          break;
        }
      }
    }
    memo_.emplace(r, result);
    return result;
  }

 private:
  bool has_interior_edge(const BlockRect& r) const {
    for (int x = r.x + kUnit; x < r.x + r.width; x += kUnit) {
      for (int y = r.y; y < r.y + r.height; y += kUnit) {
        BoundaryIndex b{Orientation::kVertical, x / kUnit - 1, y / kUnit};
        if (set_.count(b.canonical())) return true;
      }
    }
    for (int y = r.y + kUnit; y < r.y + r.height; y += kUnit) {
      for (int x = r.x; x < r.x + r.width; x += kUnit) {
        BoundaryIndex b{Orientation::kHorizontal, y / kUnit - 1, x / kUnit};
        if (set_.count(b.canonical())) return true;
      }
    }
    return false;
  }

  bool lines_set(const BlockRect& r, SplitMode mode) const {
    for (const SplitLine& line : split_lines(r, mode)) {
      for (int i = 0; i < line.segment_count(); ++i) {
        if (!set_.count(line.segment(i).canonical())) return false;
      }
    }
    return true;
  }

  std::set<int> set_;
  std::map<BlockRect, std::optional<PartitionTree>> memo_;
};

}  // namespace

std::optional<PartitionTree> boundaries_to_tree(const BoundaryVector& v) {
  TreeRebuilder rebuilder(v);
  return rebuilder.build(BlockRect::root());
}

int TreeLimits::btabt_budget(int qt_level) const {
  if (qt_level < 0 || qt_level > kMaxQtLevel) return 0;
  return btabt_depth_per_level[static_cast<size_t>(qt_level)];
}

int root_qt_level(int size) {
  if (size < kUnit || size > 2 * kRootSize || !std::has_single_bit(
                                                  static_cast<unsigned>(size))) {
    throw GeometryError("root size must be a power of two in [4, 128]");
  }
  return kRootQtLevel + std::countr_zero(static_cast<unsigned>(kRootSize)) -
         std::countr_zero(static_cast<unsigned>(size));
}

TreeContext root_context(int root_size) {
  return {root_qt_level(root_size), 0};
}

TreeContext child_context(const TreeContext& ctx, SplitMode mode) {
  if (mode == SplitMode::kQt) return {ctx.qt_level + 1, 0};
  return {ctx.qt_level, ctx.btabt_depth + 1};
}

int split_depth(const TreeContext& ctx, int root_size) {
  return ctx.qt_level - root_qt_level(root_size) + ctx.btabt_depth;
}

SplitSet legal_splits(const BlockRect& rect, const TreeLimits& limits,
                      const TreeContext& ctx) {
  SplitSet out{SplitMode::kNoSplit};
  const int min = limits.min_block_size;
  if (ctx.btabt_depth == 0 && ctx.qt_level < limits.max_qt_depth &&
      rect.width == rect.height && can_split(rect, SplitMode::kQt, min)) {
    out.insert(SplitMode::kQt);
  }
  if (ctx.btabt_depth >= limits.btabt_budget(ctx.qt_level)) return out;
  const auto add_if = [&](SplitMode m) {
    if (can_split(rect, m, min)) out.insert(m);
  };
  if (limits.allow_bt) {
    add_if(SplitMode::kBtHorizontal);
    add_if(SplitMode::kBtVertical);
  }
  if (limits.allow_abt) {
    add_if(SplitMode::kAbtTop);
    add_if(SplitMode::kAbtBottom);
    add_if(SplitMode::kAbtLeft);
    add_if(SplitMode::kAbtRight);
  }
  return out;
}

namespace {

bool respects(const PartitionTree& t, const TreeLimits& limits,
              const TreeContext& ctx) {
  if (!legal_splits(t.rect, limits, ctx).contains(t.split)) return false;
  const TreeContext next = child_context(ctx, t.split);
  return std::all_of(t.children.begin(), t.children.end(),
                     [&](const PartitionTree& c) {
                       return respects(c, limits, next);
                     });
}

}  // namespace

bool tree_respects_limits(const PartitionTree& tree,
                          const TreeLimits& limits) {
  return respects(tree, limits, root_context(tree.rect.width));
}

}  // namespace ppilot
