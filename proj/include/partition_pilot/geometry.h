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

#ifndef PARTITION_PILOT_GEOMETRY_H_
#define PARTITION_PILOT_GEOMETRY_H_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ppilot {

inline constexpr int kRootSize = 64;
// Side of an elementary block; every boundary segment is this many samples.
inline constexpr int kUnit = 4;
inline constexpr int kGridUnits = kRootSize / kUnit;         // 16
inline constexpr int kInternalLines = kGridUnits - 1;        // 15
inline constexpr int kBoundariesPerOrientation = kInternalLines * kGridUnits;
inline constexpr int kBoundaryCount = 2 * kBoundariesPerOrientation;  // 480

// QT level of a 64x64 root block (the CTU is level 0, 128x128 is level 1).
inline constexpr int kRootQtLevel = 2;
inline constexpr int kMaxQtLevel = 6;  // 4x4

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Component : std::uint8_t { kLuma = 0, kChroma = 1 };

enum class SplitMode : std::uint8_t {
  kNoSplit = 0,
  kQt,
  kBtHorizontal,
  kBtVertical,
  kAbtTop,
  kAbtBottom,
  kAbtLeft,
  kAbtRight,
};
inline constexpr int kNumSplitModes = 8;

inline constexpr std::array<SplitMode, kNumSplitModes> kAllSplitModes = {
    SplitMode::kNoSplit,      SplitMode::kQt,         SplitMode::kBtHorizontal,
    SplitMode::kBtVertical,   SplitMode::kAbtTop,     SplitMode::kAbtBottom,
    SplitMode::kAbtLeft,      SplitMode::kAbtRight};

std::string_view to_string(SplitMode mode);
std::optional<SplitMode> split_mode_from_string(std::string_view name);

enum class SplitFamily : std::uint8_t { kQt = 0, kBt, kAbt };
inline constexpr int kNumSplitFamilies = 3;

// Family of a splitting mode. NoSplit has no family; callers must not ask.
SplitFamily family_of(SplitMode mode);
inline bool is_binary(SplitMode m) {
  return m != SplitMode::kNoSplit && m != SplitMode::kQt;
}

// Small value set of split modes, ordered by enum value on iteration.
class SplitSet {
 public:
  constexpr SplitSet() = default;
  constexpr SplitSet(std::initializer_list<SplitMode> modes) {
    for (SplitMode m : modes) insert(m);
  }

  static constexpr SplitSet all() {
    SplitSet s;
    s.bits_ = 0xFF;
    return s;
  }

  constexpr void insert(SplitMode m) { bits_ |= bit(m); }
  constexpr void erase(SplitMode m) {
    bits_ &= static_cast<std::uint8_t>(~bit(m));
  }
  constexpr bool contains(SplitMode m) const { return (bits_ & bit(m)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  int size() const;
  constexpr bool is_subset_of(SplitSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr std::uint8_t bits() const { return bits_; }
  std::vector<SplitMode> modes() const;

  constexpr bool operator==(const SplitSet&) const = default;

 private:
  static constexpr std::uint8_t bit(SplitMode m) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(m));
  }
  std::uint8_t bits_ = 0;
};

std::string to_string(SplitSet set);

// Rectangle inside a root block, in samples relative to its top-left corner.
struct BlockRect {
  int x = 0;
  int y = 0;
  int width = kRootSize;
  int height = kRootSize;

  static constexpr BlockRect root(int size = kRootSize) {
    return {0, 0, size, size};
  }

  // 4-aligned, at least 4x4, and inside a root of side `root_size`.
  bool valid(int root_size = kRootSize) const;
  auto operator<=>(const BlockRect&) const = default;
};

std::string to_string(const BlockRect& r);

// Children rectangles produced by `mode`, in coding order (top/left first).
// Throws GeometryError if a child would not be a positive multiple of
// `min_size` samples in each dimension.
std::vector<BlockRect> split_rect(const BlockRect& rect, SplitMode mode,
                                  int min_size = kUnit);

// True when split_rect() would succeed.
bool can_split(const BlockRect& rect, SplitMode mode, int min_size = kUnit);

struct PartitionTree {
  BlockRect rect;
  SplitMode split = SplitMode::kNoSplit;
  std::vector<PartitionTree> children;

  static PartitionTree leaf(const BlockRect& rect) { return {rect, {}, {}}; }
  // Splits this node once; children are leaves.
  static PartitionTree split_once(const BlockRect& rect, SplitMode mode);

  int leaf_count() const;
  int node_count() const;
  std::vector<BlockRect> leaves() const;
  bool operator==(const PartitionTree&) const = default;
};

// Structural check of the tiling invariants; throws GeometryError.
void validate_tree(const PartitionTree& tree, int root_size = kRootSize);

enum class Orientation : std::uint8_t { kVertical = 0, kHorizontal = 1 };

// One elementary boundary segment.  For vertical boundaries `line` selects the
// internal grid line x = 4*(line+1) and `segment` the 4-sample span along y;
// horizontal boundaries swap the axes.
struct BoundaryIndex {
  Orientation orientation = Orientation::kVertical;
  int line = 0;     // 0..14
  int segment = 0;  // 0..15

  int canonical() const;
  static BoundaryIndex from_canonical(int index);
  auto operator<=>(const BoundaryIndex&) const = default;
};

class BoundaryVector {
 public:
  BoundaryVector() { values_.fill(0.0f); }
  explicit BoundaryVector(const std::array<float, kBoundaryCount>& v)
      : values_(v) {}

  float& operator[](int i) { return values_.at(static_cast<size_t>(i)); }
  float operator[](int i) const { return values_.at(static_cast<size_t>(i)); }
  float& at(const BoundaryIndex& b) { return (*this)[b.canonical()]; }
  float at(const BoundaryIndex& b) const { return (*this)[b.canonical()]; }

  static constexpr int size() { return kBoundaryCount; }
  const std::array<float, kBoundaryCount>& values() const { return values_; }
  std::array<float, kBoundaryCount>& values() { return values_; }

  bool is_binary() const;
  int count_ones() const;
  bool operator==(const BoundaryVector&) const = default;

 private:
  std::array<float, kBoundaryCount> values_;
};

// The vector rearranged as two 15x16 grids.
struct BoundaryImage {
  std::array<float, kBoundariesPerOrientation> vertical{};
  std::array<float, kBoundariesPerOrientation> horizontal{};

  float at(Orientation o, int line, int segment) const;
  float& at(Orientation o, int line, int segment);
  bool operator==(const BoundaryImage&) const = default;
};

BoundaryImage boundaries_to_image(const BoundaryVector& v);
BoundaryVector image_to_vector(const BoundaryImage& img);

// A candidate split line inside a block: `position` is the sample coordinate
// of the line (x for vertical, y for horizontal), and it spans
// [start, start + length) along the other axis.
struct SplitLine {
  Orientation orientation = Orientation::kVertical;
  int position = 0;
  int start = 0;
  int length = 0;

  int segment_count() const { return length / kUnit; }
  // Boundary index of the i-th 4-sample segment along the line.
  BoundaryIndex segment(int i) const;
};

// Internal lines introduced by `mode` (one for BT/ABT, two for QT: vertical
// first).  Empty for NoSplit.
std::vector<SplitLine> split_lines(const BlockRect& rect, SplitMode mode);

// Ground-truth vector with ones on every segment lying on an internal edge
// between siblings at any depth.  Throws GeometryError for invalid trees.
BoundaryVector tree_to_boundaries(const PartitionTree& tree);

// Canonical indices of segments set in a vector (value >= 0.5).
std::set<int> edge_set(const BoundaryVector& v);

// Canonical indices of segments shared by two leaves, derived from the leaf
// rectangles alone (the outer border of the root is excluded).
std::set<int> leaf_boundary_edges(const PartitionTree& tree);

// Rebuilds some partition tree whose internal edges equal the ones set in
// `v`, or nullopt when no such tree exists.  Only block geometry is
// considered; depth limits are ignored.
std::optional<PartitionTree> boundaries_to_tree(const BoundaryVector& v);

// Tree-structure limits.  Depth indices are QT levels: 2 is 64x64, 3 is
// 32x32, 4 is 16x16, and so on.
struct TreeLimits {
  int max_qt_depth = kMaxQtLevel;
  std::array<int, kMaxQtLevel + 1> btabt_depth_per_level{};
  bool allow_bt = true;
  bool allow_abt = true;
  int min_block_size = kUnit;

  int btabt_budget(int qt_level) const;
};

// QT level of a square root block of side `size`.
int root_qt_level(int size);

struct TreeContext {
  int qt_level = kRootQtLevel;
  int btabt_depth = 0;

  auto operator<=>(const TreeContext&) const = default;
};

TreeContext root_context(int root_size = kRootSize);
TreeContext child_context(const TreeContext& ctx, SplitMode mode);
// Number of splits between the root and a node with context `ctx`.
int split_depth(const TreeContext& ctx, int root_size = kRootSize);

// Split modes allowed for `rect` given size, QT-depth, and BT/ABT budget
// constraints.  QT is not allowed below a BT/ABT split.  NoSplit is always
// present.
SplitSet legal_splits(const BlockRect& rect, const TreeLimits& limits,
                      const TreeContext& ctx);

// Checks a tree against `limits` starting from the root context.
bool tree_respects_limits(const PartitionTree& tree, const TreeLimits& limits);

}  // namespace ppilot

#endif  // PARTITION_PILOT_GEOMETRY_H_
