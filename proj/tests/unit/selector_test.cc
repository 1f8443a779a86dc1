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

#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.h"
#include "partition_pilot/selector.h"
#include "partition_pilot/status.h"

namespace ppilot {
namespace {

BoundaryImage random_boundary_image(std::mt19937_64& rng) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  BoundaryVector v;
  for (int i = 0; i < kBoundaryCount; ++i) v[i] = u(rng);
  return boundaries_to_image(v);
}

SpeedControlConfig uniform_config(double t) {
  SpeedControlConfig cfg;
  cfg.limits = testing::permissive_limits();
  cfg.set_all_thresholds(t);
  return cfg;
}

TEST_CASE("tree structure rows") {
  const auto& rows = tree_structure_rows();
  REQUIRE(rows.size() == 4);
  struct Expect {
    double s;
    int qt;
    std::array<int, 3> btabt;
  };
  for (const Expect& e : {Expect{0.65, 2, {8, 0, 0}}, Expect{1.0, 2, {8, 0, 0}},
                          Expect{1.04, 3, {2, 8, 0}}, Expect{1.69, 3, {2, 8, 0}},
                          Expect{1.7, 4, {0, 4, 8}}, Expect{3.19, 4, {0, 4, 8}},
                          Expect{3.2, 3, {0, 8, 0}}, Expect{50.0, 3, {0, 8, 0}}}) {
    const auto cfg = config_from_speed_control(e.s);
    CHECK(cfg.limits.max_qt_depth == e.qt);
    for (int i = 0; i < 3; ++i) {
      CHECK(cfg.limits.btabt_depth_per_level[kRootQtLevel + i] == e.btabt[i]);
    }
    CHECK(cfg.limits.btabt_depth_per_level[5] == 0);
  }
}

TEST_CASE("speed control below the first row is rejected") {
  CHECK_THROWS_AS(config_from_speed_control(0.64), Error);
  CHECK_THROWS_AS(config_from_speed_control(std::nan("")), Error);
  try {
    config_from_speed_control(0.1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOutOfRange);
  }
}

TEST_CASE("threshold schedule") {
  const auto cfg = config_from_speed_control(1.2);
  CHECK(cfg.luma_thresholds.at(0, SplitFamily::kQt) ==
        doctest::Approx(0.2 + 0.4 * (1.2 - 1.04)));
  CHECK(cfg.luma_thresholds.at(3, SplitFamily::kAbt) ==
        doctest::Approx(0.2 + 0.4 * 0.16 + 0.15));
  CHECK(cfg.luma_thresholds.at(99, SplitFamily::kBt) == 1.0);
  for (double s = 0.65; s < 4.0; s += 0.05) {
    const auto c = config_from_speed_control(s);
    for (int d = 0; d < kThresholdDepths; ++d) {
      const double t = c.luma_thresholds.at(d, SplitFamily::kBt);
      CHECK(t >= 0.0);
      CHECK(t <= 1.0);
      if (d > 0) CHECK(t >= c.luma_thresholds.at(d - 1, SplitFamily::kBt));
    }
  }
}

TEST_CASE("threshold file parsing") {
  SpeedControlConfig cfg = uniform_config(0.3);
  std::istringstream in(
      "# overrides\n"
      "2.bt = 0.75\n"
      "chroma.*.abt = 0.125   # all depths\n"
      "\n"
      "luma.0.qt=1\n");
  load_thresholds(in, cfg);
  CHECK(cfg.luma_thresholds.at(2, SplitFamily::kBt) == 0.75);
  CHECK(cfg.luma_thresholds.at(3, SplitFamily::kBt) == 0.3);
  CHECK(cfg.luma_thresholds.at(0, SplitFamily::kQt) == 1.0);
  CHECK(cfg.chroma_thresholds.at(9, SplitFamily::kAbt) == 0.125);
  CHECK(cfg.luma_thresholds.at(9, SplitFamily::kAbt) == 0.3);

  for (const char* bad : {"2.bt 0.5", "2.xt = 0.5", "x.bt = 0.5",
                          "2.bt = 1.5", "2.bt = abc", "16.bt = 0.5",
                          "planar.2.bt = 0.1", "2.bt = 0.5x"}) {
    std::istringstream b(std::string("# ok\n") + bad + "\n");
    try {
      load_thresholds(b, cfg);
      FAIL("accepted: " << bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kConfigSyntax);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  CHECK_THROWS_AS(load_thresholds_file("/nonexistent/t.cfg", cfg), Error);
}

TEST_CASE("half scores average the segments of each half") {
  BoundaryVector v;
  // Vertical midline of the root: line 7, segments 0..15.
  for (int s = 0; s < 8; ++s) v.at({Orientation::kVertical, 7, s}) = 1.0f;
  for (int s = 8; s < 16; ++s) v.at({Orientation::kVertical, 7, s}) = 0.25f;
  const auto img = boundaries_to_image(v);
  const BlockRect root = BlockRect::root();
  CHECK(half_boundary_score(img, root, SplitMode::kBtVertical, Half::kFirst) ==
        1.0);
  CHECK(half_boundary_score(img, root, SplitMode::kBtVertical, Half::kSecond) ==
        0.25);
  CHECK(half_boundary_score(img, root, SplitMode::kBtHorizontal, Half::kFirst) ==
        0.0);
  CHECK_THROWS_AS(half_boundary_score(img, root, SplitMode::kQt, Half::kFirst),
                  Error);
  CHECK_THROWS_AS(
      half_boundary_score(img, {0, 0, 8, 8}, SplitMode::kAbtTop, Half::kFirst),
      Error);
}

TEST_CASE("odd segment counts put the middle segment in the first half") {
  // A 12-wide block has a horizontal line of 3 segments.
  BoundaryVector v;
  v.at({Orientation::kHorizontal, 1, 0}) = 0.9f;
  v.at({Orientation::kHorizontal, 1, 1}) = 0.3f;
  v.at({Orientation::kHorizontal, 1, 2}) = 0.6f;
  const SplitLine line{Orientation::kHorizontal, 8, 0, 12};
  const auto img = boundaries_to_image(v);
  CHECK(line_half_score(img, line, Half::kFirst) ==
        doctest::Approx((0.9 + 0.3) / 2));
  CHECK(line_half_score(img, line, Half::kSecond) == doctest::Approx(0.6));
}

TEST_CASE("BT candidate needs one half of its line above threshold") {
  BoundaryVector v;
  for (int s = 8; s < 16; ++s) v.at({Orientation::kHorizontal, 7, s}) = 0.8f;
  const auto img = boundaries_to_image(v);
  const auto d = select_splits(img, BlockRect::root(), uniform_config(0.5),
                               root_context());
  CHECK(d.candidates.contains(SplitMode::kNoSplit));
  CHECK(d.candidates.contains(SplitMode::kBtHorizontal));
  CHECK_FALSE(d.candidates.contains(SplitMode::kBtVertical));
  // QT needs the vertical line too.
  CHECK_FALSE(d.candidates.contains(SplitMode::kQt));
  for (int s = 0; s < 8; ++s) v.at({Orientation::kVertical, 7, s}) = 0.8f;
  const auto d2 = select_splits(boundaries_to_image(v), BlockRect::root(),
                                uniform_config(0.5), root_context());
  CHECK(d2.candidates.contains(SplitMode::kQt));
  CHECK(d2.candidates.contains(SplitMode::kBtVertical));
  CHECK_FALSE(d2.half_scores.empty());
}

TEST_CASE("extreme thresholds") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto img = random_boundary_image(rng);
    const BlockRect r = BlockRect::root();
    auto cfg = uniform_config(0.0);
    CHECK(select_splits(img, r, cfg, root_context()).candidates ==
          legal_splits(r, cfg.limits, root_context()));
    cfg = uniform_config(1.0);
    CHECK(select_splits(img, r, cfg, root_context()).candidates ==
          SplitSet{SplitMode::kNoSplit});
  }
}

TEST_CASE("candidate sets are anti-monotone in the thresholds") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> unit(0, 15);
  for (int i = 0; i < 300; ++i) {
    const auto img = random_boundary_image(rng);
    const std::vector<BlockRect> rects = {
        BlockRect::root(), {0, 0, 32, 32}, {16, 32, 16, 32}, {8, 8, 8, 8}};
    const BlockRect r = rects[static_cast<size_t>(i) % rects.size()];
    const TreeContext ctx{r.width == r.height ? root_qt_level(r.width) : 3, 0};
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double lo = u(rng), hi = u(rng);
    if (lo > hi) std::swap(lo, hi);
    const SplitSet loose =
        select_splits(img, r, uniform_config(lo), ctx).candidates;
    const SplitSet tight =
        select_splits(img, r, uniform_config(hi), ctx).candidates;
    CHECK(tight.is_subset_of(loose));
    CHECK(tight.contains(SplitMode::kNoSplit));
  }
}

TEST_CASE("apply_constraints") {
  SplitDecision d;
  d.candidates = SplitSet::all();
  const auto deep = apply_constraints(d, {3, 1}, {});
  CHECK_FALSE(deep.candidates.contains(SplitMode::kQt));

  ExploredRecord h;
  h.parent_split = SplitMode::kBtHorizontal;
  h.child_index = 1;
  h.first_sibling_split = SplitMode::kBtVertical;
  h.qt_legal_at_parent = true;
  const auto second = apply_constraints(d, {3, 1}, h);
  CHECK_FALSE(second.candidates.contains(SplitMode::kBtVertical));
  CHECK(second.candidates.contains(SplitMode::kBtHorizontal));

  h.qt_legal_at_parent = false;
  CHECK(apply_constraints(d, {3, 1}, h).candidates.contains(
      SplitMode::kBtVertical));
  h.qt_legal_at_parent = true;
  h.child_index = 0;
  CHECK(apply_constraints(d, {3, 1}, h).candidates.contains(
      SplitMode::kBtVertical));

  SplitDecision only_qt;
  only_qt.candidates = SplitSet{SplitMode::kQt};
  CHECK(apply_constraints(only_qt, {3, 2}, {}).candidates ==
        SplitSet{SplitMode::kNoSplit});
  CHECK(qt_emulation_partner(SplitMode::kBtVertical) ==
        SplitMode::kBtHorizontal);
  CHECK_FALSE(qt_emulation_partner(SplitMode::kAbtTop).has_value());
}

TEST_CASE("threshold table validation") {
  ThresholdTable t;
  CHECK_THROWS_AS(t.set(0, SplitFamily::kQt, 1.01), Error);
  CHECK_THROWS_AS(t.set(16, SplitFamily::kQt, 0.5), Error);
  CHECK_THROWS_AS(t.set(-1, SplitFamily::kQt, 0.5), Error);
  t.set(4, SplitFamily::kAbt, 0.5);
  CHECK(t.at(4, SplitFamily::kAbt) == 0.5);
  CHECK(score_passes(0.0, 0.0));
  CHECK_FALSE(score_passes(1.0, 1.0));
  CHECK(score_passes(0.51, 0.5));
  CHECK_FALSE(score_passes(0.5, 0.5));
}

}  // namespace
}  // namespace ppilot
