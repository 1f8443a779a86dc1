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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "oracles.h"
#include "partition_pilot/rdosim.h"
#include "partition_pilot/selector.h"
#include "partition_pilot/status.h"

namespace ppilot {
namespace {

using testing::brute_force_rdo;
using testing::permissive_limits;
using testing::structured_plane;

TEST_CASE("qstep and lambda") {
  CHECK(qstep_for_qp(4) == 1.0);
  CHECK(qstep_for_qp(28) == doctest::Approx(16.0));
  CHECK(qstep_for_qp(34) / qstep_for_qp(28) == doctest::Approx(2.0));
  CostModel m;
  m.qp = 22;
  CHECK(m.lambda() == doctest::Approx(0.057 * 8.0 * 8.0));
}

TEST_CASE("leaf cost matches a direct 2-D transform") {
  std::mt19937_64 rng(4);
  CostModel model;
  for (int qp : {19, 27, 32, 41}) {
    model.qp = qp;
    const Plane p = testing::random_plane(rng, 32);
    for (const BlockRect r : {BlockRect{0, 0, 4, 4}, BlockRect{8, 4, 16, 8},
                              BlockRect{0, 0, 32, 32}, BlockRect{4, 0, 4, 32}}) {
      const LeafCost a = leaf_cost(p, r, model);
      const LeafCost b = testing::direct_leaf_cost(p, r, model);
      CHECK(a.rate == b.rate);
      CHECK(a.distortion == doctest::Approx(b.distortion).epsilon(1e-9));
    }
  }
}

TEST_CASE("flat block costs only header bits") {
  Plane p(16, 100.0);
  CostModel model;
  const LeafCost lc = leaf_cost(p, {0, 0, 16, 16}, model);
  CHECK(lc.rate == model.header_bits + model.coef_bits);
  CHECK(lc.distortion < 16 * 16 * model.qstep() * model.qstep());
  const Plane zero(8, 0.0);
  const LeafCost z = leaf_cost(zero, {0, 0, 8, 8}, model);
  CHECK(z.distortion == 0.0);
  CHECK(z.rate == model.header_bits);
}

TEST_CASE("split cost adds signalling once per split node") {
  std::mt19937_64 rng(8);
  const Plane p = testing::random_plane(rng, 16);
  CostModel model;
  const PartitionTree t =
      PartitionTree::split_once(BlockRect::root(16), SplitMode::kBtVertical);
  double expect = 0.0;
  for (const BlockRect& r : t.leaves()) {
    const LeafCost lc = leaf_cost(p, r, model);
    expect += lc.distortion + model.lambda() * lc.rate;
  }
  expect += model.lambda() * model.split_signal_bits;
  CHECK(tree_cost(p, t, model) == expect);
}

TEST_CASE("memoized search equals brute force on small roots") {
  std::mt19937_64 rng(12);
  CostModel model;
  for (int i = 0; i < 12; ++i) {
    const int size = i % 2 ? 16 : 8;
    model.qp = 22 + 3 * (i % 6);
    const Plane p = i % 3 ? structured_plane(rng, size)
                          : testing::random_plane(rng, size);
    const TreeLimits limits = permissive_limits(size == 16 ? 2 : 3);
    const RDResult a = exhaustive_rdo(p, limits, model);
    const auto b = brute_force_rdo(p, limits, model);
    CHECK(a.cost == b.cost);
    CHECK(tree_cost(p, a.tree, model) == a.cost);
    CHECK(tree_respects_limits(a.tree, limits));
    CHECK(a.leaves == a.tree.leaf_count());
  }
}

TEST_CASE("nodes checked equals the memoized enumeration count") {
  std::mt19937_64 rng(13);
  const Plane p = structured_plane(rng, 32);
  CostModel model;
  for (const TreeLimits& limits :
       {permissive_limits(0), permissive_limits(2), permissive_limits(3)}) {
    const RDResult r = exhaustive_rdo(p, limits, model);
    CHECK(static_cast<std::uint64_t>(r.nodes_checked) ==
          enumerate_combinations(32, limits, RuleSet::kQtBtAbt).memoized);
  }
}

TEST_CASE("exhaustive result is never worse than any random legal tree") {
  std::mt19937_64 rng(14);
  const TreeLimits limits = permissive_limits(2);
  CostModel model;
  const Plane p = structured_plane(rng, 32);
  const RDResult best = exhaustive_rdo(p, limits, model);
  for (int i = 0; i < 200; ++i) {
    const PartitionTree t = testing::random_tree(rng, 32, limits, 0.7);
    CHECK(best.cost <= tree_cost(p, t, model));
  }
}

TEST_CASE("root size is validated") {
  CostModel model;
  CHECK_THROWS_AS(exhaustive_rdo(Plane(12), permissive_limits(), model), Error);
  CHECK_THROWS_AS(exhaustive_rdo(Plane(128), permissive_limits(), model), Error);
  const auto cfg = config_from_speed_control(1.2);
  CHECK_THROWS_AS(pruned_rdo(Plane(32), BoundaryVector{}, cfg, model), Error);
}

TEST_CASE("pruned search brackets") {
  std::mt19937_64 rng(15);
  CostModel model;
  auto cfg = config_from_speed_control(1.2);
  for (int i = 0; i < 3; ++i) {
    const Plane p = structured_plane(rng, 64);
    const RDResult full = exhaustive_rdo(p, cfg, model);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    BoundaryVector v;
    for (int k = 0; k < kBoundaryCount; ++k) v[k] = u(rng);

    cfg.set_all_thresholds(0.0);
    const RDResult all = pruned_rdo(p, v, cfg, model);
    CHECK(all.cost == full.cost);
    CHECK(all.nodes_checked == full.nodes_checked);
    CHECK(all.tree == full.tree);

    cfg.set_all_thresholds(1.0);
    const RDResult none = pruned_rdo(p, v, cfg, model);
    CHECK(none.nodes_checked == 1);
    CHECK(none.tree.children.empty());

    cfg.set_all_thresholds(0.6);
    const RDResult mid = pruned_rdo(p, v, cfg, model);
    CHECK(mid.cost >= full.cost);
    CHECK(mid.nodes_checked <= full.nodes_checked);
    CHECK(tree_respects_limits(mid.tree, cfg.limits));
    cfg = config_from_speed_control(1.2);
  }
}

TEST_CASE("oracle boundaries steer the pruned search to the optimum") {
  std::mt19937_64 rng(16);
  CostModel model;
  auto cfg = config_from_speed_control(1.8);
  cfg.set_all_thresholds(0.5);
  for (int i = 0; i < 3; ++i) {
    const Plane p = structured_plane(rng, 64);
    const RDResult full = exhaustive_rdo(p, cfg, model);
    const BoundaryVector v = tree_to_boundaries(full.tree);
    CHECK(oracle_boundaries(p, cfg.limits, model) == v);
    const RDResult pr = pruned_rdo(p, v, cfg, model);
    CHECK(pr.cost == full.cost);
    if (!full.tree.children.empty()) CHECK(pr.nodes_checked < full.nodes_checked);
  }
}

TEST_CASE("enumeration counts") {
  TreeLimits qt_only;
  qt_only.max_qt_depth = kMaxQtLevel;
  CHECK(enumerate_combinations(8, qt_only, RuleSet::kQt).memoized == 5);
  CHECK(enumerate_combinations(8, qt_only, RuleSet::kQt).raw == 5);
  CHECK(enumerate_combinations(4, qt_only, RuleSet::kQt).memoized == 1);

  // Hand count, 8x8 root, BT depth 1, no QT: root, 2 halves per BT
  // direction, each a leaf (depth exhausted).
  TreeLimits bt1;
  bt1.max_qt_depth = root_qt_level(8);
  bt1.btabt_depth_per_level.fill(1);
  CHECK(enumerate_combinations(8, bt1, RuleSet::kQtBt).memoized == 5);
  CHECK(enumerate_combinations(8, bt1, RuleSet::kQtBt).raw == 5);
  // With QT allowed the four 4x4 quadrants are extra states.
  bt1.max_qt_depth = kMaxQtLevel;
  CHECK(enumerate_combinations(8, bt1, RuleSet::kQtBt).memoized == 9);
}

TEST_CASE("enumeration is monotone in limits and rule sets") {
  for (int root : {16, 32, 64}) {
    for (int qt = root_qt_level(root); qt <= kMaxQtLevel; ++qt) {
      std::uint64_t prev_m = 0, prev_r = 0;
      for (int depth = 0; depth <= 4; ++depth) {
        TreeLimits l;
        l.max_qt_depth = qt;
        l.btabt_depth_per_level.fill(depth);
        const auto q = enumerate_combinations(root, l, RuleSet::kQt);
        const auto b = enumerate_combinations(root, l, RuleSet::kQtBt);
        const auto a = enumerate_combinations(root, l, RuleSet::kQtBtAbt);
        CHECK(q.memoized <= b.memoized);
        CHECK(b.memoized <= a.memoized);
        CHECK(q.raw <= b.raw);
        CHECK(b.raw <= a.raw);
        CHECK(a.memoized <= a.raw);
        CHECK(a.memoized >= prev_m);
        CHECK(a.raw >= prev_r);
        prev_m = a.memoized;
        prev_r = a.raw;
      }
    }
  }
}

TEST_CASE("raw visit count matches the non-memoized brute force") {
  std::mt19937_64 rng(17);
  CostModel model;
  for (int depth : {1, 2, 3}) {
    const TreeLimits l = permissive_limits(depth);
    const Plane p = testing::random_plane(rng, 16);
    CHECK(static_cast<std::uint64_t>(brute_force_rdo(p, l, model).visits) ==
          enumerate_combinations(16, l, RuleSet::kQtBtAbt).raw);
  }
}

TEST_CASE("sweep over oracle predictions") {
  std::vector<Image> corpus = {make_synthetic_image(128, 64, 3)};
  SweepOptions opt;
  opt.speed_controls = {0.65, 1.2, 2.0, 3.4};
  const auto predict = [&](const Image& img, int x, int y, int qp) {
    CostModel m = opt.model;
    m.qp = qp;
    const auto cfg = config_from_speed_control(1.2);
    return oracle_boundaries(extract_block(img, x, y, kRootSize), cfg.limits, m);
  };
  const auto rows = sweep_tradeoff(corpus, opt, predict);
  REQUIRE(rows.size() == 4);
  for (const SweepRow& r : rows) {
    CHECK(r.cost_increase_pct >= 0.0);
    CHECK(r.node_ratio > 0.0);
    CHECK(r.node_ratio <= 1.0);
    CHECK(r.time_ratio > 0.0);
  }
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  CHECK(csv.str().rfind("speed_control,cost_increase_pct,node_ratio,time_ratio\n",
                        0) == 0);
  std::ostringstream js;
  write_sweep_json(js, rows);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j.size() == 4);

  CHECK_THROWS_AS(sweep_tradeoff({}, opt, predict), Error);
  opt.threads = 2;
  const auto again = sweep_tradeoff(corpus, opt, predict);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(again[i].cost_increase_pct == rows[i].cost_increase_pct);
    CHECK(again[i].node_ratio == rows[i].node_ratio);
  }
}

TEST_CASE("speed control range") {
  const auto r = speed_control_range(0.65, 3.4, 0.25);
  REQUIRE(r.size() == 12);
  CHECK(r.front() == 0.65);
  CHECK(r.back() == doctest::Approx(3.4));
  CHECK_THROWS_AS(speed_control_range(1.0, 2.0, 0.0), Error);
}

}  // namespace
}  // namespace ppilot
