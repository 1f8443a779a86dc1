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

#include <benchmark/benchmark.h>

#include <random>

#include "partition_pilot/dataset.h"
#include "partition_pilot/inference.h"
#include "partition_pilot/rdosim.h"
#include "partition_pilot/selector.h"

namespace ppilot {
namespace {

LayerWeights random_conv(int in, int out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> n(0.0f, 0.2f);
  LayerWeights l;
  l.kind = LayerKind::kConv3x3;
  l.in_channels = in;
  l.out_channels = out;
  l.weights.resize(l.expected_weight_count());
  for (float& v : l.weights) v = n(rng);
  l.bias.assign(static_cast<size_t>(out), 0.0f);
  return l;
}

FeatureMap random_map(int c, int side) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  FeatureMap m(c, side, side);
  for (float& v : m.data) v = u(rng);
  return m;
}

void BM_Conv(benchmark::State& state) {
  const FeatureMap in = random_map(16, static_cast<int>(state.range(0)));
  const LayerWeights l = random_conv(16, 16, 2);
  for (auto _ : state) benchmark::DoNotOptimize(conv2d_same(in, l));
}

void BM_ConvReference(benchmark::State& state) {
  const FeatureMap in = random_map(16, static_cast<int>(state.range(0)));
  const LayerWeights l = random_conv(16, 16, 2);
  for (auto _ : state) benchmark::DoNotOptimize(conv2d_same_reference(in, l));
}

BENCHMARK(BM_Conv)->Arg(17)->Arg(33)->Arg(65);
BENCHMARK(BM_ConvReference)->Arg(17)->Arg(33)->Arg(65);

const Network& standard_network() {
  static const Network net = [] {
    const ArchitectureSpec a = ArchitectureSpec::standard();
    return Network(random_weights(a, Component::kLuma, 3), a);
  }();
  return net;
}

void BM_Forward(benchmark::State& state) {
  const Patch p = extract_patch(make_synthetic_image(64, 64, 1), 0, 0, 32);
  for (auto _ : state) benchmark::DoNotOptimize(standard_network().forward(p));
}

void BM_ForwardReference(benchmark::State& state) {
  const Patch p = extract_patch(make_synthetic_image(64, 64, 1), 0, 0, 32);
  for (auto _ : state) {
    benchmark::DoNotOptimize(standard_network().forward_reference(p));
  }
}

BENCHMARK(BM_Forward)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForwardReference)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  const std::vector<Image> corpus = {make_synthetic_image(256, 128, 4)};
  SweepOptions opt;
  opt.speed_controls = {0.8, 2.0};
  opt.threads = static_cast<int>(state.range(0));
  const auto predict = [](const Image& img, int x, int y, int qp) {
    CostModel m;
    m.qp = qp;
    return oracle_boundaries(extract_block(img, x, y, kRootSize),
                             config_from_speed_control(1.2).limits, m);
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_tradeoff(corpus, opt, predict));
  }
}

BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ExhaustiveRdo(benchmark::State& state) {
  const Plane block =
      extract_block(make_synthetic_image(64, 64, 5), 0, 0, kRootSize);
  const auto cfg = config_from_speed_control(static_cast<double>(state.range(0)) / 100);
  const CostModel model;
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_rdo(block, cfg, model));
}

BENCHMARK(BM_ExhaustiveRdo)->Arg(80)->Arg(130)->Arg(200)->Arg(340)
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ppilot

BENCHMARK_MAIN();
