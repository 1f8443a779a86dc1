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
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "partition_pilot/inference.h"
#include "partition_pilot/status.h"

namespace ppilot {

ArchitectureSpec ArchitectureSpec::standard(Component c) {
  ArchitectureSpec a;
  a.input_channels = c == Component::kLuma ? 1 : 2;
  a.stem_channels = 16;
  a.blocks = {{2, 16, 2}, {2, 32, 2}, {2, 48, 2}};
  a.final_pool = 4;
  a.head_channels = 24;
  a.output_size = kBoundaryCount;
  return a;
}

std::vector<ArchitectureSpec::LayerShape> ArchitectureSpec::layer_shapes()
    const {
  std::vector<LayerShape> out;
  out.push_back({LayerKind::kConv3x3, input_channels, stem_channels});
  int ch = stem_channels;
  for (const ScalingBlock& b : blocks) {
    for (int u = 0; u < b.residual_units; ++u) {
      out.push_back({LayerKind::kConv3x3, ch, b.channels});
      out.push_back({LayerKind::kConv3x3, b.channels, b.channels});
      if (ch != b.channels) {
        out.push_back({LayerKind::kConv1x1, ch, b.channels});
      }
      ch = b.channels;
    }
  }
  if (head_channels > 0) {
    out.push_back({LayerKind::kConv1x1, ch, head_channels});
    ch = head_channels;
  }
  const int side = head_side();
  out.push_back({LayerKind::kFullyConnected, ch * side * side + 1,
                 output_size});
  return out;
}

int ArchitectureSpec::head_side() const {
  int side = kPatchSize;
  for (const ScalingBlock& b : blocks) side = (side + b.pool_size - 1) / b.pool_size;
  if (final_pool > 1) side = (side + final_pool - 1) / final_pool;
  return side;
}

int ArchitectureSpec::conv3x3_count() const {
  int n = 0;
  for (const LayerShape& s : layer_shapes()) {
    if (s.kind == LayerKind::kConv3x3) ++n;
  }
  return n;
}

size_t ArchitectureSpec::parameter_count() const {
  size_t n = 0;
  for (const LayerShape& s : layer_shapes()) {
    const size_t k = s.kind == LayerKind::kConv3x3 ? 9 : 1;
    n += static_cast<size_t>(s.in_channels) * s.out_channels * k +
         static_cast<size_t>(s.out_channels);
  }
  return n;
}

ArchitectureSpec parse_architecture_json(const std::string& text) {
  ArchitectureSpec a;
  try {
    const auto j = nlohmann::json::parse(text);
    a.input_channels = j.value("input_channels", a.input_channels);
    a.stem_channels = j.value("stem_channels", a.stem_channels);
    a.final_pool = j.value("final_pool", a.final_pool);
    a.head_channels = j.value("head_channels", a.head_channels);
    a.output_size = j.value("output_size", a.output_size);
    a.blocks.clear();
    for (const auto& b : j.at("blocks")) {
      a.blocks.push_back({b.at("residual_units").get<int>(),
                          b.at("channels").get<int>(),
                          b.value("pool_size", 2)});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigSyntax, e.what());
  }
  bool ok = a.input_channels > 0 && a.stem_channels > 0 && a.final_pool >= 1 &&
            a.head_channels >= 0 && a.output_size == kBoundaryCount;
  for (const ScalingBlock& b : a.blocks) {
    ok = ok && b.residual_units >= 0 && b.channels > 0 && b.pool_size >= 1;
  }
  if (!ok) throw Error(ErrorCode::kShapeMismatch, "invalid architecture");
  return a;
}

ArchitectureSpec load_architecture_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_architecture_json(ss.str());
}

std::string architecture_to_json(const ArchitectureSpec& a) {
  nlohmann::json j;
  j["input_channels"] = a.input_channels;
  j["stem_channels"] = a.stem_channels;
  j["final_pool"] = a.final_pool;
  j["head_channels"] = a.head_channels;
  j["output_size"] = a.output_size;
  j["blocks"] = nlohmann::json::array();
  for (const ScalingBlock& b : a.blocks) {
    j["blocks"].push_back({{"residual_units", b.residual_units},
                           {"channels", b.channels},
                           {"pool_size", b.pool_size}});
  }
  return j.dump(2);
}

void check_compatible(const NetworkWeights& w, const ArchitectureSpec& arch) {
  const auto shapes = arch.layer_shapes();
  if (shapes.size() != w.layers.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "architecture has " + std::to_string(shapes.size()) +
                    " layers, weights have " + std::to_string(w.layers.size()));
  }
  for (size_t i = 0; i < shapes.size(); ++i) {
    const LayerWeights& l = w.layers[i];
    if (l.kind != shapes[i].kind || l.in_channels != shapes[i].in_channels ||
        l.out_channels != shapes[i].out_channels) {
      throw Error(ErrorCode::kShapeMismatch,
                  "layer " + std::to_string(i) + " does not match");
    }
  }
  const int channels = w.component == Component::kLuma ? 1 : 2;
  if (channels != arch.input_channels) {
    throw Error(ErrorCode::kChannelMismatch,
                "weight component does not match architecture input");
  }
}

NetworkWeights random_weights(const ArchitectureSpec& arch, Component c,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  NetworkWeights w;
  w.component = c;
  for (const auto& s : arch.layer_shapes()) {
    LayerWeights l;
    l.kind = s.kind;
    l.in_channels = s.in_channels;
    l.out_channels = s.out_channels;
    const int k = s.kind == LayerKind::kConv3x3 ? 3 : 1;
    std::normal_distribution<float> dist(
        0.0f, std::sqrt(2.0f / static_cast<float>(s.in_channels * k * k)));
    l.weights.resize(l.expected_weight_count());
    for (float& v : l.weights) v = dist(rng);
    l.bias.assign(static_cast<size_t>(s.out_channels), 0.01f);
    w.layers.push_back(std::move(l));
  }
  return w;
}

NetworkWeights zero_weights(const ArchitectureSpec& arch, Component c) {
  NetworkWeights w;
  w.component = c;
  for (const auto& s : arch.layer_shapes()) {
    LayerWeights l;
    l.kind = s.kind;
    l.in_channels = s.in_channels;
    l.out_channels = s.out_channels;
    l.weights.assign(l.expected_weight_count(), 0.0f);
    l.bias.assign(static_cast<size_t>(s.out_channels), 0.0f);
    w.layers.push_back(std::move(l));
  }
  return w;
}

}  // namespace ppilot
