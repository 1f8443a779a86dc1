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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "partition_pilot/binary_io.h"
#include "partition_pilot/cli.h"
#include "partition_pilot/dataset.h"
#include "partition_pilot/inference.h"

namespace ppilot {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "partition_pilot");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string write_fixture_weights() {
  NetworkWeights w;
  LayerWeights l;
  l.kind = LayerKind::kConv3x3;
  l.in_channels = 1;
  l.out_channels = 2;
  l.weights.assign(18, 0.25f);
  l.bias.assign(2, 0.0f);
  w.layers.push_back(l);
  const std::string path = temp_path("ppilot_fixture.bpwt");
  write_file_bytes(path, serialize_weights(w));
  return path;
}

TEST_CASE("enumerate") {
  const Run r = run({"enumerate", "--root", "8", "--rules", "qt", "--min", "4"});
  CHECK(r.code == 0);
  CHECK(r.out == "5\n");
  const Run j = run({"enumerate", "--root", "32", "--rules", "qtbt",
                     "--max-qt-depth", "5", "--btabt-depth", "3", "--format",
                     "json"});
  CHECK(j.code == 0);
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["memoized"] == 325);
  CHECK(run({"enumerate", "--root", "8", "--min", "16"}).code == 2);
}

TEST_CASE("verify-weights") {
  const std::string path = write_fixture_weights();
  const Run r = run({"verify-weights", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("parameters 20\n") != std::string::npos);
  const Run arch = run({"verify-weights", path, "--arch", path});
  CHECK(arch.code == 1);
  std::remove(path.c_str());
  CHECK(run({"verify-weights", "/nonexistent.bpwt"}).code == 1);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"enumerate", "--root", "7"}).code == 2);
  CHECK(run({"encode", "--synthetic", "1", "--qp", "99"}).code == 2);
  CHECK(run({"sweep", "--format", "xml"}).code == 2);
  CHECK(run({"enumerate", "--bogus"}).code == 2);
}

TEST_CASE("every subcommand documents its flags") {
  const Run top = run({"--help"});
  CHECK(top.code == 0);
  for (const char* sub : {"dataset", "infer", "encode", "sweep", "enumerate",
                          "verify-weights"}) {
    CHECK(top.out.find(sub) != std::string::npos);
    const Run h = run({sub, "--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("--help") != std::string::npos);
  }
  const Run sweep = run({"sweep", "--help"});
  for (const char* flag : {"--weights", "--arch", "--qp", "--thresholds",
                           "--out", "--threads", "--seed", "--format"}) {
    CHECK(sweep.out.find(flag) != std::string::npos);
  }
  const Run encode = run({"encode", "--help"});
  CHECK(encode.out.find("--speed-control") != std::string::npos);
}

TEST_CASE("encode is deterministic") {
  const std::vector<std::string> args = {"encode", "--synthetic", "1", "--seed",
                                         "3",      "--qp",        "37"};
  const Run a = run(args);
  const Run b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("image,x,y,cost,nodes_checked,leaves\n", 0) == 0);
  std::vector<std::string> pruned = args;
  for (const char* s : {"--mode", "pruned", "--oracle", "--format", "json"}) {
    pruned.push_back(s);
  }
  const Run p = run(pruned);
  CHECK(p.code == 0);
  const auto j = nlohmann::json::parse(p.out);
  CHECK(j["blocks"].size() == 16);
  CHECK(run({"encode", "--synthetic", "1", "--mode", "pruned"}).code != 0);
}

TEST_CASE("dataset and infer") {
  const std::string out = temp_path("ppilot_cli.bpds");
  const Run d = run({"dataset", "--synthetic", "1", "--seed", "2", "--qp",
                     "22,37", "--speed-control", "0.7", "--out", out});
  CHECK(d.code == 0);
  CHECK(d.out == "records 32\n");
  const auto records = read_dataset_file(out);
  CHECK(records.size() == 32);
  std::remove(out.c_str());

  const ArchitectureSpec a = ArchitectureSpec::standard();
  const std::string wpath = temp_path("ppilot_cli.bpwt");
  write_file_bytes(wpath, serialize_weights(zero_weights(a, Component::kLuma)));
  const Run inf = run({"infer", "--weights", wpath, "--synthetic-seed", "1",
                       "--x", "64", "--y", "0", "--format", "json"});
  CHECK(inf.code == 0);
  const auto v = nlohmann::json::parse(inf.out);
  REQUIRE(v.size() == 480);
  CHECK(v[17].get<float>() == 0.5f);
  CHECK(run({"infer", "--weights", wpath, "--synthetic-seed", "1", "--x",
             "250"}).code == 1);
  std::remove(wpath.c_str());
}

TEST_CASE("sweep writes the trade-off table") {
  const std::string out = temp_path("ppilot_cli_sweep.csv");
  const Run r = run({"sweep", "--synthetic", "1", "--oracle", "--from", "1.0",
                     "--to", "3.4", "--step", "1.2", "--out", out});
  CHECK(r.code == 0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "speed_control,cost_increase_pct,node_ratio,time_ratio");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 3);
  std::remove(out.c_str());
  CHECK(run({"sweep", "--synthetic", "1", "--oracle", "--from", "0.2"}).code == 1);
}

}  // namespace
}  // namespace ppilot
