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

#include "partition_pilot/cli.h"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "partition_pilot/dataset.h"
#include "partition_pilot/inference.h"
#include "partition_pilot/rdosim.h"
#include "partition_pilot/selector.h"
#include "partition_pilot/status.h"

namespace ppilot::cli {

namespace {

constexpr int kSyntheticSide = 256;

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("partition_pilot", sink);
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("PARTITION_PILOT_LOG")) {
    const std::string v = env;
    if (v == "error") logger->set_level(spdlog::level::err);
    if (v == "warn") logger->set_level(spdlog::level::warn);
    if (v == "info") logger->set_level(spdlog::level::info);
    if (v == "debug") logger->set_level(spdlog::level::debug);
  }
  return logger;
}

// Flags shared by several subcommands.
struct CorpusFlags {
  std::vector<std::string> images;
  int synthetic = 0;
  std::uint64_t seed = 1;

  void add(CLI::App* app) {
    app->add_option("images", images, "8-bit binary PGM (P5) images");
    app->add_option("--synthetic", synthetic,
                    "Generate this many 256x256 synthetic images instead")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--seed", seed, "Seed of the synthetic corpus");
  }

  std::vector<Image> load() const {
    std::vector<Image> corpus;
    for (const std::string& path : images) corpus.push_back(read_pgm(path));
    for (int i = 0; i < synthetic; ++i) {
      corpus.push_back(make_synthetic_image(kSyntheticSide, kSyntheticSide,
                                            seed + static_cast<std::uint64_t>(i)));
    }
    return corpus;
  }
};

struct ModelFlags {
  std::string weights;
  std::string arch;
  bool oracle = false;
  double truth_speed_control = 1.2;

  void add(CLI::App* app, bool allow_oracle) {
    app->add_option("--weights", weights, "BPWT weight file");
    app->add_option("--arch", arch,
                    "Architecture JSON (default: the standard network)");
    if (allow_oracle) {
      app->add_flag("--oracle", oracle,
                    "Use ground-truth boundaries of the exhaustive optimum "
                    "instead of the network");
      app->add_option("--truth-speed-control", truth_speed_control,
                      "Tree structure of the oracle's exhaustive search");
    }
  }

  std::optional<Network> network(Component c = Component::kLuma) const {
    if (weights.empty()) return std::nullopt;
    ArchitectureSpec a =
        arch.empty() ? ArchitectureSpec::standard(c) : load_architecture_file(arch);
    return Network(load_weights_file(weights), std::move(a));
  }
};

BoundaryPredictor make_predictor(const ModelFlags& flags,
                                 std::shared_ptr<const Network> net,
                                 const CostModel& base) {
  if (flags.oracle) {
    const TreeLimits limits =
        config_from_speed_control(flags.truth_speed_control).limits;
    return [limits, base](const Image& img, int x, int y, int qp) {
      CostModel m = base;
      m.qp = qp;
      return oracle_boundaries(extract_block(img, x, y, kRootSize), limits, m);
    };
  }
  if (!net) {
    throw CLI::ValidationError("--weights", "pruned search needs --weights or --oracle");
  }
  return [net](const Image& img, int x, int y, int qp) {
    return net->forward(extract_patch(img, x, y, qp));
  };
}

SpeedControlConfig speed_config(double s, const std::string& thresholds) {
  SpeedControlConfig cfg = config_from_speed_control(s);
  if (!thresholds.empty()) load_thresholds_file(thresholds, cfg);
  return cfg;
}

std::ostream& select_output(const std::string& path, std::ofstream& file,
                            std::ostream& fallback) {
  if (path.empty()) return fallback;
  file.open(path, std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIoFailure, "cannot create " + path);
  return file;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  auto log = make_logger(err);

  CLI::App app{"Boundary-driven block partition pruning for intra coding"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  int qp = 32;
  double speed_control = 1.2;
  std::string thresholds_path;
  std::string out_path;
  int threads = 1;
  std::string format;
  const auto add_qp = [&](CLI::App* sub) {
    sub->add_option("--qp", qp, "Quantization parameter")
        ->check(CLI::Range(0, 63));
  };
  const auto add_speed = [&](CLI::App* sub) {
    sub->add_option("--speed-control", speed_control,
                    "Speed-control parameter (>= 0.65)")
        ->check(CLI::Range(kMinSpeedControl, 1e9));
    sub->add_option("--thresholds", thresholds_path,
                    "Threshold overrides: `depth.family = value` lines");
  };
  const auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", threads, "Worker threads")
        ->check(CLI::PositiveNumber);
  };
  const auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  // dataset
  CLI::App* dataset = app.add_subcommand("dataset", "Build a BPDS training set");
  CorpusFlags dataset_corpus;
  dataset_corpus.add(dataset);
  std::vector<int> dataset_qps{22, 27, 32, 37};
  dataset->add_option("--qp", dataset_qps, "QPs to encode each block with")
      ->delimiter(',')
      ->check(CLI::Range(kMinQp, kMaxQp));
  add_speed(dataset);
  add_threads(dataset);
  dataset->add_option("--out", out_path, "Output BPDS file")->required();

  // infer
  CLI::App* infer = app.add_subcommand("infer", "Predict the boundary vector of one block");
  ModelFlags infer_model;
  infer_model.add(infer, false);
  infer->get_option("--weights")->required();
  std::string infer_image;
  int root_x = 0, root_y = 0;
  int infer_synthetic_seed = -1;
  infer->add_option("image", infer_image, "8-bit binary PGM image");
  infer->add_option("--synthetic-seed", infer_synthetic_seed,
                    "Use a synthetic 256x256 image with this seed");
  infer->add_option("--x", root_x, "Root block x (multiple of 64 not required)");
  infer->add_option("--y", root_y, "Root block y");
  add_qp(infer);
  infer->add_option("--out", out_path, "Write the vector here instead of stdout");
  add_format(infer);

  // encode
  CLI::App* encode = app.add_subcommand("encode", "Run exhaustive or pruned RDO on an image");
  CorpusFlags encode_corpus;
  encode_corpus.add(encode);
  ModelFlags encode_model;
  encode_model.add(encode, true);
  std::string encode_mode = "exhaustive";
  encode->add_option("--mode", encode_mode, "Search mode")
      ->check(CLI::IsMember({"exhaustive", "pruned"}));
  add_qp(encode);
  add_speed(encode);
  add_threads(encode);
  encode->add_option("--out", out_path, "Write the report here instead of stdout");
  add_format(encode);

  // sweep
  CLI::App* sweep = app.add_subcommand("sweep", "Speed-control trade-off sweep");
  CorpusFlags sweep_corpus;
  sweep_corpus.add(sweep);
  ModelFlags sweep_model;
  sweep_model.add(sweep, true);
  double from = 0.65, to = 3.4, step = 0.25;
  sweep->add_option("--from", from, "First speed-control value");
  sweep->add_option("--to", to, "Last speed-control value (inclusive)");
  sweep->add_option("--step", step, "Speed-control step");
  add_qp(sweep);
  sweep->add_option("--thresholds", thresholds_path,
                    "Thresholds replacing the schedule at every point");
  add_threads(sweep);
  sweep->add_option("--out", out_path, "Write the table here instead of stdout");
  add_format(sweep);

  // enumerate
  CLI::App* enumerate = app.add_subcommand("enumerate", "Count sub-blocks an exhaustive search checks");
  int enum_root = 32;
  std::string enum_rules = "qtbtabt";
  int enum_min = kUnit;
  int enum_max_qt = kMaxQtLevel;
  int enum_btabt = 3;
  enumerate->add_option("--root", enum_root, "Root block side")
      ->check(CLI::IsMember({4, 8, 16, 32, 64}));
  enumerate->add_option("--rules", enum_rules, "Split families allowed")
      ->check(CLI::IsMember({"qt", "qtbt", "qtbtabt"}));
  enumerate->add_option("--min", enum_min, "Minimum block side")
      ->check(CLI::IsMember({4, 8, 16, 32, 64}));
  enumerate->add_option("--max-qt-depth", enum_max_qt,
                        "Deepest QT level (2 = 64x64, 6 = 4x4)")
      ->check(CLI::Range(0, kMaxQtLevel));
  enumerate->add_option("--btabt-depth", enum_btabt,
                        "BT/ABT depth allowed at every QT level")
      ->check(CLI::Range(0, 15));
  add_format(enumerate);

  // verify-weights
  CLI::App* verify = app.add_subcommand("verify-weights", "Validate a BPWT file");
  std::string verify_path;
  std::string verify_arch;
  verify->add_option("weights", verify_path, "BPWT weight file")
      ->required();
  verify->add_option("--arch", verify_arch,
                     "Also check the layers against this architecture JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // argv[0]
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    if (auto* sub = app.get_subcommands().empty() ? nullptr
                                                  : app.get_subcommands().front()) {
      err << "Run with `" << sub->get_name() << " --help` for usage.\n";
    }
    return 2;
  }

  try {
    if (*dataset) {
      const std::vector<Image> corpus = dataset_corpus.load();
      DatasetOptions options;
      options.qps = dataset_qps;
      options.limits = speed_config(speed_control, thresholds_path).limits;
      options.threads = threads;
      log->info("building dataset from {} images", corpus.size());
      const auto records = build_dataset(corpus, options);
      write_dataset_file(out_path, records, Component::kLuma);
      out << "records " << records.size() << "\n";
      return 0;
    }

    if (*infer) {
      Image img;
      if (infer_synthetic_seed >= 0) {
        img = make_synthetic_image(kSyntheticSide, kSyntheticSide,
                                   static_cast<std::uint64_t>(infer_synthetic_seed));
      } else if (!infer_image.empty()) {
        img = read_pgm(infer_image);
      } else {
        err << "infer needs an image or --synthetic-seed\n";
        return 2;
      }
      const auto net = infer_model.network();
      const BoundaryVector v = net->forward(extract_patch(img, root_x, root_y, qp));
      std::ofstream file;
      std::ostream& os = select_output(out_path, file, out);
      os << std::setprecision(9);
      if (format == "json") {
        os << nlohmann::json(v.values()).dump() << "\n";
      } else {
        os << "index,probability\n";
        for (int i = 0; i < kBoundaryCount; ++i) os << i << ',' << v[i] << '\n';
      }
      return 0;
    }

    if (*encode) {
      const std::vector<Image> corpus = encode_corpus.load();
      if (corpus.empty()) {
        err << "encode needs images or --synthetic\n";
        return 2;
      }
      const SpeedControlConfig cfg = speed_config(speed_control, thresholds_path);
      CostModel model;
      model.qp = qp;
      std::shared_ptr<const Network> net;
      if (auto n = encode_model.network()) {
        net = std::make_shared<const Network>(std::move(*n));
      }
      BoundaryPredictor predict;
      if (encode_mode == "pruned") predict = make_predictor(encode_model, net, model);

      struct Row {
        size_t image;
        BlockOrigin origin;
        RDResult result;
        double seconds;
      };
      std::vector<Row> rows;
      for (size_t i = 0; i < corpus.size(); ++i) {
        for (const BlockOrigin& o : root_block_origins(corpus[i])) {
          rows.push_back({i, o, {}, 0.0});
        }
      }
#pragma omp parallel for schedule(dynamic) num_threads(threads)
      for (size_t r = 0; r < rows.size(); ++r) {
        Row& row = rows[r];
        const Image& img = corpus[row.image];
        const auto t0 = std::chrono::steady_clock::now();
        const Plane block = extract_block(img, row.origin.x, row.origin.y, kRootSize);
        if (predict) {
          row.result = pruned_rdo(block, predict(img, row.origin.x, row.origin.y, qp),
                                  cfg, model);
        } else {
          row.result = exhaustive_rdo(block, cfg, model);
        }
        row.seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
      }

      std::ofstream file;
      std::ostream& os = select_output(out_path, file, out);
      double total_cost = 0.0, total_seconds = 0.0;
      std::int64_t total_nodes = 0;
      for (const Row& r : rows) {
        total_cost += r.result.cost;
        total_nodes += r.result.nodes_checked;
        total_seconds += r.seconds;
      }
      if (format == "json") {
        nlohmann::json j;
        j["mode"] = encode_mode;
        j["speed_control"] = speed_control;
        j["qp"] = qp;
        j["blocks"] = nlohmann::json::array();
        for (const Row& r : rows) {
          j["blocks"].push_back({{"image", r.image},
                                 {"x", r.origin.x},
                                 {"y", r.origin.y},
                                 {"cost", r.result.cost},
                                 {"nodes_checked", r.result.nodes_checked},
                                 {"leaves", r.result.leaves}});
        }
        j["total_cost"] = total_cost;
        j["total_nodes_checked"] = total_nodes;
        os << j.dump(2) << "\n";
      } else {
        os << std::setprecision(10);
        os << "image,x,y,cost,nodes_checked,leaves\n";
        for (const Row& r : rows) {
          os << r.image << ',' << r.origin.x << ',' << r.origin.y << ','
             << r.result.cost << ',' << r.result.nodes_checked << ','
             << r.result.leaves << '\n';
        }
      }
      log->info("{} blocks, total cost {:.3f}, {} nodes, {:.3f} s", rows.size(),
                total_cost, total_nodes, total_seconds);
      return 0;
    }

    if (*sweep) {
      const std::vector<Image> corpus = sweep_corpus.load();
      SweepOptions options;
      options.speed_controls = speed_control_range(from, to, step);
      options.model.qp = qp;
      options.threads = threads;
      if (!thresholds_path.empty()) {
        SpeedControlConfig cfg;
        load_thresholds_file(thresholds_path, cfg);
        options.thresholds = cfg.luma_thresholds;
      }
      std::shared_ptr<const Network> net;
      if (auto n = sweep_model.network()) {
        net = std::make_shared<const Network>(std::move(*n));
      }
      const auto rows =
          sweep_tradeoff(corpus, options, make_predictor(sweep_model, net, options.model));
      std::ofstream file;
      std::ostream& os = select_output(out_path, file, out);
      if (format == "json") {
        write_sweep_json(os, rows);
      } else {
        write_sweep_csv(os, rows);
      }
      return 0;
    }

    if (*enumerate) {
      if (enum_root < enum_min) {
        err << "--root must not be smaller than --min\n";
        return 2;
      }
      TreeLimits limits;
      limits.max_qt_depth = enum_max_qt;
      limits.btabt_depth_per_level.fill(enum_btabt);
      limits.min_block_size = enum_min;
      const RuleSet rules = enum_rules == "qt"     ? RuleSet::kQt
                            : enum_rules == "qtbt" ? RuleSet::kQtBt
                                                   : RuleSet::kQtBtAbt;
      const EnumerationCounts c = enumerate_combinations(enum_root, limits, rules);
      if (format == "json") {
        out << nlohmann::json{{"root", enum_root},
                              {"rules", enum_rules},
                              {"memoized", c.memoized},
                              {"raw", c.raw}}
                   .dump()
            << "\n";
      } else if (format == "csv") {
        out << "root,rules,memoized,raw\n"
            << enum_root << ',' << enum_rules << ',' << c.memoized << ','
            << c.raw << "\n";
      } else {
        out << c.memoized << "\n";
      }
      return 0;
    }

    if (*verify) {
      const NetworkWeights w = load_weights_file(verify_path);
      if (!verify_arch.empty()) {
        check_compatible(w, load_architecture_file(verify_arch));
      }
      out << "component " << (w.component == Component::kLuma ? "luma" : "chroma")
          << "\nlayers " << w.layers.size() << "\nparameters "
          << w.parameter_count() << "\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    log->error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    log->error("{}", e.what());
    return 1;
  }
  return 2;
}

}  // namespace ppilot::cli
