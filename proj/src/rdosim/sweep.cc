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

#include <omp.h>

#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <map>
#include <ostream>

#include "json.hpp"

#include "partition_pilot/rdosim.h"
#include "partition_pilot/status.h"

namespace ppilot {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct BlockJob {
  const Image* image;
  BlockOrigin origin;
};

struct Outcome {
  double anchor_cost = 0.0;
  double pruned_cost = 0.0;
  std::int64_t anchor_nodes = 0;
  std::int64_t pruned_nodes = 0;
  double anchor_seconds = 0.0;
  double pruned_seconds = 0.0;
};

// Index of the tree-structure row holding `s`; anchors are shared per row.
size_t row_of(double s) {
  const auto& rows = tree_structure_rows();
  for (size_t i = 0; i < rows.size(); ++i) {
    if (s >= rows[i].begin && s < rows[i].end) return i;
  }
  return rows.size() - 1;
}

}  // namespace

std::vector<SweepRow> sweep_tradeoff(const std::vector<Image>& corpus,
                                     const SweepOptions& options,
                                     const BoundaryPredictor& predict) {
  std::vector<BlockJob> jobs;
  for (const Image& img : corpus) {
    for (const BlockOrigin& o : root_block_origins(img)) jobs.push_back({&img, o});
  }
  if (jobs.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no whole 64x64 block in corpus");
  }

  std::vector<SpeedControlConfig> configs;
  for (double s : options.speed_controls) {
    SpeedControlConfig cfg = config_from_speed_control(s, options.schedule);
    if (options.thresholds) cfg.luma_thresholds = *options.thresholds;
    configs.push_back(cfg);
  }

  const size_t n_jobs = jobs.size();
  const size_t n_cfg = configs.size();
  std::vector<Outcome> outcomes(n_jobs * n_cfg);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic) num_threads(options.threads)
  for (size_t j = 0; j < n_jobs; ++j) {
    try {
      const BlockJob& job = jobs[j];
      const Plane block =
          extract_block(*job.image, job.origin.x, job.origin.y, kRootSize);

      auto t0 = Clock::now();
      const BoundaryVector boundary =
          predict(*job.image, job.origin.x, job.origin.y, options.model.qp);
      const double predict_seconds = seconds_since(t0);

      std::map<size_t, std::pair<RDResult, double>> anchors;
      for (size_t c = 0; c < n_cfg; ++c) {
        const size_t row = row_of(configs[c].speed_control);
        auto it = anchors.find(row);
        if (it == anchors.end()) {
          t0 = Clock::now();
          RDResult anchor = exhaustive_rdo(block, configs[c], options.model);
          it = anchors.emplace(row, std::pair{std::move(anchor),
                                              seconds_since(t0)})
                   .first;
        }
        t0 = Clock::now();
        const RDResult pruned =
            pruned_rdo(block, boundary, configs[c], options.model);
        const double pruned_seconds = seconds_since(t0);

        Outcome& o = outcomes[j * n_cfg + c];
        o.anchor_cost = it->second.first.cost;
        o.anchor_nodes = it->second.first.nodes_checked;
        o.anchor_seconds = it->second.second;
        o.pruned_cost = pruned.cost;
        o.pruned_nodes = pruned.nodes_checked;
        o.pruned_seconds = pruned_seconds + predict_seconds;
      }
    } catch (...) {
#pragma omp critical(ppilot_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<SweepRow> rows;
  for (size_t c = 0; c < n_cfg; ++c) {
    double pct = 0.0, anchor_t = 0.0, pruned_t = 0.0;
    std::int64_t anchor_n = 0, pruned_n = 0;
    for (size_t j = 0; j < n_jobs; ++j) {
      const Outcome& o = outcomes[j * n_cfg + c];
      pct += 100.0 * (o.pruned_cost - o.anchor_cost) / o.anchor_cost;
      anchor_n += o.anchor_nodes;
      pruned_n += o.pruned_nodes;
      anchor_t += o.anchor_seconds;
      pruned_t += o.pruned_seconds;
    }
    SweepRow row;
    row.speed_control = configs[c].speed_control;
    row.cost_increase_pct = pct / static_cast<double>(n_jobs);
    row.node_ratio =
        static_cast<double>(pruned_n) / static_cast<double>(anchor_n);
    row.time_ratio = anchor_t > 0.0 ? pruned_t / anchor_t : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> speed_control_range(double from, double to, double step) {
  if (!(step > 0.0) || !(to >= from)) {
    throw Error(ErrorCode::kOutOfRange, "empty speed-control range");
  }
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(from + static_cast<double>(i) * step);
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "speed_control,cost_increase_pct,node_ratio,time_ratio\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(6);
  for (const SweepRow& r : rows) {
    out << r.speed_control << ',' << r.cost_increase_pct << ','
        << r.node_ratio << ',' << r.time_ratio << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

void write_sweep_json(std::ostream& out, const std::vector<SweepRow>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    j.push_back({{"speed_control", r.speed_control},
                 {"cost_increase_pct", r.cost_increase_pct},
                 {"node_ratio", r.node_ratio},
                 {"time_ratio", r.time_ratio}});
  }
  out << j.dump(2) << '\n';
}

}  // namespace ppilot
