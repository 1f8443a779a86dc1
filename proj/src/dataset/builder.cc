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

#include <algorithm>
#include <exception>

#include "partition_pilot/dataset.h"
#include "partition_pilot/status.h"

namespace ppilot {

std::vector<DatasetRecord> build_dataset(const std::vector<Image>& corpus,
                                         const DatasetOptions& options) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "no images");
  if (options.qps.empty()) throw Error(ErrorCode::kOutOfRange, "no QPs");
  std::vector<int> qps = options.qps;
  std::sort(qps.begin(), qps.end());

  struct Job {
    std::uint32_t image;
    BlockOrigin origin;
  };
  std::vector<Job> jobs;
  for (size_t i = 0; i < corpus.size(); ++i) {
    for (const BlockOrigin& o : root_block_origins(corpus[i])) {
      jobs.push_back({static_cast<std::uint32_t>(i), o});
    }
  }

  // One fixed slot per record.
  std::vector<DatasetRecord> records(jobs.size() * qps.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) num_threads(options.threads)
  for (size_t j = 0; j < jobs.size(); ++j) {
    try {
      const Job& job = jobs[j];
      const Image& img = corpus[job.image];
      const Plane block = extract_block(img, job.origin.x, job.origin.y, kRootSize);
      for (size_t q = 0; q < qps.size(); ++q) {
        CostModel model = options.model;
        model.qp = qps[q];
        DatasetRecord& r = records[j * qps.size() + q];
        r.source_id = job.image;
        r.patch = extract_patch(img, job.origin.x, job.origin.y, qps[q]);
        r.label = oracle_boundaries(block, options.limits, model);
      }
    } catch (...) {
#pragma omp critical(ppilot_dataset_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

}  // namespace ppilot
