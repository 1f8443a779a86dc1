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

#ifndef PARTITION_PILOT_DATASET_H_
#define PARTITION_PILOT_DATASET_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "partition_pilot/geometry.h"
#include "partition_pilot/image.h"
#include "partition_pilot/inference.h"
#include "partition_pilot/rdosim.h"

namespace ppilot {

// Normalized causal-border value used outside the picture.
inline constexpr float kBorderFill = 0.5f;

// (qstep(qp) - qstep(19)) / (qstep(41) - qstep(19)), clamped to [0,1].
float normalized_qstep(int qp);

// Luma patch of the 64x64 root at (root_x, root_y) with its top and left
// causal border.  Throws Error(kOutOfBounds) unless the root is inside.
Patch extract_patch(const Image& img, int root_x, int root_y, int qp);

struct DatasetRecord {
  Patch patch;
  BoundaryVector label;
  std::uint32_t source_id = 0;
  bool operator==(const DatasetRecord&) const = default;
};

struct DatasetOptions {
  std::vector<int> qps;
  TreeLimits limits;       // tree structure of the ground-truth search
  CostModel model;         // qp is overridden per record
  int threads = 1;
};

// One record per (image, root block in raster order, qp ascending).  The
// label is the boundary vector of the exhaustive optimum; source_id is the
// image index.  Throws Error(kEmptyCorpus) for an empty corpus.
std::vector<DatasetRecord> build_dataset(const std::vector<Image>& corpus,
                                         const DatasetOptions& options);

// BPDS reader/writer.  All records must share `component`.
std::vector<std::byte> serialize_dataset(std::span<const DatasetRecord> records,
                                         Component component);
std::vector<DatasetRecord> parse_dataset(std::span<const std::byte> bytes);
void write_dataset_file(const std::string& path,
                        std::span<const DatasetRecord> records,
                        Component component);
std::vector<DatasetRecord> read_dataset_file(const std::string& path);

// Reference input/output pairs for inference parity (BPGV).
struct GoldenEntry {
  Patch patch;
  std::vector<float> output;  // 480 values
  bool operator==(const GoldenEntry&) const = default;
};

std::vector<std::byte> serialize_goldens(std::span<const GoldenEntry> entries);
// The patch channel count is inferred from the payload size.
std::vector<GoldenEntry> parse_goldens(std::span<const std::byte> bytes);
std::vector<GoldenEntry> read_goldens_file(const std::string& path);

}  // namespace ppilot

#endif  // PARTITION_PILOT_DATASET_H_
