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

#include "partition_pilot/binary_io.h"
#include "partition_pilot/dataset.h"
#include "partition_pilot/status.h"

namespace ppilot {

namespace {

constexpr std::string_view kDatasetMagic = "BPDS";
constexpr std::string_view kGoldenMagic = "BPGV";
constexpr std::uint32_t kVersion = 1;

}  // namespace

std::vector<std::byte> serialize_dataset(std::span<const DatasetRecord> records,
                                         Component component) {
  ByteWriter out;
  out.magic(kDatasetMagic);
  out.u32(kVersion);
  out.u64(records.size());
  out.u8(static_cast<std::uint8_t>(component));
  for (const DatasetRecord& r : records) {
    if (r.patch.component != component) {
      throw Error(ErrorCode::kChannelMismatch,
                  "record component differs from the file component");
    }
    validate_patch(r.patch);
    out.u32(r.source_id);
    out.f32(r.patch.qstep_norm);
    out.f32s(r.patch.samples);
    for (int i = 0; i < kBoundaryCount; ++i) {
      const float v = r.label[i];
      if (v != 0.0f && v != 1.0f) {
        throw Error(ErrorCode::kShapeMismatch, "label values must be 0 or 1");
      }
      out.u8(v == 1.0f ? 1 : 0);
    }
  }
  out.crc_trailer();
  return out.take();
}

std::vector<DatasetRecord> parse_dataset(std::span<const std::byte> bytes) {
  ByteReader in(bytes);
  if (!in.magic(kDatasetMagic)) {
    throw Error(ErrorCode::kBadMagic, "not a BPDS file");
  }
  const std::uint32_t version = in.u32();
  if (version != kVersion) {
    throw Error(ErrorCode::kVersionUnsupported,
                "BPDS version " + std::to_string(version));
  }
  const std::uint64_t count = in.u64();
  const std::uint8_t component = in.u8();
  if (component > 1) throw Error(ErrorCode::kShapeMismatch, "bad component");
  const Component comp = static_cast<Component>(component);
  const size_t channels = comp == Component::kLuma ? 1 : 2;
  const size_t record_bytes = 4 + 4 + 4 * channels * kPatchArea + kBoundaryCount;
  if (count > in.remaining() / record_bytes) {
    throw Error(ErrorCode::kTruncatedStream,
                "header announces " + std::to_string(count) + " records");
  }

  std::vector<DatasetRecord> records(static_cast<size_t>(count));
  for (DatasetRecord& r : records) {
    r.source_id = in.u32();
    r.patch.component = comp;
    r.patch.qstep_norm = in.f32();
    r.patch.samples.resize(channels * kPatchArea);
    in.f32s(r.patch.samples);
    for (int i = 0; i < kBoundaryCount; ++i) {
      const std::uint8_t v = in.u8();
      if (v > 1) throw Error(ErrorCode::kShapeMismatch, "label byte not 0/1");
      r.label[i] = static_cast<float>(v);
    }
  }
  in.expect_crc_trailer();
  return records;
}

void write_dataset_file(const std::string& path,
                        std::span<const DatasetRecord> records,
                        Component component) {
  write_file_bytes(path, serialize_dataset(records, component));
}

std::vector<DatasetRecord> read_dataset_file(const std::string& path) {
  return parse_dataset(read_file_bytes(path));
}

std::vector<std::byte> serialize_goldens(std::span<const GoldenEntry> entries) {
  ByteWriter out;
  out.magic(kGoldenMagic);
  out.u32(kVersion);
  out.u32(static_cast<std::uint32_t>(entries.size()));
  for (const GoldenEntry& e : entries) {
    if (e.output.size() != static_cast<size_t>(kBoundaryCount) ||
        e.patch.channels() != entries.front().patch.channels()) {
      throw Error(ErrorCode::kShapeMismatch, "inconsistent golden entries");
    }
    validate_patch(e.patch);
    out.f32s(e.patch.samples);
    out.f32(e.patch.qstep_norm);
    out.f32s(e.output);
  }
  out.crc_trailer();
  return out.take();
}

std::vector<GoldenEntry> parse_goldens(std::span<const std::byte> bytes) {
  ByteReader in(bytes);
  if (!in.magic(kGoldenMagic)) {
    throw Error(ErrorCode::kBadMagic, "not a BPGV file");
  }
  const std::uint32_t version = in.u32();
  if (version != kVersion) {
    throw Error(ErrorCode::kVersionUnsupported,
                "BPGV version " + std::to_string(version));
  }
  const std::uint32_t count = in.u32();
  std::vector<GoldenEntry> entries;
  if (count == 0) {
    in.expect_crc_trailer();
    return entries;
  }
  if (in.remaining() < 4) {
    throw Error(ErrorCode::kTruncatedStream, "golden payload missing");
  }
  // Payload floats per entry: channels * 65 * 65 + 1 + 480.
  const size_t payload_floats = (in.remaining() - 4) / 4;
  size_t channels = 0;
  for (size_t ch : {size_t{1}, size_t{2}}) {
    if (payload_floats == count * (ch * kPatchArea + 1 + kBoundaryCount)) {
      channels = ch;
    }
  }
  if (channels == 0) {
    throw Error(ErrorCode::kTruncatedStream,
                "golden payload size does not match " + std::to_string(count) +
                    " entries");
  }
  entries.resize(count);
  for (GoldenEntry& e : entries) {
    e.patch.component = channels == 1 ? Component::kLuma : Component::kChroma;
    e.patch.samples.resize(channels * kPatchArea);
    in.f32s(e.patch.samples);
    e.patch.qstep_norm = in.f32();
    e.output.resize(kBoundaryCount);
    in.f32s(e.output);
  }
  in.expect_crc_trailer();
  return entries;
}

std::vector<GoldenEntry> read_goldens_file(const std::string& path) {
  return parse_goldens(read_file_bytes(path));
}

}  // namespace ppilot
