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

#ifndef PARTITION_PILOT_BINARY_IO_H_
#define PARTITION_PILOT_BINARY_IO_H_

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "partition_pilot/status.h"

namespace ppilot {

// CRC-32 (IEEE 802.3, as in zlib/PNG).
std::uint32_t crc32(std::span<const std::byte> data);

// Little-endian appender for the on-disk formats.
class ByteWriter {
 public:
  void magic(std::string_view m) {
    for (char c : m) buf_.push_back(static_cast<std::byte>(c));
  }
  void u8(std::uint8_t v) { buf_.push_back(static_cast<std::byte>(v)); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void u64(std::uint64_t v) { put_le(v, 8); }
  void f32(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    u32(bits);
  }
  void f32s(std::span<const float> vs) {
    for (float v : vs) f32(v);
  }
  // Appends the CRC-32 of everything written so far.
  void crc_trailer() { u32(crc32(buf_)); }

  const std::vector<std::byte>& bytes() const { return buf_; }
  std::vector<std::byte> take() { return std::move(buf_); }

 private:
  void put_le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) {
      buf_.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
    }
  }
  std::vector<std::byte> buf_;
};

// Bounds-checked little-endian reader; throws Error(kTruncatedStream).
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> data) : data_(data) {}

  bool magic(std::string_view m) {
    need(m.size());
    bool ok = std::memcmp(data_.data() + pos_, m.data(), m.size()) == 0;
    pos_ += m.size();
    return ok;
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
  std::uint64_t u64() { return get_le(8); }
  float f32() {
    std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  void f32s(std::span<float> out) {
    need(out.size() * 4);
    for (float& v : out) v = f32();
  }

  size_t position() const { return pos_; }
  size_t remaining() const { return data_.size() - pos_; }

  // Reads the 4-byte trailer and checks it against the CRC of all bytes
  // before it.  The trailer must end the stream.
  void expect_crc_trailer() {
    const size_t body = pos_;
    const std::uint32_t stored = u32();
    if (remaining() != 0) {
      throw Error(ErrorCode::kShapeMismatch,
                  "unexpected bytes after checksum trailer");
    }
    if (crc32(data_.first(body)) != stored) {
      throw Error(ErrorCode::kChecksumMismatch, "CRC-32 trailer mismatch");
    }
  }

 private:
  void need(size_t n) const {
    if (data_.size() - pos_ < n) {
      throw Error(ErrorCode::kTruncatedStream,
                  "stream ended at byte " + std::to_string(data_.size()));
    }
  }
  std::uint64_t get_le(int n) {
    need(static_cast<size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(data_[pos_++]) << (8 * i);
    }
    return v;
  }

  std::span<const std::byte> data_;
  size_t pos_ = 0;
};

std::vector<std::byte> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const std::byte> data);

}  // namespace ppilot

#endif  // PARTITION_PILOT_BINARY_IO_H_
