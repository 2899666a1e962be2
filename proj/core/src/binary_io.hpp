// Copyright 2026 The pqnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pqnet::io {

// Little-endian encoder used by the dataset and checkpoint formats.
class ByteWriter {
  public:
    void put_bytes(std::string_view bytes);
    void put_u8(std::uint8_t v) { buf_.push_back(v); }
    void put_u32(std::uint32_t v);
    void put_i32(std::int32_t v) { put_u32(static_cast<std::uint32_t>(v)); }
    void put_u64(std::uint64_t v);
    void put_f64(double v);

    std::size_t size() const { return buf_.size(); }
    const std::vector<std::uint8_t> &bytes() const { return buf_; }
    std::span<const std::uint8_t> tail_from(std::size_t offset) const {
        return std::span<const std::uint8_t>(buf_).subspan(offset);
    }

  private:
    std::vector<std::uint8_t> buf_;
};

// Bounds-checked little-endian decoder; throws FormatError on truncation.
class ByteReader {
  public:
    ByteReader(std::span<const std::uint8_t> bytes, std::string context)
        : bytes_(bytes), context_(std::move(context)) {}

    std::string get_bytes(std::size_t n);
    std::uint8_t get_u8();
    std::uint32_t get_u32();
    std::int32_t get_i32() { return static_cast<std::int32_t>(get_u32()); }
    std::uint64_t get_u64();
    double get_f64();

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }
    std::span<const std::uint8_t> slice(std::size_t from, std::size_t to) const {
        return bytes_.subspan(from, to - from);
    }
    [[noreturn]] void fail(const std::string &what) const;

  private:
    void require(std::size_t n) const;

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
    std::string context_;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::span<const std::uint8_t> bytes);

} // namespace pqnet::io
