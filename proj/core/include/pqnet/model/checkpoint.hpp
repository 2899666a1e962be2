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
#include <vector>

#include "pqnet/model/model.hpp"

namespace pqnet::model {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// "PQMD", u32 version, u32 op count, then per op u8 kind, u8 arity, u8 q0,
/// u8 q1 (0 for single-qubit ops), i32 slot (-1 for fixed ops); then u32
/// parameter count and the parameters (theta, W row-major, bias) as f64;
/// then the CRC-32 of everything before it. All little-endian.
/// Throws InvalidArgument for kernels with fixed-angle rotations, which the
/// layout descriptor cannot carry.
std::vector<std::uint8_t> encode_checkpoint(const ModelState &model);

/// Throws FormatError on bad magic, version, truncation, checksum or layout.
ModelState decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const ModelState &model, const std::filesystem::path &path);
ModelState load_checkpoint(const std::filesystem::path &path);

} // namespace pqnet::model
