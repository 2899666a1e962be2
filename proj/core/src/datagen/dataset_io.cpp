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


#include <cmath>
#include <string>

#include "binary_io.hpp"
#include "pqnet/checksum.hpp"
#include "pqnet/datagen.hpp"
#include "pqnet/error.hpp"

namespace pqnet::datagen {

namespace {

constexpr std::string_view kMagic = "PQWD";

} // namespace

std::vector<std::uint8_t> encode_dataset(const Dataset &ds) {
    io::ByteWriter w;
    w.put_bytes(kMagic);
    w.put_u32(Dataset::kFormatVersion);
    w.put_u32(static_cast<std::uint32_t>(ds.qubit_count));
    w.put_u64(ds.samples.size());
    const std::size_t payload_start = w.size();
    const std::size_t dim = std::size_t{1} << ds.qubit_count;
    for (const Sample &s : ds.samples) {
        if (s.state.dim() != dim) {
            throw InvalidArgument("encode_dataset: sample register size differs from dataset");
        }
        w.put_u8(s.label);
        for (const Complex &a : s.state.amplitudes()) {
            w.put_f64(a.real());
            w.put_f64(a.imag());
        }
    }
    const std::uint32_t crc = crc32(w.tail_from(payload_start));
    w.put_u32(crc);
    return w.bytes();
}

Dataset decode_dataset(std::span<const std::uint8_t> bytes) {
    io::ByteReader r(bytes, "dataset");
    if (r.get_bytes(4) != kMagic) {
        r.fail("bad magic (not a PQWD file)");
    }
    const std::uint32_t version = r.get_u32();
    if (version != Dataset::kFormatVersion) {
        r.fail("unsupported format version " + std::to_string(version));
    }
    const std::uint32_t qubits = r.get_u32();
    if (qubits == 0 || qubits > 20) {
        r.fail("implausible qubit count " + std::to_string(qubits));
    }
    const std::uint64_t count = r.get_u64();
    const std::size_t dim = std::size_t{1} << qubits;
    const std::size_t record = 1 + dim * 16;
    if (count > (r.remaining() / record)) {
        r.fail("truncated: header announces " + std::to_string(count) + " samples");
    }
    const std::size_t payload_start = r.position();

    Dataset ds;
    ds.qubit_count = qubits;
    ds.samples.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint8_t label = r.get_u8();
        std::vector<Complex> amps(dim);
        for (Complex &a : amps) {
            const double re = r.get_f64();
            const double im = r.get_f64();
            a = {re, im};
        }
        ds.samples.push_back({sim::Statevector(qubits, std::move(amps)), label});
    }
    const std::size_t payload_end = r.position();
    const std::uint32_t stored = r.get_u32();
    if (r.remaining() != 0) {
        r.fail("trailing bytes after checksum");
    }
    if (crc32(r.slice(payload_start, payload_end)) != stored) {
        r.fail("CRC-32 mismatch");
    }
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        const Sample &s = ds.samples[i];
        if (s.label >= kNumClasses) {
            r.fail("sample " + std::to_string(i) + " has label " + std::to_string(s.label));
        }
        if (!(std::abs(s.state.norm() - 1.0) <= 1e-10)) {
            r.fail("sample " + std::to_string(i) + " is not unit norm");
        }
    }
    return ds;
}

void save_dataset(const Dataset &ds, const std::filesystem::path &path) {
    io::write_file(path, encode_dataset(ds));
}

Dataset load_dataset(const std::filesystem::path &path) {
    return decode_dataset(io::read_file(path));
}

} // namespace pqnet::datagen
