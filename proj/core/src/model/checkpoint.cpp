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


#include "pqnet/model/checkpoint.hpp"

#include <string>

#include "binary_io.hpp"
#include "pqnet/checksum.hpp"
#include "pqnet/error.hpp"

namespace pqnet::model {

namespace {

constexpr std::string_view kMagic = "PQMD";
constexpr std::uint8_t kLastKind = static_cast<std::uint8_t>(sim::GateKind::CRZ);

} // namespace

std::vector<std::uint8_t> encode_checkpoint(const ModelState &model) {
    model.validate();
    io::ByteWriter w;
    w.put_bytes(kMagic);
    w.put_u32(kCheckpointVersion);
    w.put_u32(static_cast<std::uint32_t>(model.kernel.size()));
    for (const sim::GateOp &op : model.kernel.ops()) {
        if (op.fixed_angle()) {
            throw InvalidArgument("encode_checkpoint: fixed-angle " +
                                  std::string(sim::to_string(op.kind())) +
                                  " cannot be stored in the layout descriptor");
        }
        w.put_u8(static_cast<std::uint8_t>(op.kind()));
        w.put_u8(static_cast<std::uint8_t>(op.arity()));
        w.put_u8(static_cast<std::uint8_t>(op.qubits()[0]));
        w.put_u8(static_cast<std::uint8_t>(op.arity() == 2 ? op.qubits()[1] : 0));
        const auto slot = op.param_slot();
        w.put_i32(slot ? static_cast<std::int32_t>(slot->index) : -1);
    }
    const std::vector<double> flat = model.flatten();
    w.put_u32(static_cast<std::uint32_t>(flat.size()));
    for (double v : flat) {
        w.put_f64(v);
    }
    w.put_u32(crc32(w.bytes()));
    return w.bytes();
}

ModelState decode_checkpoint(std::span<const std::uint8_t> bytes) {
    io::ByteReader r(bytes, "checkpoint");
    if (r.get_bytes(4) != kMagic) {
        r.fail("bad magic (not a PQMD file)");
    }
    const std::uint32_t version = r.get_u32();
    if (version != kCheckpointVersion) {
        r.fail("unsupported format version " + std::to_string(version));
    }
    const std::uint32_t op_count = r.get_u32();
    if (op_count > r.remaining() / 8) {
        r.fail("truncated: header announces " + std::to_string(op_count) + " ops");
    }
    std::vector<sim::GateOp> ops;
    ops.reserve(op_count);
    for (std::uint32_t i = 0; i < op_count; ++i) {
        const std::uint8_t kind_raw = r.get_u8();
        const std::uint8_t arity = r.get_u8();
        const std::uint8_t q0 = r.get_u8();
        const std::uint8_t q1 = r.get_u8();
        const std::int32_t slot = r.get_i32();
        if (kind_raw > kLastKind) {
            r.fail("unknown gate kind " + std::to_string(kind_raw) + " at op " + std::to_string(i));
        }
        const auto kind = static_cast<sim::GateKind>(kind_raw);
        if (arity != sim::arity(kind) || (sim::is_rotation(kind) != (slot >= 0)) || slot < -1) {
            r.fail("inconsistent descriptor at op " + std::to_string(i));
        }
        try {
            if (slot >= 0) {
                const sim::ParamSlot s{static_cast<std::uint32_t>(slot)};
                ops.push_back(arity == 2 ? sim::GateOp::rotation(kind, q0, q1, s)
                                         : sim::GateOp::rotation(kind, q0, s));
            } else {
                ops.push_back(arity == 2 ? sim::GateOp::fixed(kind, q0, q1)
                                         : sim::GateOp::fixed(kind, q0));
            }
        } catch (const InvalidArgument &e) {
            r.fail("invalid op " + std::to_string(i) + ": " + e.what());
        }
    }
    sim::Circuit kernel;
    try {
        kernel = sim::Circuit(kKernelQubits, std::move(ops));
    } catch (const InvalidArgument &e) {
        r.fail(std::string("invalid kernel layout: ") + e.what());
    }
    ModelState model(std::move(kernel));
    const std::uint32_t count = r.get_u32();
    if (count != model.parameter_count()) {
        r.fail("parameter count " + std::to_string(count) + " does not match the layout (" +
               std::to_string(model.parameter_count()) + ")");
    }
    std::vector<double> flat(count);
    for (double &v : flat) {
        v = r.get_f64();
    }
    const std::size_t body_end = r.position();
    const std::uint32_t stored = r.get_u32();
    if (r.remaining() != 0) {
        r.fail("trailing bytes after checksum");
    }
    if (crc32(r.slice(0, body_end)) != stored) {
        r.fail("checksum mismatch");
    }
    model.assign(flat);
    return model;
}

void save_checkpoint(const ModelState &model, const std::filesystem::path &path) {
    io::write_file(path, encode_checkpoint(model));
}

ModelState load_checkpoint(const std::filesystem::path &path) {
    return decode_checkpoint(io::read_file(path));
}

} // namespace pqnet::model
