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


#include "pqnet/sim/circuit.hpp"

#include <algorithm>
#include <string>

#include "pqnet/error.hpp"

namespace pqnet::sim {

Circuit::Circuit(std::size_t qubit_count, std::vector<GateOp> ops)
    : qubit_count_(qubit_count), ops_(std::move(ops)) {
    if (qubit_count_ == 0 || qubit_count_ > 30) {
        throw InvalidArgument("Circuit: unsupported qubit count " + std::to_string(qubit_count_));
    }
    std::vector<bool> seen;
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        const GateOp &op = ops_[i];
        for (auto q : op.qubits()) {
            if (q >= qubit_count_) {
                throw InvalidArgument("Circuit: op " + std::to_string(i) + " (" +
                                      std::string(to_string(op.kind())) + ") uses qubit " +
                                      std::to_string(q) + " of a " +
                                      std::to_string(qubit_count_) + "-qubit register");
            }
        }
        if (auto slot = op.param_slot()) {
            if (slot->index >= seen.size()) {
                seen.resize(slot->index + 1, false);
            }
            seen[slot->index] = true;
        }
    }
    auto gap = std::find(seen.begin(), seen.end(), false);
    if (gap != seen.end()) {
        throw InvalidArgument("Circuit: parameter slot " +
                              std::to_string(gap - seen.begin()) + " is never referenced");
    }
    param_count_ = seen.size();
}

std::size_t Circuit::two_qubit_count() const {
    return static_cast<std::size_t>(
        std::count_if(ops_.begin(), ops_.end(), [](const GateOp &op) { return op.arity() == 2; }));
}

Circuit Circuit::appended(std::span<const GateOp> extra) const {
    std::vector<GateOp> ops = ops_;
    ops.insert(ops.end(), extra.begin(), extra.end());
    Circuit out(qubit_count_, std::move(ops));
    if (out.param_count_ != param_count_) {
        throw InvalidArgument("Circuit::appended: extra ops introduce new parameter slots");
    }
    return out;
}

} // namespace pqnet::sim
