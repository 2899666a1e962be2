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

#include <cstddef>
#include <span>
#include <vector>

#include "pqnet/sim/gate.hpp"

namespace pqnet::sim {

/// Ordered gate list over a fixed register. The referenced parameter slots
/// are always exactly {0, ..., param_count - 1}.
class Circuit {
  public:
    Circuit() = default;
    /// Validates qubit indices and slot contiguity; throws InvalidArgument.
    Circuit(std::size_t qubit_count, std::vector<GateOp> ops);

    std::size_t qubit_count() const { return qubit_count_; }
    std::size_t param_count() const { return param_count_; }
    std::size_t size() const { return ops_.size(); }
    bool empty() const { return ops_.empty(); }
    std::span<const GateOp> ops() const { return ops_; }
    const GateOp &operator[](std::size_t i) const { return ops_[i]; }

    /// Number of two-qubit operations (the noise sites for gate noise).
    std::size_t two_qubit_count() const;

    /// Copy with `extra` appended; `extra` may only use existing slots or
    /// fixed angles.
    Circuit appended(std::span<const GateOp> extra) const;

    friend bool operator==(const Circuit &, const Circuit &) = default;

  private:
    std::size_t qubit_count_ = 0;
    std::vector<GateOp> ops_;
    std::size_t param_count_ = 0;
};

} // namespace pqnet::sim
