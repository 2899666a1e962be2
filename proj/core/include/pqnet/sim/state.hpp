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

/// Pure state of `qubit_count` qubits. Qubit 0 is the most significant bit
/// of the basis index, so |10...0> has index 2^(n-1).
class Statevector {
  public:
    /// |0...0>.
    explicit Statevector(std::size_t qubit_count);
    /// Takes ownership of amplitudes; length must be 2^qubit_count.
    Statevector(std::size_t qubit_count, std::vector<Complex> amplitudes);

    std::size_t qubit_count() const { return qubits_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<Complex> amplitudes() { return amps_; }
    std::span<const Complex> amplitudes() const { return amps_; }
    Complex operator[](std::size_t i) const { return amps_[i]; }

    double norm() const;

    friend bool operator==(const Statevector &, const Statevector &) = default;

  private:
    std::size_t qubits_;
    std::vector<Complex> amps_;
};

/// B statevectors of one register size stored row-major in a single block.
class StateBatch {
  public:
    StateBatch() = default;
    /// B copies of |0...0>.
    StateBatch(std::size_t batch_size, std::size_t qubit_count);
    /// Rows from a flat row-major amplitude block (length B * 2^n).
    StateBatch(std::size_t qubit_count, std::vector<Complex> amplitudes);

    static StateBatch from_states(std::span<const Statevector> states);

    std::size_t batch_size() const { return batch_; }
    std::size_t qubit_count() const { return qubits_; }
    std::size_t dim() const { return dim_; }

    std::span<Complex> row(std::size_t r) { return {amps_.data() + r * dim_, dim_}; }
    std::span<const Complex> row(std::size_t r) const { return {amps_.data() + r * dim_, dim_}; }
    std::span<Complex> data() { return amps_; }
    std::span<const Complex> data() const { return amps_; }

    Statevector state(std::size_t r) const;
    double row_norm(std::size_t r) const;

    friend bool operator==(const StateBatch &, const StateBatch &) = default;

  private:
    std::size_t batch_ = 0;
    std::size_t qubits_ = 0;
    std::size_t dim_ = 1;
    std::vector<Complex> amps_;
};

} // namespace pqnet::sim
