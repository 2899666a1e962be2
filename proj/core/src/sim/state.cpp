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


#include "pqnet/sim/state.hpp"

#include <cmath>
#include <string>

#include "pqnet/error.hpp"

namespace pqnet::sim {

namespace {

std::size_t checked_dim(std::size_t qubits) {
    if (qubits == 0 || qubits > 30) {
        throw InvalidArgument("unsupported qubit count " + std::to_string(qubits));
    }
    return std::size_t{1} << qubits;
}

double squared_norm(std::span<const Complex> amps) {
    double s = 0.0;
    for (const Complex &a : amps) {
        s += std::norm(a);
    }
    return s;
}

} // namespace

Statevector::Statevector(std::size_t qubit_count)
    : qubits_(qubit_count), amps_(checked_dim(qubit_count)) {
    amps_[0] = 1.0;
}

Statevector::Statevector(std::size_t qubit_count, std::vector<Complex> amplitudes)
    : qubits_(qubit_count), amps_(std::move(amplitudes)) {
    if (amps_.size() != checked_dim(qubit_count)) {
        throw InvalidArgument("Statevector: " + std::to_string(amps_.size()) +
                              " amplitudes for " + std::to_string(qubit_count) + " qubits");
    }
}

double Statevector::norm() const { return std::sqrt(squared_norm(amps_)); }

StateBatch::StateBatch(std::size_t batch_size, std::size_t qubit_count)
    : batch_(batch_size), qubits_(qubit_count), dim_(checked_dim(qubit_count)),
      amps_(batch_size * dim_) {
    for (std::size_t r = 0; r < batch_; ++r) {
        amps_[r * dim_] = 1.0;
    }
}

StateBatch::StateBatch(std::size_t qubit_count, std::vector<Complex> amplitudes)
    : qubits_(qubit_count), dim_(checked_dim(qubit_count)), amps_(std::move(amplitudes)) {
    if (amps_.size() % dim_ != 0) {
        throw InvalidArgument("StateBatch: amplitude block is not a multiple of 2^" +
                              std::to_string(qubit_count));
    }
    batch_ = amps_.size() / dim_;
}

StateBatch StateBatch::from_states(std::span<const Statevector> states) {
    if (states.empty()) {
        throw InvalidArgument("StateBatch::from_states: no states");
    }
    const std::size_t n = states.front().qubit_count();
    std::vector<Complex> amps;
    amps.reserve(states.size() * states.front().dim());
    for (const Statevector &s : states) {
        if (s.qubit_count() != n) {
            throw InvalidArgument("StateBatch::from_states: mixed register sizes");
        }
        amps.insert(amps.end(), s.amplitudes().begin(), s.amplitudes().end());
    }
    return StateBatch(n, std::move(amps));
}

Statevector StateBatch::state(std::size_t r) const {
    auto rr = row(r);
    return Statevector(qubits_, std::vector<Complex>(rr.begin(), rr.end()));
}

double StateBatch::row_norm(std::size_t r) const { return std::sqrt(squared_norm(row(r))); }

} // namespace pqnet::sim
