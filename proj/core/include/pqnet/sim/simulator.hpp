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

#include "pqnet/sim/circuit.hpp"
#include "pqnet/sim/gate.hpp"
#include "pqnet/sim/state.hpp"

namespace pqnet::sim {

/// Pauli `axis` on `qubit`; one term of a measured observable list.
struct Observable {
    Pauli axis;
    std::size_t qubit;
};

/// Multiplies every row by the gate's unitary. Throws InvalidArgument for an
/// out-of-range qubit or a parameter slot not covered by `params`.
void apply_gate(StateBatch &batch, const GateOp &op, std::span<const double> params);

/// Applies the inverse (conjugate transpose) of the gate.
void apply_gate_dagger(StateBatch &batch, const GateOp &op, std::span<const double> params);

/// Applies the ops of `circuit` in order. `params.size()` must equal
/// `circuit.param_count()`.
void run_circuit(StateBatch &batch, const Circuit &circuit, std::span<const double> params);
Statevector run_circuit(const Statevector &state, const Circuit &circuit,
                        std::span<const double> params);

/// Pauli on one qubit of a single row (a `dim`-length amplitude span).
void apply_pauli(std::span<Complex> row, std::size_t qubit_count, Pauli axis, std::size_t qubit);

/// Each row of `rows` (row-major, `row_length` = 2^n entries per row) becomes
/// the L2-normalized real statevector. Throws EncodingError naming the first
/// all-zero row.
StateBatch amplitude_encode(std::span<const double> rows, std::size_t row_length = 16);

/// Exact <psi|P_qubit|psi> per row.
std::vector<double> pauli_expectation(const StateBatch &batch, Pauli axis, std::size_t qubit);
double pauli_expectation(std::span<const Complex> row, std::size_t qubit_count, Pauli axis,
                         std::size_t qubit);

/// Expectations for every qubit and every axis in `axes`, written to
/// out[(r * qubit_count + q) * axes.size() + a].
void pauli_expectations(const StateBatch &batch, std::span<const Pauli> axes,
                        std::span<double> out);

/// Im <lambda|G|psi> summed over rows, where G is the Hermitian generator of the
/// rotation `op` (Pauli on the target, projected on control = |1> for controlled
/// kinds). This is d/dtheta of 2 Re <lambda|psi> when psi is the state just after `op`.
double generator_overlap(const StateBatch &cotangent, const StateBatch &state, const GateOp &op);

/// Reverse-mode vector-Jacobian product through `circuit`.
///
/// `state` holds the circuit outputs psi_r and `cotangent` the adjoint states
/// lambda_r; the result is sum_r 2 Re <lambda_r| d psi_r / d theta_j> for every
/// slot j. Both batches are consumed (evolved back to the circuit input).
std::vector<double> adjoint_vjp(StateBatch state, StateBatch cotangent, const Circuit &circuit,
                                std::span<const double> params);

/// Gradient of sum_{r,k} upstream[r * K + k] <psi_r|O_k|psi_r> with respect to the
/// circuit parameters, where psi_r is row r of `input` after `circuit`.
std::vector<double> adjoint_gradient(const StateBatch &input, const Circuit &circuit,
                                     std::span<const double> params,
                                     std::span<const Observable> observables,
                                     std::span<const double> upstream);

/// Columns of the circuit unitary: row c of the result is U|c>.
StateBatch unitary_columns(const Circuit &circuit, std::span<const double> params);

/// Row r of the result is U x_r, with U given in the column form produced by
/// `unitary_columns`.
StateBatch apply_unitary_columns(const StateBatch &columns, const StateBatch &input);

/// Row r of the result is U^dagger y_r for the same column form of U.
StateBatch apply_unitary_columns_adjoint(const StateBatch &columns, const StateBatch &input);

/// Cotangent transport for `apply_unitary_columns`: row c of the result is
/// sum_r conj(x_r[c]) lambda_r. Feeding it to adjoint_vjp together with the
/// columns yields the parameter gradient for the whole input batch.
StateBatch pullback_to_columns(const StateBatch &input, const StateBatch &cotangent);

} // namespace pqnet::sim
