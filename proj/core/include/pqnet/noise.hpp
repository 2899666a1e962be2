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
#include <span>
#include <vector>

#include "pqnet/rng.hpp"
#include "pqnet/sim/circuit.hpp"
#include "pqnet/sim/state.hpp"

namespace pqnet::noise {

/// Noise levels for one experiment. Angles in radians, probabilities in [0, 1].
struct NoiseConfig {
    double data_rx_theta = 0.0; ///< coherent R_x on every qubit of every sample
    double data_depol_p = 0.0;  ///< single-qubit depolarizing on every sample qubit
    double gate_1q_theta = 0.0; ///< R_x over-rotation after the kernel, every qubit
    double gate_2q_p = 0.0;     ///< two-qubit depolarizing after every two-qubit op
    /// Independent gate-noise trajectories averaged into each feature value.
    std::uint32_t gate_trajectories = 1;
    std::uint64_t rng_seed = 0;

    /// Throws InvalidArgument when a probability leaves [0, 1] or a value is not finite.
    void validate() const;
    bool has_data_noise() const { return data_rx_theta != 0.0 || data_depol_p != 0.0; }
    bool has_gate_noise() const { return gate_1q_theta != 0.0 || gate_2q_p != 0.0; }
};

/// R_x(theta) on every qubit of every row. Deterministic.
void apply_data_rx(sim::StateBatch &batch, double theta);

/// Trajectory unraveling of the single-qubit depolarizing channel
/// (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z): for each row, then each qubit
/// in order, one uniform draw u; u < p selects Pauli floor(3u/p) in (X, Y, Z).
/// p == 0 consumes no draws.
void apply_data_depolarizing(sim::StateBatch &batch, double p, Rng &rng);

/// Index 1..15 of a non-identity two-qubit Pauli pair P (x) Q, encoded as
/// 4 * P + Q with I=0, X=1, Y=2, Z=3. 0 means "no error".
using PairCode = std::uint8_t;

/// Applies pair `code` to qubits (first, second) of one row.
void apply_pauli_pair(std::span<sim::Complex> row, std::size_t qubit_count, std::uint32_t first,
                      std::uint32_t second, PairCode code);

/// The kernel with R_x(theta) appended on every qubit (fixed angles, no new
/// slots). theta == 0 returns the kernel unchanged.
sim::Circuit with_overrotation(const sim::Circuit &kernel, double theta);

/// Errors sampled for one noisy kernel execution: codes[row * sites + s] for
/// the s-th two-qubit op of the executed circuit.
struct GateNoiseRecord {
    std::size_t sites = 0;
    std::vector<PairCode> codes;
};

/// The draws apply_kernel_gate_noise makes: one uniform per (row, site),
/// row-major; u < p selects code 1 + min(14, floor(15 u / p)). p = 0 draws
/// nothing and returns an empty record.
GateNoiseRecord draw_gate_noise(std::size_t rows, std::size_t sites, double p, Rng &rng);

/// Runs `kernel` with gate noise interleaved. After every two-qubit op, each
/// row independently receives a uniformly chosen non-identity Pauli pair with
/// probability gate_2q_p (one draw per row and site, drawn row-major then in
/// circuit order before execution); after the circuit, R_x(gate_1q_theta) hits
/// every qubit. Returns the sampled record for use by the backward pass.
GateNoiseRecord apply_kernel_gate_noise(sim::StateBatch &batch, const sim::Circuit &kernel,
                                        std::span<const double> params, const NoiseConfig &cfg,
                                        Rng &rng);

/// adjoint_vjp through the same noisy execution: `state` holds the outputs of
/// apply_kernel_gate_noise, `record` its sampled errors.
std::vector<double> noisy_adjoint_vjp(sim::StateBatch state, sim::StateBatch cotangent,
                                      const sim::Circuit &kernel, std::span<const double> params,
                                      const NoiseConfig &cfg, const GateNoiseRecord &record);

} // namespace pqnet::noise
