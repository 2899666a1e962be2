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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pqnet/rng.hpp"
#include "pqnet/sim/gate.hpp"
#include "pqnet/sim/state.hpp"

namespace pqnet::measure {

enum class Strategy : std::uint8_t {
    PauliZ, ///< computational basis only
    SMub,   ///< mean of X, Y and Z expectations every step
    AMub,   ///< one basis per training step, cycling Z, X, Y
};

std::string_view to_string(Strategy s); // "pauli-z", "s-mub", "a-mub"
std::optional<Strategy> strategy_from_string(std::string_view name);

/// Shot budget per expectation value; std::nullopt is the infinite-shot limit.
using ShotCount = std::optional<std::uint64_t>;
inline constexpr ShotCount kAnalytic = std::nullopt;

struct MeasureConfig {
    Strategy strategy = Strategy::AMub;
    ShotCount shots = kAnalytic;
    double p_measure = 0.0; ///< symmetric readout bit-flip probability
    std::uint64_t rng_seed = 0;

    /// Throws InvalidArgument for shots == 0 or p_measure outside [0, 1].
    void validate() const;
};

/// Alternating-basis clock for A-MUB. axis() is kOrder[step % 3].
class MubSchedule {
  public:
    static constexpr std::array<sim::Pauli, 3> kOrder = {sim::Pauli::Z, sim::Pauli::X,
                                                        sim::Pauli::Y};

    MubSchedule() = default;
    explicit MubSchedule(std::uint64_t step) : step_(step) {}

    std::uint64_t step() const { return step_; }
    sim::Pauli axis() const { return kOrder[step_ % kOrder.size()]; }
    void advance() { ++step_; }

  private:
    std::uint64_t step_ = 0;
};

enum class Phase : std::uint8_t { Training, Inference };

/// Finite-shot estimate of an expectation value `mu` using the Gaussian
/// approximation N(mu, (1 - mu^2) / S), clamped to [-1, 1]. kAnalytic returns mu.
/// Throws InvalidArgument for shots == 0 or |mu| > 1.
double estimate_expectation(double mu, ShotCount shots, Rng &rng);

/// Symmetric bit-flip readout error on a +-1 observable. Analytic: (1 - 2p) mu.
/// Finite shots: the flips are folded into the sampled estimate, i.e. a draw
/// from N((1 - 2p) mu, (1 - ((1 - 2p) mu)^2) / S), clamped.
double apply_readout_noise(double mu, double p_measure, ShotCount shots, Rng &rng);

/// Bases measured for one feature value under the strategy. Their expectation
/// values (after shot and readout noise) are averaged with equal weight.
std::vector<sim::Pauli> active_axes(const MeasureConfig &cfg, const MubSchedule &schedule,
                                    Phase phase);

/// Per-row, per-qubit feature values: values[r * qubits + q].
struct Features {
    std::size_t rows = 0;
    std::size_t qubits = 0;
    std::vector<double> values;
    std::vector<sim::Pauli> axes;
};

/// Shot and readout noise applied to exact expectations laid out as
/// raw[(row * qubits + q) * axes.size() + a], followed by the mean over axes.
Features features_from_expectations(std::span<const double> raw, std::size_t rows,
                                    std::size_t qubits, std::vector<sim::Pauli> axes,
                                    const MeasureConfig &cfg, Rng &rng);

/// Measures every qubit of every row according to the strategy. Noise draws
/// (finite shots) are consumed row-major, then qubit, then axis.
Features measure_features(const sim::StateBatch &batch, const MeasureConfig &cfg,
                          const MubSchedule &schedule, Phase phase, Rng &rng);

/// Adjoint states for a feature-level cotangent `upstream` (rows x qubits):
/// lambda_r = sum_q upstream[r, q] / |axes| * sum_a P_a(q) psi_r. Shot and
/// readout perturbations are treated as constants (straight-through).
sim::StateBatch feature_cotangent(const sim::StateBatch &states, std::span<const sim::Pauli> axes,
                                  std::span<const double> upstream);

} // namespace pqnet::measure
