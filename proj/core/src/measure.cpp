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


#include "pqnet/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pqnet/error.hpp"
#include "pqnet/sim/simulator.hpp"

namespace pqnet::measure {

using sim::Complex;
using sim::Pauli;

std::string_view to_string(Strategy s) {
    switch (s) {
    case Strategy::PauliZ:
        return "pauli-z";
    case Strategy::SMub:
        return "s-mub";
    case Strategy::AMub:
        return "a-mub";
    }
    return "unknown";
}

std::optional<Strategy> strategy_from_string(std::string_view name) {
    for (Strategy s : {Strategy::PauliZ, Strategy::SMub, Strategy::AMub}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

void MeasureConfig::validate() const {
    if (shots && *shots == 0) {
        throw InvalidArgument("MeasureConfig: shots must be positive");
    }
    if (!(p_measure >= 0.0 && p_measure <= 1.0)) {
        throw InvalidArgument("MeasureConfig: p_measure = " + std::to_string(p_measure) +
                              " is not a probability");
    }
}

double estimate_expectation(double mu, ShotCount shots, Rng &rng) {
    if (shots && *shots == 0) {
        throw InvalidArgument("estimate_expectation: zero shots");
    }
    if (!(std::abs(mu) <= 1.0 + 1e-9)) {
        throw InvalidArgument("estimate_expectation: |mu| > 1 (mu = " + std::to_string(mu) + ")");
    }
    mu = std::clamp(mu, -1.0, 1.0);
    if (!shots) {
        return mu;
    }
    const double sd = std::sqrt((1.0 - mu * mu) / static_cast<double>(*shots));
    return std::clamp(mu + sd * rng.normal(), -1.0, 1.0);
}

double apply_readout_noise(double mu, double p_measure, ShotCount shots, Rng &rng) {
    if (!(p_measure >= 0.0 && p_measure <= 1.0)) {
        throw InvalidArgument("apply_readout_noise: p_measure is not a probability");
    }
    return estimate_expectation((1.0 - 2.0 * p_measure) * mu, shots, rng);
}

std::vector<Pauli> active_axes(const MeasureConfig &cfg, const MubSchedule &schedule,
                               Phase phase) {
    switch (cfg.strategy) {
    case Strategy::PauliZ:
        return {Pauli::Z};
    case Strategy::SMub:
        return {Pauli::X, Pauli::Y, Pauli::Z};
    case Strategy::AMub:
        if (phase == Phase::Training) {
            return {schedule.axis()};
        }
        return {Pauli::X, Pauli::Y, Pauli::Z};
    }
    return {Pauli::Z};
}

Features features_from_expectations(std::span<const double> raw, std::size_t rows,
                                    std::size_t qubits, std::vector<Pauli> axes,
                                    const MeasureConfig &cfg, Rng &rng) {
    cfg.validate();
    const std::size_t na = axes.size();
    if (na == 0 || raw.size() != rows * qubits * na) {
        throw InvalidArgument("features_from_expectations: raw must be rows x qubits x axes");
    }
    Features f;
    f.rows = rows;
    f.qubits = qubits;
    f.axes = std::move(axes);

    const bool noiseless = !cfg.shots && cfg.p_measure == 0.0;
    const double inv = 1.0 / static_cast<double>(na);
    f.values.resize(rows * qubits);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        double acc = 0.0;
        for (std::size_t a = 0; a < na; ++a) {
            const double mu = raw[i * na + a];
            acc += noiseless ? mu : apply_readout_noise(mu, cfg.p_measure, cfg.shots, rng);
        }
        f.values[i] = acc * inv;
    }
    return f;
}

Features measure_features(const sim::StateBatch &batch, const MeasureConfig &cfg,
                          const MubSchedule &schedule, Phase phase, Rng &rng) {
    auto axes = active_axes(cfg, schedule, phase);
    std::vector<double> raw(batch.batch_size() * batch.qubit_count() * axes.size());
    sim::pauli_expectations(batch, axes, raw);
    return features_from_expectations(raw, batch.batch_size(), batch.qubit_count(),
                                      std::move(axes), cfg, rng);
}

sim::StateBatch feature_cotangent(const sim::StateBatch &states, std::span<const Pauli> axes,
                                  std::span<const double> upstream) {
    const std::size_t rows = states.batch_size();
    const std::size_t nq = states.qubit_count();
    const std::size_t dim = states.dim();
    if (upstream.size() != rows * nq) {
        throw InvalidArgument("feature_cotangent: upstream must be rows x qubits");
    }
    if (axes.empty()) {
        throw InvalidArgument("feature_cotangent: no measurement axes");
    }
    const double inv = 1.0 / static_cast<double>(axes.size());
    sim::StateBatch out(nq, std::vector<Complex>(states.data().size()));
    std::vector<Complex> scratch(dim);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto psi = states.row(r);
        auto lam = out.row(r);
        for (std::size_t q = 0; q < nq; ++q) {
            const double w = upstream[r * nq + q] * inv;
            if (w == 0.0) {
                continue;
            }
            for (Pauli axis : axes) {
                std::copy(psi.begin(), psi.end(), scratch.begin());
                sim::apply_pauli(scratch, nq, axis, q);
                for (std::size_t i = 0; i < dim; ++i) {
                    lam[i] += w * scratch[i];
                }
            }
        }
    }
    return out;
}

} // namespace pqnet::measure
