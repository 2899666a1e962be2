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


#include "pqnet/noise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pqnet/error.hpp"
#include "pqnet/sim/simulator.hpp"

namespace pqnet::noise {

using sim::Complex;
using sim::Pauli;

namespace {

void check_probability(double p, const char *name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument(std::string("NoiseConfig: ") + name + " = " + std::to_string(p) +
                              " is not a probability");
    }
}

void check_finite(double v, const char *name) {
    if (!std::isfinite(v)) {
        throw InvalidArgument(std::string("NoiseConfig: ") + name + " is not finite");
    }
}

constexpr std::array<Pauli, 3> kPaulis = {Pauli::X, Pauli::Y, Pauli::Z};

void apply_factor(std::span<Complex> row, std::size_t nq, std::uint32_t qubit, int factor) {
    if (factor != 0) {
        sim::apply_pauli(row, nq, kPaulis[static_cast<std::size_t>(factor - 1)], qubit);
    }
}

} // namespace

void NoiseConfig::validate() const {
    check_finite(data_rx_theta, "data_rx_theta");
    check_finite(gate_1q_theta, "gate_1q_theta");
    check_probability(data_depol_p, "data_depol_p");
    check_probability(gate_2q_p, "gate_2q_p");
    if (gate_trajectories == 0) {
        throw InvalidArgument("NoiseConfig: gate_trajectories must be at least 1");
    }
}

void apply_data_rx(sim::StateBatch &batch, double theta) {
    if (theta == 0.0) {
        return;
    }
    for (std::uint32_t q = 0; q < batch.qubit_count(); ++q) {
        sim::apply_gate(batch, sim::gates::rx(q, theta), {});
    }
}

void apply_data_depolarizing(sim::StateBatch &batch, double p, Rng &rng) {
    check_probability(p, "data_depol_p");
    if (p == 0.0) {
        return;
    }
    const std::size_t nq = batch.qubit_count();
    for (std::size_t r = 0; r < batch.batch_size(); ++r) {
        for (std::size_t q = 0; q < nq; ++q) {
            const double u = rng.uniform();
            if (u < p) {
                const auto which = std::min<std::size_t>(2, static_cast<std::size_t>(u / p * 3.0));
                sim::apply_pauli(batch.row(r), nq, kPaulis[which], q);
            }
        }
    }
}

void apply_pauli_pair(std::span<Complex> row, std::size_t qubit_count, std::uint32_t first,
                      std::uint32_t second, PairCode code) {
    if (code == 0 || code > 15) {
        throw InvalidArgument("apply_pauli_pair: code " + std::to_string(code) +
                              " is not a non-identity pair");
    }
    apply_factor(row, qubit_count, first, code / 4);
    apply_factor(row, qubit_count, second, code % 4);
}

sim::Circuit with_overrotation(const sim::Circuit &kernel, double theta) {
    if (theta == 0.0) {
        return kernel;
    }
    std::vector<sim::GateOp> tail;
    for (std::uint32_t q = 0; q < kernel.qubit_count(); ++q) {
        tail.push_back(sim::gates::rx(q, theta));
    }
    return kernel.appended(tail);
}

GateNoiseRecord draw_gate_noise(std::size_t rows, std::size_t sites, double p, Rng &rng) {
    check_probability(p, "gate_2q_p");
    GateNoiseRecord record;
    if (p == 0.0) {
        return record;
    }
    record.sites = sites;
    record.codes.assign(rows * sites, 0);
    for (auto &code : record.codes) {
        const double u = rng.uniform();
        if (u < p) {
            code = static_cast<PairCode>(1 + std::min<std::size_t>(14, static_cast<std::size_t>(u / p * 15.0)));
        }
    }
    return record;
}

GateNoiseRecord apply_kernel_gate_noise(sim::StateBatch &batch, const sim::Circuit &kernel,
                                        std::span<const double> params, const NoiseConfig &cfg,
                                        Rng &rng) {
    cfg.validate();
    const sim::Circuit circuit = with_overrotation(kernel, cfg.gate_1q_theta);
    GateNoiseRecord record;
    if (cfg.gate_2q_p == 0.0) {
        sim::run_circuit(batch, circuit, params);
        return record;
    }

    const std::size_t rows = batch.batch_size();
    record = draw_gate_noise(rows, circuit.two_qubit_count(), cfg.gate_2q_p, rng);

    if (params.size() != circuit.param_count()) {
        throw InvalidArgument("apply_kernel_gate_noise: parameter count mismatch");
    }
    const std::size_t nq = batch.qubit_count();
    std::size_t site = 0;
    for (const sim::GateOp &op : circuit.ops()) {
        sim::apply_gate(batch, op, params);
        if (op.arity() != 2) {
            continue;
        }
        for (std::size_t r = 0; r < rows; ++r) {
            if (const PairCode c = record.codes[r * record.sites + site]) {
                apply_pauli_pair(batch.row(r), nq, op.qubits()[0], op.qubits()[1], c);
            }
        }
        ++site;
    }
    return record;
}

std::vector<double> noisy_adjoint_vjp(sim::StateBatch state, sim::StateBatch cotangent,
                                      const sim::Circuit &kernel, std::span<const double> params,
                                      const NoiseConfig &cfg, const GateNoiseRecord &record) {
    const sim::Circuit circuit = with_overrotation(kernel, cfg.gate_1q_theta);
    if (record.codes.empty()) {
        return sim::adjoint_vjp(std::move(state), std::move(cotangent), circuit, params);
    }
    if (record.sites != circuit.two_qubit_count() ||
        record.codes.size() != record.sites * state.batch_size()) {
        throw InvalidArgument("noisy_adjoint_vjp: noise record does not match the batch");
    }
    const std::size_t nq = state.qubit_count();
    const std::size_t rows = state.batch_size();
    std::vector<double> grad(circuit.param_count(), 0.0);
    const auto ops = circuit.ops();
    std::size_t site = record.sites;
    for (std::size_t k = ops.size(); k-- > 0;) {
        const sim::GateOp &op = ops[k];
        if (op.arity() == 2) {
            --site;
            for (std::size_t r = 0; r < rows; ++r) {
                if (const PairCode c = record.codes[r * record.sites + site]) {
                    apply_pauli_pair(state.row(r), nq, op.qubits()[0], op.qubits()[1], c);
                    apply_pauli_pair(cotangent.row(r), nq, op.qubits()[0], op.qubits()[1], c);
                }
            }
        }
        if (auto slot = op.param_slot()) {
            grad[slot->index] += sim::generator_overlap(cotangent, state, op);
        }
        if (k > 0) {
            sim::apply_gate_dagger(state, op, params);
            sim::apply_gate_dagger(cotangent, op, params);
        }
    }
    return grad;
}

} // namespace pqnet::noise
