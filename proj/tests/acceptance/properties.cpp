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

#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "density_matrix.hpp"
#include "pqnet/model/checkpoint.hpp"
#include "pqnet/model/train.hpp"
#include "pqnet/noise.hpp"
#include "pqnet/sim/simulator.hpp"
#include "test_util.hpp"

namespace pqnet::acceptance {

namespace {

using sim::Complex;
using sim::Pauli;
using sim::StateBatch;
using sim::Statevector;

constexpr double kPi = std::numbers::pi;

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

std::vector<double> random_params(std::size_t n, Rng &rng) {
    std::vector<double> p(n);
    for (double &v : p) {
        v = 2 * kPi * rng.uniform() - kPi;
    }
    return p;
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

PropertyResult norm_and_unitarity() {
    Rng rng(101);
    double worst_norm = 0.0, worst_inverse = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.below(5);
        const sim::Circuit c = test::random_circuit(n, 40, rng);
        const auto params = random_params(c.param_count(), rng);
        const Statevector psi = test::random_state(n, rng);
        StateBatch b = StateBatch::from_states(std::vector{psi});
        sim::run_circuit(b, c, params);
        worst_norm = std::max(worst_norm, std::abs(b.state(0).norm() - 1.0));
        for (std::size_t k = c.size(); k-- > 0;) {
            sim::apply_gate_dagger(b, c[k], params);
        }
        worst_inverse = std::max(worst_inverse, max_abs_diff(b.row(0), psi.amplitudes()));
    }
    return {"norm and unitarity", worst_norm < 1e-10 && worst_inverse < 1e-10,
            "norm drift " + fmt(worst_norm) + ", U^dag U error " + fmt(worst_inverse)};
}

PropertyResult batch_equivalence() {
    Rng rng(102);
    const sim::Circuit c = test::random_circuit(4, 40, rng);
    const auto params = random_params(c.param_count(), rng);
    std::vector<Statevector> states;
    for (int i = 0; i < 16; ++i) {
        states.push_back(test::random_state(4, rng));
    }
    StateBatch batch = StateBatch::from_states(states);
    sim::run_circuit(batch, c, params);
    double worst = 0.0;
    for (std::size_t r = 0; r < states.size(); ++r) {
        worst = std::max(worst, max_abs_diff(batch.row(r), sim::run_circuit(states[r], c, params).amplitudes()));
    }
    return {"batch equals loop", worst < 1e-12, "max deviation " + fmt(worst)};
}

PropertyResult adjoint_gradients() {
    Rng rng(103);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.below(4);
        const sim::Circuit c = test::random_circuit(n, 12, rng);
        if (c.param_count() == 0) {
            continue;
        }
        const auto params = random_params(c.param_count(), rng);
        const StateBatch in = StateBatch::from_states(std::vector{test::random_state(n, rng)});
        std::vector<sim::Observable> obs;
        std::vector<double> up;
        for (std::size_t q = 0; q < n; ++q) {
            for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
                obs.push_back({p, q});
                up.push_back(rng.uniform() - 0.5);
            }
        }
        const auto f = [&](std::span<const double> theta) {
            StateBatch b = in;
            sim::run_circuit(b, c, theta);
            double v = 0.0;
            for (std::size_t k = 0; k < obs.size(); ++k) {
                v += up[k] * sim::pauli_expectation(b.row(0), n, obs[k].axis, obs[k].qubit);
            }
            return v;
        };
        const auto g = sim::adjoint_gradient(in, c, params, obs, up);
        for (std::size_t j = 0; j < params.size(); ++j) {
            auto p = params, m = params;
            p[j] += 1e-5;
            m[j] -= 1e-5;
            const double fd = (f(p) - f(m)) / 2e-5;
            worst = std::max(worst, std::abs(g[j] - fd) / std::max(1.0, std::abs(fd)));
        }
    }
    return {"adjoint vs finite differences", worst < 1e-4, "max relative error " + fmt(worst)};
}

PropertyResult noise_vs_oracle() {
    // Two-qubit kernel with both channels, 10^4 trajectories, every Pauli
    // expectation within 3 standard errors of the density-matrix result.
    const sim::Circuit c(2, {sim::gates::ry(0, sim::ParamSlot{0}), sim::gates::crx(0, 1, sim::ParamSlot{1}),
                             sim::gates::cnot(1, 0)});
    const std::vector<double> params = {0.4, 1.1};
    noise::NoiseConfig cfg;
    cfg.gate_2q_p = 0.2;
    cfg.gate_1q_theta = 0.25;
    Rng rng(104);
    const Statevector psi = test::random_state(2, rng);
    StateBatch b = StateBatch::from_states(std::vector<Statevector>(10000, psi));
    noise::apply_kernel_gate_noise(b, c, params, cfg, rng);
    noise::apply_data_depolarizing(b, 0.1, rng);

    oracle::Mat rho = oracle::pure(std::vector<Complex>(psi.amplitudes().begin(), psi.amplitudes().end()));
    rho = oracle::evolve(rho, oracle::embed(oracle::rotation('Y', 0.4), 0, 2));
    rho = oracle::evolve(rho, oracle::controlled(oracle::rotation('X', 1.1), 0, 1, 2));
    rho = oracle::depolarize_2q(rho, 0.2, 0, 1, 2);
    rho = oracle::evolve(rho, oracle::controlled(oracle::pauli('X'), 1, 0, 2));
    rho = oracle::depolarize_2q(rho, 0.2, 1, 0, 2);
    for (std::size_t q = 0; q < 2; ++q) {
        rho = oracle::evolve(rho, oracle::embed(oracle::rotation('X', 0.25), q, 2));
    }
    for (std::size_t q = 0; q < 2; ++q) {
        rho = oracle::depolarize_1q(rho, 0.1, q, 2);
    }
    double worst_z = 0.0;
    for (std::size_t q = 0; q < 2; ++q) {
        for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
            const auto v = sim::pauli_expectation(b, p, q);
            double m = 0.0, ss = 0.0;
            for (double x : v) {
                m += x;
            }
            m /= static_cast<double>(v.size());
            for (double x : v) {
                ss += (x - m) * (x - m);
            }
            const double se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
            const double want = oracle::expectation(rho, oracle::embed(oracle::pauli(sim::to_char(p)), q, 2));
            worst_z = std::max(worst_z, std::abs(m - want) / std::max(se, 1e-12));
        }
    }
    return {"noise trajectories vs density matrix", worst_z < 3.0, "worst deviation " + fmt(worst_z) + " SE"};
}

PropertyResult mub_and_tomography() {
    const double s = 1.0 / std::sqrt(2.0);
    const std::vector<std::vector<std::array<Complex, 2>>> bases = {
        {{1.0, 0.0}, {0.0, 1.0}}, {{s, s}, {s, -s}}, {{s, Complex(0, s)}, {s, Complex(0, -s)}}};
    double worst_overlap = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t bb = a + 1; bb < 3; ++bb) {
            for (const auto &e : bases[a]) {
                for (const auto &f : bases[bb]) {
                    const Complex ov = std::conj(e[0]) * f[0] + std::conj(e[1]) * f[1];
                    worst_overlap = std::max(worst_overlap, std::abs(std::norm(ov) - 0.5));
                }
            }
        }
    }
    Rng rng(105);
    double worst_rho = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Statevector psi = test::random_state(1, rng);
        const auto a = psi.amplitudes();
        oracle::Mat rebuilt = oracle::identity(2);
        for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
            rebuilt += sim::pauli_expectation(a, 1, p, 0) * oracle::pauli(sim::to_char(p));
        }
        rebuilt /= 2.0;
        worst_rho = std::max(worst_rho, (rebuilt - oracle::pure({a[0], a[1]})).cwiseAbs().maxCoeff());
    }
    return {"MUB overlap and state reconstruction", worst_overlap < 1e-15 && worst_rho < 1e-10,
            "overlap error " + fmt(worst_overlap) + ", rho error " + fmt(worst_rho)};
}

PropertyResult success_floor(const datagen::Dataset &ds) {
    double lowest = 1.0;
    for (const auto &sample : ds.samples) {
        lowest = std::min(lowest, datagen::success_probability(sample.state));
    }
    return {"success probability floor", !ds.samples.empty() && lowest >= datagen::kSuccessFloor,
            "lowest " + fmt(lowest) + " over " + std::to_string(ds.size()) + " samples"};
}

PropertyResult round_trips(const datagen::Dataset &ds) {
    const auto bytes = datagen::encode_dataset(ds);
    const bool data_ok = datagen::encode_dataset(datagen::decode_dataset(bytes)) == bytes;
    Rng rng(106);
    const model::ModelState m = model::ModelState::initialize(model::default_kernel(), rng);
    const auto ck = model::encode_checkpoint(m);
    const model::ModelState back = model::decode_checkpoint(ck);
    const bool ckpt_ok = back == m && model::encode_checkpoint(back) == ck;
    return {"dataset and checkpoint round trip", data_ok && ckpt_ok,
            std::string("dataset ") + (data_ok ? "ok" : "mismatch") + ", checkpoint " + (ckpt_ok ? "ok" : "mismatch")};
}

PropertyResult determinism() {
    const auto fams = datagen::standard_families();
    const datagen::Dataset a = datagen::generate_dataset(fams, 20, 7);
    const bool data_ok = datagen::encode_dataset(a) == datagen::encode_dataset(datagen::generate_dataset(fams, 20, 7));
    model::TrainConfig cfg;
    cfg.epochs = 2;
    cfg.noise.gate_2q_p = 0.1;
    cfg.noise.data_depol_p = 0.05;
    cfg.measure.shots = 256;
    const auto r1 = model::train(a, cfg, 3);
    const auto r2 = model::train(a, cfg, 3);
    const bool train_ok = model::encode_checkpoint(r1.model) == model::encode_checkpoint(r2.model);
    return {"seed determinism", data_ok && train_ok,
            std::string("generation ") + (data_ok ? "identical" : "differs") + ", training " +
                (train_ok ? "identical" : "differs")};
}

} // namespace

std::vector<PropertyResult> run_property_suite(const datagen::Dataset &ds) {
    return {norm_and_unitarity(), batch_equivalence(), adjoint_gradients(), noise_vs_oracle(),
            mub_and_tomography(),  success_floor(ds),    round_trips(ds),     determinism()};
}

} // namespace pqnet::acceptance
