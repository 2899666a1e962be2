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

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "density_matrix.hpp"
#include "pqnet/error.hpp"
#include "pqnet/noise.hpp"
#include "pqnet/sim/simulator.hpp"
#include "test_util.hpp"

using namespace pqnet;
using namespace pqnet::sim;
using pqnet::test::basis;
using pqnet::test::random_state;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kTrajectories = 10000;

oracle::Mat to_rho(const Statevector &psi) {
    return oracle::pure(std::vector<Complex>(psi.amplitudes().begin(), psi.amplitudes().end()));
}

char name(Pauli p) { return to_char(p); }

/// Mean and standard error of <P_q> over the rows of `batch`.
std::pair<double, double> trajectory_mean(const StateBatch &batch, Pauli p, std::size_t q) {
    const std::vector<double> v = pauli_expectation(batch, p, q);
    double m = 0.0;
    for (double x : v) {
        m += x;
    }
    m /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - m) * (x - m);
    }
    const double se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    return {m, se};
}

/// Every single-qubit Pauli expectation of the trajectory ensemble agrees
/// with the oracle within 3 standard errors (plus a floor for zero variance).
void expect_matches_oracle(const StateBatch &batch, const oracle::Mat &rho) {
    const std::size_t n = batch.qubit_count();
    for (std::size_t q = 0; q < n; ++q) {
        for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
            const auto [mean, se] = trajectory_mean(batch, p, q);
            const double want = oracle::expectation(rho, oracle::embed(oracle::pauli(name(p)), q, n));
            EXPECT_NEAR(mean, want, 3.0 * se + 1e-12) << name(p) << " on qubit " << q;
        }
    }
}

StateBatch copies(const Statevector &psi, std::size_t count) {
    return StateBatch::from_states(std::vector<Statevector>(count, psi));
}

} // namespace

TEST(NoiseConfig, Validation) {
    noise::NoiseConfig c;
    EXPECT_NO_THROW(c.validate());
    c.data_depol_p = 1.5;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.gate_2q_p = -0.1;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.data_rx_theta = std::nan("");
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = {};
    c.gate_trajectories = 0;
    EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(DataRx, Examples) {
    Rng rng(1);
    const Statevector psi = random_state(3, rng);
    StateBatch same = copies(psi, 1);
    noise::apply_data_rx(same, 0.0);
    EXPECT_EQ(same.state(0), psi);

    StateBatch full = copies(psi, 1);
    noise::apply_data_rx(full, 2 * kPi);
    for (std::size_t q = 0; q < 3; ++q) {
        for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
            EXPECT_NEAR(pauli_expectation(full.row(0), 3, p, q),
                        pauli_expectation(psi.amplitudes(), 3, p, q), 1e-12);
        }
    }

    StateBatch zero = copies(basis(1, 0), 1);
    noise::apply_data_rx(zero, kPi / 2);
    EXPECT_NEAR(pauli_expectation(zero.row(0), 1, Pauli::Z, 0), 0.0, 1e-15);
}

TEST(DataDepolarizing, ZeroProbabilityIsIdentityAndDrawsNothing) {
    Rng rng(2);
    const Statevector psi = random_state(2, rng);
    StateBatch b = copies(psi, 4);
    Rng a(5), ref(5);
    noise::apply_data_depolarizing(b, 0.0, a);
    EXPECT_EQ(b, copies(psi, 4));
    EXPECT_EQ(a.next_u64(), ref.next_u64());
}

TEST(DataDepolarizing, ThreeQuartersFullyMixesOneQubit) {
    StateBatch b = copies(basis(1, 0), kTrajectories);
    Rng rng(3);
    noise::apply_data_depolarizing(b, 0.75, rng);
    const auto [mean, se] = trajectory_mean(b, Pauli::Z, 0);
    EXPECT_NEAR(mean, 0.0, 3.0 * se);
}

TEST(DataDepolarizing, MatchesDensityMatrixOracle) {
    Rng rng(4);
    const Statevector psi = random_state(2, rng);
    const double p = 0.3;
    StateBatch b = copies(psi, kTrajectories);
    noise::apply_data_depolarizing(b, p, rng);
    oracle::Mat rho = to_rho(psi);
    rho = oracle::depolarize_1q(rho, p, 0, 2);
    rho = oracle::depolarize_1q(rho, p, 1, 2);
    expect_matches_oracle(b, rho);
}

TEST(GateNoise, ZeroNoiseEqualsRunCircuit) {
    Rng rng(5);
    const Circuit c = test::random_circuit(3, 20, rng);
    std::vector<double> params(c.param_count(), 0.4);
    const Statevector psi = random_state(3, rng);
    StateBatch b = copies(psi, 2);
    noise::NoiseConfig cfg;
    const noise::GateNoiseRecord rec = noise::apply_kernel_gate_noise(b, c, params, cfg, rng);
    EXPECT_TRUE(rec.codes.empty());
    StateBatch ref = copies(psi, 2);
    run_circuit(ref, c, params);
    EXPECT_EQ(b, ref);
}

TEST(GateNoise, FullDepolarizingOnCnotMatchesOracle) {
    const Circuit c(2, {gates::cnot(0, 1)});
    noise::NoiseConfig cfg;
    cfg.gate_2q_p = 1.0;
    StateBatch b = copies(basis(2, 0), kTrajectories);
    Rng rng(6);
    noise::apply_kernel_gate_noise(b, c, {}, cfg, rng);
    const oracle::Mat rho = oracle::depolarize_2q(to_rho(basis(2, 0)), 1.0, 0, 1, 2);
    expect_matches_oracle(b, rho);
    // Only the identity term is removed at p = 1, so <Z> is -1/15 rather than 0.
    for (std::size_t q = 0; q < 2; ++q) {
        const auto [mean, se] = trajectory_mean(b, Pauli::Z, q);
        EXPECT_NEAR(mean, -1.0 / 15.0, 3.0 * se);
    }
}

TEST(GateNoise, KernelWithBothChannelsMatchesOracle) {
    const double t0 = 0.4, t1 = 1.1, t2 = 0.3, over = 0.25;
    const Circuit c(2, {gates::ry(0, ParamSlot{0}), gates::crx(0, 1, ParamSlot{1}),
                        gates::rz(1, ParamSlot{2}), gates::cnot(1, 0)});
    const std::vector<double> params = {t0, t1, t2};
    noise::NoiseConfig cfg;
    cfg.gate_2q_p = 0.2;
    cfg.gate_1q_theta = over;
    Rng rng(7);
    const Statevector psi = random_state(2, rng);
    StateBatch b = copies(psi, kTrajectories);
    noise::apply_kernel_gate_noise(b, c, params, cfg, rng);

    oracle::Mat rho = to_rho(psi);
    rho = oracle::evolve(rho, oracle::embed(oracle::rotation('Y', t0), 0, 2));
    rho = oracle::evolve(rho, oracle::controlled(oracle::rotation('X', t1), 0, 1, 2));
    rho = oracle::depolarize_2q(rho, cfg.gate_2q_p, 0, 1, 2);
    rho = oracle::evolve(rho, oracle::embed(oracle::rotation('Z', t2), 1, 2));
    rho = oracle::evolve(rho, oracle::controlled(oracle::pauli('X'), 1, 0, 2));
    rho = oracle::depolarize_2q(rho, cfg.gate_2q_p, 1, 0, 2);
    for (std::size_t q = 0; q < 2; ++q) {
        rho = oracle::evolve(rho, oracle::embed(oracle::rotation('X', over), q, 2));
    }
    expect_matches_oracle(b, rho);
}

TEST(GateNoise, OverrotationAppendsFixedRx) {
    const Circuit c(2, {gates::rx(0, ParamSlot{0})});
    EXPECT_EQ(noise::with_overrotation(c, 0.0), c);
    const Circuit o = noise::with_overrotation(c, 0.2);
    EXPECT_EQ(o.size(), 3u);
    EXPECT_EQ(o.param_count(), 1u);
    EXPECT_EQ(o[1].fixed_angle(), 0.2);
}

TEST(GateNoise, NoisyAdjointMatchesFiniteDifferences) {
    Rng setup(8);
    const Circuit c = test::random_circuit(3, 18, setup);
    ASSERT_GT(c.two_qubit_count(), 0u);
    std::vector<double> params(c.param_count());
    for (double &p : params) {
        p = setup.uniform() * 2.0 - 1.0;
    }
    noise::NoiseConfig cfg;
    cfg.gate_2q_p = 0.5;
    cfg.gate_1q_theta = 0.1;
    const StateBatch in = StateBatch::from_states(
        std::vector{random_state(3, setup), random_state(3, setup), random_state(3, setup)});
    // Same rng seed in every evaluation reproduces the same error record.
    const auto run = [&](std::span<const double> theta, noise::GateNoiseRecord *rec) {
        StateBatch b = in;
        Rng rng(99);
        auto r = noise::apply_kernel_gate_noise(b, c, theta, cfg, rng);
        if (rec) {
            *rec = r;
        }
        return b;
    };
    const auto objective = [&](std::span<const double> theta) {
        const StateBatch b = run(theta, nullptr);
        double f = 0.0;
        for (std::size_t r = 0; r < b.batch_size(); ++r) {
            f += pauli_expectation(b.row(r), 3, Pauli::Z, r % 3) +
                 0.5 * pauli_expectation(b.row(r), 3, Pauli::X, (r + 1) % 3);
        }
        return f;
    };
    noise::GateNoiseRecord rec;
    const StateBatch out = run(params, &rec);
    ASSERT_FALSE(rec.codes.empty());
    // lambda_r = dF/d<psi_r| = sum_k w_k P_k psi_r.
    StateBatch lam(out.batch_size(), 3);
    for (std::size_t r = 0; r < out.batch_size(); ++r) {
        std::vector<Complex> z(out.row(r).begin(), out.row(r).end());
        std::vector<Complex> x = z;
        apply_pauli(z, 3, Pauli::Z, r % 3);
        apply_pauli(x, 3, Pauli::X, (r + 1) % 3);
        for (std::size_t i = 0; i < z.size(); ++i) {
            lam.row(r)[i] = z[i] + 0.5 * x[i];
        }
    }
    const auto g = noise::noisy_adjoint_vjp(out, lam, c, params, cfg, rec);
    for (std::size_t j = 0; j < params.size(); ++j) {
        std::vector<double> p = params, m = params;
        p[j] += 1e-5;
        m[j] -= 1e-5;
        const double fd = (objective(p) - objective(m)) / 2e-5;
        EXPECT_NEAR(g[j], fd, 1e-4 * std::max(1.0, std::abs(fd))) << "slot " << j;
    }
}
