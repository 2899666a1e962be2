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


#include "pqnet/sim/simulator.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "pqnet/error.hpp"

namespace pqnet::sim {

namespace {

// Explicit product; std::complex operator* goes through the NaN-checking
// library routine without -ffast-math.
inline Complex cmul(Complex a, Complex b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline Complex cconj_mul(Complex a, Complex b) { // conj(a) * b
    return {a.real() * b.real() + a.imag() * b.imag(), a.real() * b.imag() - a.imag() * b.real()};
}

enum class Shape { General, Diagonal, Flip };

struct Resolved {
    Mat2 m;
    std::size_t target_bit;
    std::size_t control_bit; // 0 when uncontrolled
    Shape shape;
};

std::size_t bit_of(std::size_t qubit, std::size_t qubit_count) {
    return std::size_t{1} << (qubit_count - 1 - qubit);
}

void check_qubits(const GateOp &op, std::size_t qubit_count) {
    for (auto q : op.qubits()) {
        if (q >= qubit_count) {
            throw InvalidArgument(std::string(to_string(op.kind())) + ": qubit " +
                                  std::to_string(q) + " out of range for " +
                                  std::to_string(qubit_count) + " qubits");
        }
    }
}

Resolved resolve(const GateOp &op, std::span<const double> params, std::size_t qubit_count,
                 bool adjoint) {
    check_qubits(op, qubit_count);
    const GateKind k = op.kind();
    Mat2 m = target_matrix(k, is_rotation(k) ? op.angle(params) : 0.0);
    if (adjoint) {
        m = dagger(m);
    }
    Shape shape = Shape::General;
    if (k == GateKind::RZ || k == GateKind::CRZ || k == GateKind::Z) {
        shape = Shape::Diagonal;
    } else if (k == GateKind::X || k == GateKind::CNOT) {
        shape = Shape::Flip;
    }
    return {m, bit_of(op.target(), qubit_count),
            is_controlled(k) ? bit_of(op.control(), qubit_count) : 0, shape};
}

template <Shape S> void apply_kernel(std::span<Complex> a, const Resolved &g) {
    const std::size_t total = a.size();
    const std::size_t tb = g.target_bit;
    const std::size_t cb = g.control_bit;
    const Mat2 &m = g.m;
    for (std::size_t hi = 0; hi < total; hi += 2 * tb) {
        for (std::size_t i0 = hi; i0 < hi + tb; ++i0) {
            if (cb != 0 && (i0 & cb) == 0) {
                continue;
            }
            const std::size_t i1 = i0 + tb;
            if constexpr (S == Shape::Flip) {
                std::swap(a[i0], a[i1]);
            } else if constexpr (S == Shape::Diagonal) {
                a[i0] = cmul(m[0], a[i0]);
                a[i1] = cmul(m[3], a[i1]);
            } else {
                const Complex x0 = a[i0];
                const Complex x1 = a[i1];
                a[i0] = cmul(m[0], x0) + cmul(m[1], x1);
                a[i1] = cmul(m[2], x0) + cmul(m[3], x1);
            }
        }
    }
}

void apply_resolved(std::span<Complex> a, const Resolved &g) {
    switch (g.shape) {
    case Shape::Flip:
        apply_kernel<Shape::Flip>(a, g);
        break;
    case Shape::Diagonal:
        apply_kernel<Shape::Diagonal>(a, g);
        break;
    case Shape::General:
        apply_kernel<Shape::General>(a, g);
        break;
    }
}

void check_params(const Circuit &circuit, std::span<const double> params) {
    if (params.size() != circuit.param_count()) {
        throw InvalidArgument("circuit expects " + std::to_string(circuit.param_count()) +
                              " parameters, got " + std::to_string(params.size()));
    }
}

void check_register(const StateBatch &batch, const Circuit &circuit) {
    if (batch.qubit_count() != circuit.qubit_count()) {
        throw InvalidArgument("circuit acts on " + std::to_string(circuit.qubit_count()) +
                              " qubits, batch has " + std::to_string(batch.qubit_count()));
    }
}

void check_qubit(std::size_t qubit, std::size_t qubit_count) {
    if (qubit >= qubit_count) {
        throw InvalidArgument("qubit " + std::to_string(qubit) + " out of range for " +
                              std::to_string(qubit_count) + " qubits");
    }
}

} // namespace

void apply_gate(StateBatch &batch, const GateOp &op, std::span<const double> params) {
    apply_resolved(batch.data(), resolve(op, params, batch.qubit_count(), false));
}

void apply_gate_dagger(StateBatch &batch, const GateOp &op, std::span<const double> params) {
    apply_resolved(batch.data(), resolve(op, params, batch.qubit_count(), true));
}

void run_circuit(StateBatch &batch, const Circuit &circuit, std::span<const double> params) {
    check_register(batch, circuit);
    check_params(circuit, params);
    for (const GateOp &op : circuit.ops()) {
        apply_gate(batch, op, params);
    }
}

Statevector run_circuit(const Statevector &state, const Circuit &circuit,
                        std::span<const double> params) {
    StateBatch batch = StateBatch::from_states({&state, 1});
    run_circuit(batch, circuit, params);
    return batch.state(0);
}

void apply_pauli(std::span<Complex> row, std::size_t qubit_count, Pauli axis,
                 std::size_t qubit) {
    check_qubit(qubit, qubit_count);
    const GateKind kind =
        axis == Pauli::X ? GateKind::X : (axis == Pauli::Y ? GateKind::Y : GateKind::Z);
    apply_resolved(row, resolve(GateOp::fixed(kind, static_cast<std::uint32_t>(qubit)), {},
                                qubit_count, false));
}

StateBatch amplitude_encode(std::span<const double> rows, std::size_t row_length) {
    if (row_length < 2 || (row_length & (row_length - 1)) != 0) {
        throw InvalidArgument("amplitude_encode: row length " + std::to_string(row_length) +
                              " is not a power of two");
    }
    if (rows.size() % row_length != 0) {
        throw InvalidArgument("amplitude_encode: input is not a whole number of rows");
    }
    const auto qubits = static_cast<std::size_t>(std::countr_zero(row_length));
    const std::size_t count = rows.size() / row_length;
    std::vector<Complex> amps(rows.size());
    for (std::size_t r = 0; r < count; ++r) {
        const auto row = rows.subspan(r * row_length, row_length);
        double ss = 0.0;
        for (double v : row) {
            ss += v * v;
        }
        if (!(ss > 0.0) || !std::isfinite(ss)) {
            throw EncodingError("amplitude_encode: row " + std::to_string(r) +
                                " has zero (or non-finite) norm");
        }
        const double inv = 1.0 / std::sqrt(ss);
        for (std::size_t i = 0; i < row_length; ++i) {
            amps[r * row_length + i] = row[i] * inv;
        }
    }
    return StateBatch(qubits, std::move(amps));
}

double pauli_expectation(std::span<const Complex> a, std::size_t qubit_count, Pauli axis,
                         std::size_t qubit) {
    check_qubit(qubit, qubit_count);
    const std::size_t tb = bit_of(qubit, qubit_count);
    double acc = 0.0;
    for (std::size_t hi = 0; hi < a.size(); hi += 2 * tb) {
        for (std::size_t i0 = hi; i0 < hi + tb; ++i0) {
            const Complex x0 = a[i0];
            const Complex x1 = a[i0 + tb];
            switch (axis) {
            case Pauli::Z:
                acc += std::norm(x0) - std::norm(x1);
                break;
            case Pauli::X:
                acc += 2.0 * cconj_mul(x0, x1).real();
                break;
            case Pauli::Y:
                acc += 2.0 * cconj_mul(x0, x1).imag();
                break;
            }
        }
    }
    return acc;
}

std::vector<double> pauli_expectation(const StateBatch &batch, Pauli axis, std::size_t qubit) {
    std::vector<double> out(batch.batch_size());
    for (std::size_t r = 0; r < batch.batch_size(); ++r) {
        out[r] = pauli_expectation(batch.row(r), batch.qubit_count(), axis, qubit);
    }
    return out;
}

void pauli_expectations(const StateBatch &batch, std::span<const Pauli> axes,
                        std::span<double> out) {
    const std::size_t nq = batch.qubit_count();
    const std::size_t na = axes.size();
    if (out.size() != batch.batch_size() * nq * na) {
        throw InvalidArgument("pauli_expectations: output has wrong size");
    }
    for (std::size_t r = 0; r < batch.batch_size(); ++r) {
        const auto row = batch.row(r);
        for (std::size_t q = 0; q < nq; ++q) {
            for (std::size_t a = 0; a < na; ++a) {
                out[(r * nq + q) * na + a] = pauli_expectation(row, nq, axes[a], q);
            }
        }
    }
}

double generator_overlap(const StateBatch &cotangent, const StateBatch &state,
                         const GateOp &op) {
    if (!is_rotation(op.kind())) {
        throw InvalidArgument("generator_overlap: " + std::string(to_string(op.kind())) +
                              " has no generator");
    }
    const std::size_t nq = state.qubit_count();
    check_qubits(op, nq);
    const std::size_t tb = bit_of(op.target(), nq);
    const std::size_t cb = is_controlled(op.kind()) ? bit_of(op.control(), nq) : 0;
    const Pauli axis = rotation_axis(op.kind());
    const auto lam = cotangent.data();
    const auto psi = state.data();
    double acc = 0.0; // accumulates Im <lambda|G|psi>
    for (std::size_t hi = 0; hi < psi.size(); hi += 2 * tb) {
        for (std::size_t i0 = hi; i0 < hi + tb; ++i0) {
            if (cb != 0 && (i0 & cb) == 0) {
                continue;
            }
            const std::size_t i1 = i0 + tb;
            switch (axis) {
            case Pauli::X:
                acc += cconj_mul(lam[i0], psi[i1]).imag() + cconj_mul(lam[i1], psi[i0]).imag();
                break;
            case Pauli::Y:
                // G psi = (-i psi1, i psi0)
                acc += -cconj_mul(lam[i0], psi[i1]).real() + cconj_mul(lam[i1], psi[i0]).real();
                break;
            case Pauli::Z:
                acc += cconj_mul(lam[i0], psi[i0]).imag() - cconj_mul(lam[i1], psi[i1]).imag();
                break;
            }
        }
    }
    return acc;
}

std::vector<double> adjoint_vjp(StateBatch state, StateBatch cotangent, const Circuit &circuit,
                                std::span<const double> params) {
    check_register(state, circuit);
    check_params(circuit, params);
    if (state.batch_size() != cotangent.batch_size() ||
        state.qubit_count() != cotangent.qubit_count()) {
        throw InvalidArgument("adjoint_vjp: state and cotangent batches differ in shape");
    }
    std::vector<double> grad(circuit.param_count(), 0.0);
    const auto ops = circuit.ops();
    for (std::size_t k = ops.size(); k-- > 0;) {
        const GateOp &op = ops[k];
        if (auto slot = op.param_slot()) {
            grad[slot->index] += generator_overlap(cotangent, state, op);
        }
        if (k > 0) {
            apply_gate_dagger(state, op, params);
            apply_gate_dagger(cotangent, op, params);
        }
    }
    return grad;
}

std::vector<double> adjoint_gradient(const StateBatch &input, const Circuit &circuit,
                                     std::span<const double> params,
                                     std::span<const Observable> observables,
                                     std::span<const double> upstream) {
    const std::size_t rows = input.batch_size();
    if (upstream.size() != rows * observables.size()) {
        throw InvalidArgument("adjoint_gradient: upstream has " +
                              std::to_string(upstream.size()) + " entries, expected " +
                              std::to_string(rows) + " rows x " +
                              std::to_string(observables.size()) + " observables");
    }
    StateBatch state = input;
    run_circuit(state, circuit, params);

    const std::size_t nq = state.qubit_count();
    StateBatch cotangent(nq, std::vector<Complex>(state.data().size()));
    std::vector<Complex> scratch(state.dim());
    for (std::size_t r = 0; r < rows; ++r) {
        auto out = cotangent.row(r);
        for (std::size_t k = 0; k < observables.size(); ++k) {
            const double w = upstream[r * observables.size() + k];
            if (w == 0.0) {
                continue;
            }
            const auto src = state.row(r);
            std::copy(src.begin(), src.end(), scratch.begin());
            apply_pauli(scratch, nq, observables[k].axis, observables[k].qubit);
            for (std::size_t i = 0; i < scratch.size(); ++i) {
                out[i] += w * scratch[i];
            }
        }
    }
    return adjoint_vjp(std::move(state), std::move(cotangent), circuit, params);
}

StateBatch unitary_columns(const Circuit &circuit, std::span<const double> params) {
    const std::size_t dim = std::size_t{1} << circuit.qubit_count();
    std::vector<Complex> amps(dim * dim);
    for (std::size_t c = 0; c < dim; ++c) {
        amps[c * dim + c] = 1.0;
    }
    StateBatch cols(circuit.qubit_count(), std::move(amps));
    run_circuit(cols, circuit, params);
    return cols;
}

StateBatch apply_unitary_columns(const StateBatch &columns, const StateBatch &input) {
    const std::size_t dim = columns.dim();
    if (columns.batch_size() != dim || input.qubit_count() != columns.qubit_count()) {
        throw InvalidArgument("apply_unitary_columns: shape mismatch");
    }
    std::vector<Complex> out(input.data().size());
    const auto cols = columns.data();
    for (std::size_t r = 0; r < input.batch_size(); ++r) {
        const auto x = input.row(r);
        Complex *dst = out.data() + r * dim;
        for (std::size_t c = 0; c < dim; ++c) {
            const Complex xc = x[c];
            if (xc == Complex{}) {
                continue;
            }
            const Complex *col = cols.data() + c * dim;
            if (xc.imag() == 0.0) {
                const double xr = xc.real();
                for (std::size_t i = 0; i < dim; ++i) {
                    dst[i] += xr * col[i];
                }
            } else {
                for (std::size_t i = 0; i < dim; ++i) {
                    dst[i] += cmul(xc, col[i]);
                }
            }
        }
    }
    return StateBatch(columns.qubit_count(), std::move(out));
}

StateBatch apply_unitary_columns_adjoint(const StateBatch &columns, const StateBatch &input) {
    const std::size_t dim = columns.dim();
    if (columns.batch_size() != dim || input.qubit_count() != columns.qubit_count()) {
        throw InvalidArgument("apply_unitary_columns_adjoint: shape mismatch");
    }
    std::vector<Complex> out(input.data().size());
    const auto cols = columns.data();
    for (std::size_t r = 0; r < input.batch_size(); ++r) {
        const auto y = input.row(r);
        Complex *dst = out.data() + r * dim;
        for (std::size_t c = 0; c < dim; ++c) {
            const Complex *col = cols.data() + c * dim;
            Complex acc{};
            for (std::size_t i = 0; i < dim; ++i) {
                acc += cconj_mul(col[i], y[i]);
            }
            dst[c] = acc;
        }
    }
    return StateBatch(columns.qubit_count(), std::move(out));
}

StateBatch pullback_to_columns(const StateBatch &input, const StateBatch &cotangent) {
    const std::size_t dim = input.dim();
    if (input.batch_size() != cotangent.batch_size() ||
        input.qubit_count() != cotangent.qubit_count()) {
        throw InvalidArgument("pullback_to_columns: shape mismatch");
    }
    std::vector<Complex> out(dim * dim);
    for (std::size_t r = 0; r < input.batch_size(); ++r) {
        const auto x = input.row(r);
        const auto lam = cotangent.row(r);
        for (std::size_t c = 0; c < dim; ++c) {
            const Complex xc = std::conj(x[c]);
            if (xc == Complex{}) {
                continue;
            }
            Complex *dst = out.data() + c * dim;
            if (xc.imag() == 0.0) {
                const double xr = xc.real();
                for (std::size_t i = 0; i < dim; ++i) {
                    dst[i] += xr * lam[i];
                }
            } else {
                for (std::size_t i = 0; i < dim; ++i) {
                    dst[i] += cmul(xc, lam[i]);
                }
            }
        }
    }
    return StateBatch(input.qubit_count(), std::move(out));
}

} // namespace pqnet::sim
