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
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace pqnet::sim {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix.
using Mat2 = std::array<Complex, 4>;

enum class GateKind : std::uint8_t { RX, RY, RZ, SX, H, X, Y, Z, CNOT, CRX, CRY, CRZ };

/// Single-qubit Pauli axis; doubles as the measurement basis selector.
enum class Pauli : std::uint8_t { X, Y, Z };

std::string_view to_string(GateKind kind);
std::optional<GateKind> gate_kind_from_string(std::string_view name);
char to_char(Pauli axis);

constexpr bool is_rotation(GateKind k) {
    return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ || k == GateKind::CRX ||
           k == GateKind::CRY || k == GateKind::CRZ;
}

constexpr bool is_controlled(GateKind k) {
    return k == GateKind::CNOT || k == GateKind::CRX || k == GateKind::CRY ||
           k == GateKind::CRZ;
}

constexpr std::size_t arity(GateKind k) { return is_controlled(k) ? 2 : 1; }

/// Pauli generating a rotation kind (RX/CRX -> X, ...).
Pauli rotation_axis(GateKind k);

/// Index into the trainable parameter vector.
struct ParamSlot {
    std::uint32_t index;
    friend bool operator==(ParamSlot, ParamSlot) = default;
};

/// One gate application. Controlled kinds store (control, target) in that order.
/// Rotation kinds carry exactly one of a parameter slot or a fixed angle;
/// every other kind carries neither. Enforced by the factories.
class GateOp {
  public:
    static GateOp fixed(GateKind kind, std::uint32_t q0);
    static GateOp fixed(GateKind kind, std::uint32_t control, std::uint32_t target);
    static GateOp rotation(GateKind kind, std::uint32_t q0, ParamSlot slot);
    static GateOp rotation(GateKind kind, std::uint32_t q0, double angle);
    static GateOp rotation(GateKind kind, std::uint32_t control, std::uint32_t target,
                           ParamSlot slot);
    static GateOp rotation(GateKind kind, std::uint32_t control, std::uint32_t target,
                           double angle);

    GateKind kind() const { return kind_; }
    std::size_t arity() const { return sim::arity(kind_); }
    std::span<const std::uint32_t> qubits() const { return {qubits_.data(), arity()}; }
    std::uint32_t target() const { return qubits_[arity() - 1]; }
    std::uint32_t control() const { return qubits_[0]; }
    std::optional<ParamSlot> param_slot() const { return slot_; }
    std::optional<double> fixed_angle() const { return angle_; }

    /// Rotation angle, reading `params` for slotted ops. Throws InvalidArgument
    /// when the slot is not covered by `params`.
    double angle(std::span<const double> params) const;

    friend bool operator==(const GateOp &, const GateOp &) = default;

  private:
    GateOp(GateKind kind, std::array<std::uint32_t, 2> qubits, std::optional<ParamSlot> slot,
           std::optional<double> angle);

    GateKind kind_;
    std::array<std::uint32_t, 2> qubits_{};
    std::optional<ParamSlot> slot_;
    std::optional<double> angle_;
};

/// 2x2 unitary acting on the target qubit (for controlled kinds, the
/// operator applied when the control is |1>). `angle` is ignored for
/// non-rotation kinds.
Mat2 target_matrix(GateKind kind, double angle);

Mat2 dagger(const Mat2 &m);
Mat2 pauli_matrix(Pauli p);

namespace gates {

inline GateOp h(std::uint32_t q) { return GateOp::fixed(GateKind::H, q); }
inline GateOp sx(std::uint32_t q) { return GateOp::fixed(GateKind::SX, q); }
inline GateOp x(std::uint32_t q) { return GateOp::fixed(GateKind::X, q); }
inline GateOp y(std::uint32_t q) { return GateOp::fixed(GateKind::Y, q); }
inline GateOp z(std::uint32_t q) { return GateOp::fixed(GateKind::Z, q); }
inline GateOp cnot(std::uint32_t c, std::uint32_t t) { return GateOp::fixed(GateKind::CNOT, c, t); }

template <class A> GateOp rx(std::uint32_t q, A a) { return GateOp::rotation(GateKind::RX, q, a); }
template <class A> GateOp ry(std::uint32_t q, A a) { return GateOp::rotation(GateKind::RY, q, a); }
template <class A> GateOp rz(std::uint32_t q, A a) { return GateOp::rotation(GateKind::RZ, q, a); }
template <class A> GateOp crx(std::uint32_t c, std::uint32_t t, A a) {
    return GateOp::rotation(GateKind::CRX, c, t, a);
}
template <class A> GateOp cry(std::uint32_t c, std::uint32_t t, A a) {
    return GateOp::rotation(GateKind::CRY, c, t, a);
}
template <class A> GateOp crz(std::uint32_t c, std::uint32_t t, A a) {
    return GateOp::rotation(GateKind::CRZ, c, t, a);
}

} // namespace gates
} // namespace pqnet::sim
