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


#include "pqnet/sim/gate.hpp"

#include <cmath>
#include <string>

#include "pqnet/error.hpp"

namespace pqnet::sim {

namespace {

constexpr std::array<std::string_view, 12> kNames = {"RX", "RY", "RZ", "SX", "H",   "X",
                                                     "Y",  "Z",  "CNOT", "CRX", "CRY", "CRZ"};

} // namespace

std::string_view to_string(GateKind kind) { return kNames[static_cast<std::size_t>(kind)]; }

std::optional<GateKind> gate_kind_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) {
            return static_cast<GateKind>(i);
        }
    }
    return std::nullopt;
}

char to_char(Pauli axis) {
    switch (axis) {
    case Pauli::X:
        return 'X';
    case Pauli::Y:
        return 'Y';
    case Pauli::Z:
        return 'Z';
    }
    return '?';
}

Pauli rotation_axis(GateKind k) {
    switch (k) {
    case GateKind::RX:
    case GateKind::CRX:
        return Pauli::X;
    case GateKind::RY:
    case GateKind::CRY:
        return Pauli::Y;
    case GateKind::RZ:
    case GateKind::CRZ:
        return Pauli::Z;
    default:
        throw InvalidArgument("rotation_axis: " + std::string(to_string(k)) +
                              " is not a rotation");
    }
}

GateOp::GateOp(GateKind kind, std::array<std::uint32_t, 2> qubits, std::optional<ParamSlot> slot,
               std::optional<double> angle)
    : kind_(kind), qubits_(qubits), slot_(slot), angle_(angle) {
    const std::string name(to_string(kind));
    if (is_rotation(kind) && slot.has_value() == angle.has_value()) {
        throw InvalidArgument(name + ": rotation needs exactly one of slot or fixed angle");
    }
    if (!is_rotation(kind) && (slot || angle)) {
        throw InvalidArgument(name + ": non-rotation gate takes no parameter");
    }
    if (arity() == 2 && qubits_[0] == qubits_[1]) {
        throw InvalidArgument(name + ": control and target must differ");
    }
}

GateOp GateOp::fixed(GateKind kind, std::uint32_t q0) {
    if (sim::arity(kind) != 1) {
        throw InvalidArgument(std::string(to_string(kind)) + " needs two qubits");
    }
    return GateOp(kind, {q0, 0}, std::nullopt, std::nullopt);
}

GateOp GateOp::fixed(GateKind kind, std::uint32_t control, std::uint32_t target) {
    if (sim::arity(kind) != 2) {
        throw InvalidArgument(std::string(to_string(kind)) + " acts on one qubit");
    }
    return GateOp(kind, {control, target}, std::nullopt, std::nullopt);
}

GateOp GateOp::rotation(GateKind kind, std::uint32_t q0, ParamSlot slot) {
    if (sim::arity(kind) != 1) {
        throw InvalidArgument(std::string(to_string(kind)) + " needs two qubits");
    }
    return GateOp(kind, {q0, 0}, slot, std::nullopt);
}

GateOp GateOp::rotation(GateKind kind, std::uint32_t q0, double angle) {
    if (sim::arity(kind) != 1) {
        throw InvalidArgument(std::string(to_string(kind)) + " needs two qubits");
    }
    return GateOp(kind, {q0, 0}, std::nullopt, angle);
}

GateOp GateOp::rotation(GateKind kind, std::uint32_t control, std::uint32_t target,
                        ParamSlot slot) {
    if (sim::arity(kind) != 2) {
        throw InvalidArgument(std::string(to_string(kind)) + " acts on one qubit");
    }
    return GateOp(kind, {control, target}, slot, std::nullopt);
}

GateOp GateOp::rotation(GateKind kind, std::uint32_t control, std::uint32_t target,
                        double angle) {
    if (sim::arity(kind) != 2) {
        throw InvalidArgument(std::string(to_string(kind)) + " acts on one qubit");
    }
    return GateOp(kind, {control, target}, std::nullopt, angle);
}

double GateOp::angle(std::span<const double> params) const {
    if (angle_) {
        return *angle_;
    }
    if (slot_) {
        if (slot_->index >= params.size()) {
            throw InvalidArgument(std::string(to_string(kind_)) + ": parameter slot " +
                                  std::to_string(slot_->index) + " missing (got " +
                                  std::to_string(params.size()) + " parameters)");
        }
        return params[slot_->index];
    }
    return 0.0;
}

Mat2 target_matrix(GateKind kind, double angle) {
    using namespace std::complex_literals;
    const double c = std::cos(angle / 2);
    const double s = std::sin(angle / 2);
    switch (kind) {
    case GateKind::RX:
    case GateKind::CRX:
        return {c, -1i * s, -1i * s, c};
    case GateKind::RY:
    case GateKind::CRY:
        return {c, -s, s, c};
    case GateKind::RZ:
    case GateKind::CRZ:
        return {std::polar(1.0, -angle / 2), 0.0, 0.0, std::polar(1.0, angle / 2)};
    case GateKind::SX:
        // Principal square root of X: SX * SX == X.
        return {Complex(0.5, 0.5), Complex(0.5, -0.5), Complex(0.5, -0.5), Complex(0.5, 0.5)};
    case GateKind::H: {
        const double r = 1.0 / std::sqrt(2.0);
        return {r, r, r, -r};
    }
    case GateKind::X:
    case GateKind::CNOT:
        return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y:
        return {0.0, -1i, 1i, 0.0};
    case GateKind::Z:
        return {1.0, 0.0, 0.0, -1.0};
    }
    throw InvalidArgument("unknown gate kind");
}

Mat2 dagger(const Mat2 &m) {
    return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

Mat2 pauli_matrix(Pauli p) {
    switch (p) {
    case Pauli::X:
        return target_matrix(GateKind::X, 0.0);
    case Pauli::Y:
        return target_matrix(GateKind::Y, 0.0);
    case Pauli::Z:
        return target_matrix(GateKind::Z, 0.0);
    }
    throw InvalidArgument("unknown Pauli");
}

} // namespace pqnet::sim
