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
#include <cstdint>
#include <span>
#include <vector>

#include "pqnet/rng.hpp"
#include "pqnet/sim/circuit.hpp"

namespace pqnet::model {

inline constexpr std::size_t kKernelQubits = 4;
inline constexpr std::size_t kPatchSide = 4;
inline constexpr std::size_t kPatchLength = kPatchSide * kPatchSide;
inline constexpr std::size_t kGridSide = 16;
inline constexpr std::size_t kPatchesPerSide = kGridSide / kPatchSide;
inline constexpr std::size_t kPatchesPerSample = kPatchesPerSide * kPatchesPerSide;
inline constexpr std::size_t kFeatureSide = 8;
inline constexpr std::size_t kFeatureCount = kFeatureSide * kFeatureSide;
inline constexpr std::size_t kClassCount = 8;
inline constexpr std::size_t kHeadParams = kClassCount * kFeatureCount + kClassCount;
inline constexpr std::size_t kKernelParams = 117;

/// Layout knobs of the shared kernel. Every block applies RX, RY, RZ to each
/// qubit; every `entangler_period`-th block then adds `entanglers_per_block`
/// trainable CRX gates walking a ring; then fixed dressing (H on even qubits
/// and SX on odd ones, alternating per block). `final_rotations` trainable
/// single-qubit rotations close the circuit.
struct KernelSpec {
    std::size_t blocks = 9;
    std::size_t entanglers_per_block = 1;
    std::size_t entangler_period = 3;
    std::size_t final_rotations = 6;
    bool dressing = true;
};

/// Builds the kernel described by `spec` (4 qubits).
sim::Circuit build_kernel(const KernelSpec &spec);

/// The kernel used by the experiments: 108 block rotations, a CRX chain
/// 0-1, 1-2, 2-3 after blocks 3, 6 and 9, and 6 closing rotations (117 slots).
/// Three entanglers keep two-qubit depolarizing noise survivable.
sim::Circuit default_kernel();

/// Shared kernel parameters plus the linear head W (8 x 64, row-major) and
/// bias (8). The flat parameter order is theta, W, bias.
struct ModelState {
    sim::Circuit kernel;
    std::vector<double> theta;
    std::vector<double> head_weights;
    std::vector<double> head_bias;

    /// Zero parameters for `kernel`; throws InvalidArgument unless it acts on 4 qubits.
    explicit ModelState(sim::Circuit kernel);
    ModelState() : ModelState(default_kernel()) {}

    /// Kernel slots uniform in (-pi/50, pi/50), head weights uniform in
    /// +-sqrt(6 / 72), bias zero. Draw order: theta, then W row-major.
    static ModelState initialize(sim::Circuit kernel, Rng &rng);

    std::size_t parameter_count() const;
    std::vector<double> flatten() const;
    /// Inverse of flatten(); throws InvalidArgument on a length mismatch.
    void assign(std::span<const double> flat);

    /// Throws InvalidArgument if vector sizes disagree with the kernel.
    void validate() const;

    friend bool operator==(const ModelState &, const ModelState &) = default;
};

/// Trainable parameters of the conventional design with one unshared kernel
/// per patch position: 16 * kernel + head.
std::size_t unshared_parameter_count(const sim::Circuit &kernel);

} // namespace pqnet::model
