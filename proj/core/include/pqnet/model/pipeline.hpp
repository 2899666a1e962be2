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
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pqnet/measure.hpp"
#include "pqnet/model/model.hpp"
#include "pqnet/noise.hpp"
#include "pqnet/rng.hpp"
#include "pqnet/sim/state.hpp"

namespace pqnet::model {

/// 16 x 16 real image, row-major.
using Grid = std::array<double, kGridSide * kGridSide>;

/// grid[i][j] = |z[16 i + j]|. Requires 256 amplitudes.
Grid complex_to_grid(std::span<const sim::Complex> z);

struct PatchOrigin {
    std::uint32_t sample;
    std::uint8_t c; ///< patch row
    std::uint8_t r; ///< patch column
    friend bool operator==(const PatchOrigin &, const PatchOrigin &) = default;
};

/// (B * 16) x 16 patch matrix plus where every row came from.
struct PatchBatch {
    std::size_t samples = 0;
    std::vector<double> rows;
    std::vector<PatchOrigin> origin;

    std::size_t row_count() const { return origin.size(); }
    std::span<const double> row(std::size_t i) const {
        return {rows.data() + i * kPatchLength, kPatchLength};
    }
};

/// Non-overlapping 4 x 4 tiling; rows ordered sample, then c, then r.
PatchBatch grid_patches(std::span<const Grid> grids);

/// Position of qubit q of patch (c, r) in the flattened 8 x 8 feature map.
constexpr std::size_t fused_index(std::size_t c, std::size_t r, std::size_t q) {
    return (2 * c + q / 2) * kFeatureSide + (2 * r + q % 2);
}

/// Stretch of the kernel between two noise sites, with its own slot
/// numbering; `slots[i]` is the kernel slot behind local slot i.
struct KernelSegment {
    sim::Circuit circuit;
    std::vector<std::uint32_t> slots;
    std::uint32_t site_first = 0; ///< qubits of the noise site closing the
    std::uint32_t site_second = 0; ///< segment (unused for the last one)
};

/// Splits `kernel` after every two-qubit op when `at_sites` is set; otherwise
/// returns one segment.
std::vector<KernelSegment> split_kernel(const sim::Circuit &kernel, bool at_sites);

/// State kept by pqeu_forward for the backward pass.
struct PqeuTape {
    std::vector<KernelSegment> segments;
    std::vector<sim::StateBatch> columns; ///< per segment, U_k e_c for c = 0..15
    std::vector<sim::StateBatch> inputs;  ///< per segment, rows entering it
    sim::StateBatch states;               ///< kernel output rows
    noise::GateNoiseRecord record;
    std::vector<sim::Pauli> axes;
    std::vector<PatchOrigin> origin;
    std::size_t samples = 0;
    std::uint32_t trajectories = 1;
};

/// Everything a forward pass needs besides the parameters.
struct ForwardContext {
    measure::MeasureConfig measure;
    noise::NoiseConfig noise;
    measure::MubSchedule schedule;
    measure::Phase phase = measure::Phase::Inference;
};

/// Shared-kernel embedding of all patches in one batched pass: B x 64 fused
/// features. Draws gate noise then measurement noise from `rng`. Throws
/// EncodingError naming the sample and patch of any zero or non-finite row.
std::vector<double> pqeu_forward(const PatchBatch &patches, const ModelState &model,
                                 const ForwardContext &ctx, Rng &rng,
                                 PqeuTape *tape = nullptr);

/// Kernel-parameter gradient for the feature cotangent `d_features` (B x 64).
std::vector<double> pqeu_backward(const PqeuTape &tape, const ModelState &model,
                                  std::span<const double> d_features);

struct HeadOutput {
    std::size_t rows = 0;
    std::vector<double> logits;   ///< B x 8
    std::vector<double> log_probs; ///< B x 8
};

/// y = W f + b followed by log-softmax, for features B x 64.
HeadOutput apply_head(std::span<const double> features, const ModelState &model);

/// Full pipeline on 8-qubit states: grid, patches, PQEU, head.
HeadOutput forward(std::span<const sim::Statevector> samples, const ModelState &model,
                   const ForwardContext &ctx, Rng &rng);

/// Mean negative log-likelihood plus l2_lambda * |all parameters|^2.
double loss(std::span<const double> log_probs, std::span<const std::uint8_t> labels,
            const ModelState &model, double l2_lambda);

struct LossAndGradient {
    double loss = 0.0;
    std::vector<double> gradient; ///< flat, ModelState::flatten() order
    HeadOutput output;
};

/// Loss of one mini-batch of patches and its gradient over all parameters.
LossAndGradient loss_and_gradient(const PatchBatch &patches, std::span<const std::uint8_t> labels,
                                  const ModelState &model, const ForwardContext &ctx,
                                  double l2_lambda, Rng &rng);

/// Index of the largest log-probability per row; ties go to the lowest class.
std::vector<std::uint8_t> predict(const HeadOutput &out);

struct SequentialOutput {
    HeadOutput output;
    std::size_t kernel_invocations = 0;
};

/// Same function as forward() but one patch statevector at a time, each with
/// its own kernel invocation.
SequentialOutput sequential_baseline_forward(std::span<const sim::Statevector> samples,
                                             const ModelState &model, const ForwardContext &ctx,
                                             Rng &rng);

} // namespace pqnet::model
