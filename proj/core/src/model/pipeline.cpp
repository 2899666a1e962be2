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


#include "pqnet/model/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pqnet/error.hpp"
#include "pqnet/sim/simulator.hpp"

namespace pqnet::model {

using sim::Complex;
using sim::StateBatch;

Grid complex_to_grid(std::span<const Complex> z) {
    if (z.size() != kGridSide * kGridSide) {
        throw InvalidArgument("complex_to_grid: expected 256 amplitudes, got " +
                              std::to_string(z.size()));
    }
    Grid g{};
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = std::abs(z[i]);
    }
    return g;
}

PatchBatch grid_patches(std::span<const Grid> grids) {
    PatchBatch out;
    out.samples = grids.size();
    out.rows.reserve(grids.size() * kPatchesPerSample * kPatchLength);
    out.origin.reserve(grids.size() * kPatchesPerSample);
    for (std::size_t s = 0; s < grids.size(); ++s) {
        for (std::size_t c = 0; c < kPatchesPerSide; ++c) {
            for (std::size_t r = 0; r < kPatchesPerSide; ++r) {
                for (std::size_t i = 0; i < kPatchSide; ++i) {
                    const double *src = grids[s].data() + (kPatchSide * c + i) * kGridSide + kPatchSide * r;
                    out.rows.insert(out.rows.end(), src, src + kPatchSide);
                }
                out.origin.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint8_t>(c),
                                      static_cast<std::uint8_t>(r)});
            }
        }
    }
    return out;
}

namespace {

void check_patches(const PatchBatch &patches) {
    if (patches.rows.size() != patches.row_count() * kPatchLength) {
        throw InvalidArgument("PatchBatch: row storage does not match the provenance map");
    }
    for (std::size_t i = 0; i < patches.row_count(); ++i) {
        double n2 = 0.0;
        for (double v : patches.row(i)) {
            n2 += v * v;
        }
        if (!(n2 > 0.0) || !std::isfinite(n2)) {
            const PatchOrigin &o = patches.origin[i];
            throw EncodingError("pqeu_forward: patch (" + std::to_string(o.c) + ", " +
                                std::to_string(o.r) + ") of sample " + std::to_string(o.sample) +
                                (n2 > 0.0 ? " is not finite" : " is all zero"));
        }
    }
}

/// Scatters per-row qubit values into the fused B x 64 map.
std::vector<double> fuse(std::span<const double> values, std::span<const PatchOrigin> origin,
                         std::size_t samples) {
    std::vector<double> out(samples * kFeatureCount, 0.0);
    for (std::size_t i = 0; i < origin.size(); ++i) {
        const PatchOrigin &o = origin[i];
        if (o.sample >= samples || o.c >= kPatchesPerSide || o.r >= kPatchesPerSide) {
            throw InvalidArgument("pqeu_forward: patch provenance out of range");
        }
        double *dst = out.data() + o.sample * kFeatureCount;
        for (std::size_t q = 0; q < kKernelQubits; ++q) {
            dst[fused_index(o.c, o.r, q)] = values[i * kKernelQubits + q];
        }
    }
    return out;
}

StateBatch repeat_rows(const StateBatch &batch, std::uint32_t times) {
    std::vector<Complex> amps;
    amps.reserve(batch.data().size() * times);
    for (std::size_t r = 0; r < batch.batch_size(); ++r) {
        const auto row = batch.row(r);
        for (std::uint32_t t = 0; t < times; ++t) {
            amps.insert(amps.end(), row.begin(), row.end());
        }
    }
    return StateBatch(batch.qubit_count(), std::move(amps));
}

std::vector<double> gather_params(const KernelSegment &seg, std::span<const double> theta) {
    std::vector<double> p(seg.slots.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = theta[seg.slots[i]];
    }
    return p;
}

void apply_site(StateBatch &batch, const noise::GateNoiseRecord &record, std::size_t site,
                const KernelSegment &seg) {
    const std::size_t nq = batch.qubit_count();
    for (std::size_t r = 0; r < batch.batch_size(); ++r) {
        if (const noise::PairCode c = record.codes[r * record.sites + site]) {
            noise::apply_pauli_pair(batch.row(r), nq, seg.site_first, seg.site_second, c);
        }
    }
}

} // namespace

std::vector<KernelSegment> split_kernel(const sim::Circuit &kernel, bool at_sites) {
    std::vector<KernelSegment> out;
    std::vector<sim::GateOp> ops;
    std::vector<std::uint32_t> slots;
    const auto close = [&](std::uint32_t a, std::uint32_t b) {
        out.push_back({sim::Circuit(kernel.qubit_count(), std::move(ops)), std::move(slots), a, b});
        ops.clear();
        slots.clear();
    };
    for (const sim::GateOp &op : kernel.ops()) {
        if (const auto slot = op.param_slot()) {
            const sim::ParamSlot local{static_cast<std::uint32_t>(slots.size())};
            slots.push_back(slot->index);
            ops.push_back(op.arity() == 2
                              ? sim::GateOp::rotation(op.kind(), op.qubits()[0], op.qubits()[1], local)
                              : sim::GateOp::rotation(op.kind(), op.qubits()[0], local));
        } else {
            ops.push_back(op);
        }
        if (at_sites && op.arity() == 2) {
            close(op.qubits()[0], op.qubits()[1]);
        }
    }
    close(0, 0);
    return out;
}

std::vector<double> pqeu_forward(const PatchBatch &patches, const ModelState &model,
                                 const ForwardContext &ctx, Rng &rng, PqeuTape *tape) {
    model.validate();
    ctx.noise.validate();
    check_patches(patches);

    const std::size_t rows = patches.row_count();
    auto axes = measure::active_axes(ctx.measure, ctx.schedule, ctx.phase);
    const std::size_t na = axes.size();
    const bool noisy = ctx.noise.gate_2q_p != 0.0;
    const std::uint32_t T = noisy ? ctx.noise.gate_trajectories : 1;

    PqeuTape local;
    PqeuTape &t = tape ? *tape : local;
    t = PqeuTape{};
    t.origin = patches.origin;
    t.samples = patches.samples;
    t.trajectories = T;

    // The kernel between noise sites is the same for every row, so each
    // segment is materialized once as 16 columns and applied to all rows
    // together. Without gate noise there is a single segment.
    const sim::Circuit circuit = noise::with_overrotation(model.kernel, ctx.noise.gate_1q_theta);
    t.segments = split_kernel(circuit, noisy);
    const std::size_t sites = t.segments.size() - 1;
    StateBatch psi = sim::amplitude_encode(patches.rows, kPatchLength);
    if (T > 1) {
        psi = repeat_rows(psi, T);
    }
    t.record = noise::draw_gate_noise(psi.batch_size(), sites, ctx.noise.gate_2q_p, rng);
    for (std::size_t k = 0; k < t.segments.size(); ++k) {
        const KernelSegment &seg = t.segments[k];
        t.columns.push_back(sim::unitary_columns(seg.circuit, gather_params(seg, model.theta)));
        StateBatch next = sim::apply_unitary_columns(t.columns.back(), psi);
        if (k < sites) {
            apply_site(next, t.record, k, seg);
        }
        if (tape) {
            t.inputs.push_back(std::move(psi));
        }
        psi = std::move(next);
    }
    t.states = std::move(psi);

    std::vector<double> raw(rows * kKernelQubits * na);
    if (T == 1) {
        sim::pauli_expectations(t.states, axes, raw);
    } else {
        const std::size_t per_row = kKernelQubits * na;
        std::vector<double> expanded(rows * T * per_row);
        sim::pauli_expectations(t.states, axes, expanded);
        const double inv = 1.0 / static_cast<double>(T);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t k = 0; k < per_row; ++k) {
                double acc = 0.0;
                for (std::uint32_t j = 0; j < T; ++j) {
                    acc += expanded[(r * T + j) * per_row + k];
                }
                raw[r * per_row + k] = acc * inv;
            }
        }
    }

    const measure::Features f = measure::features_from_expectations(raw, rows, kKernelQubits, axes,
                                                                    ctx.measure, rng);
    t.axes = std::move(axes);
    return fuse(f.values, patches.origin, patches.samples);
}

std::vector<double> pqeu_backward(const PqeuTape &tape, const ModelState &model,
                                  std::span<const double> d_features) {
    if (d_features.size() != tape.samples * kFeatureCount) {
        throw InvalidArgument("pqeu_backward: cotangent must be samples x 64");
    }
    if (tape.inputs.size() != tape.segments.size()) {
        throw InvalidArgument("pqeu_backward: tape was not recorded");
    }
    const std::size_t rows = tape.origin.size();
    const std::uint32_t T = tape.trajectories;
    const double inv = 1.0 / static_cast<double>(T);
    std::vector<double> upstream(rows * T * kKernelQubits);
    for (std::size_t i = 0; i < rows; ++i) {
        const PatchOrigin &o = tape.origin[i];
        const double *src = d_features.data() + o.sample * kFeatureCount;
        for (std::uint32_t j = 0; j < T; ++j) {
            for (std::size_t q = 0; q < kKernelQubits; ++q) {
                upstream[(i * T + j) * kKernelQubits + q] = src[fused_index(o.c, o.r, q)] * inv;
            }
        }
    }
    StateBatch lambda = measure::feature_cotangent(tape.states, tape.axes, upstream);
    std::vector<double> grad(model.theta.size(), 0.0);
    const std::size_t sites = tape.segments.size() - 1;
    for (std::size_t k = tape.segments.size(); k-- > 0;) {
        const KernelSegment &seg = tape.segments[k];
        if (k < sites) {
            apply_site(lambda, tape.record, k, seg); // Pauli pairs are self-inverse
        }
        if (!seg.slots.empty()) {
            StateBatch pulled = sim::pullback_to_columns(tape.inputs[k], lambda);
            const std::vector<double> g = sim::adjoint_vjp(
                tape.columns[k], std::move(pulled), seg.circuit, gather_params(seg, model.theta));
            for (std::size_t i = 0; i < g.size(); ++i) {
                grad[seg.slots[i]] += g[i];
            }
        }
        if (k > 0) {
            lambda = sim::apply_unitary_columns_adjoint(tape.columns[k], lambda);
        }
    }
    return grad;
}

HeadOutput apply_head(std::span<const double> features, const ModelState &model) {
    if (features.size() % kFeatureCount != 0) {
        throw InvalidArgument("apply_head: features must be B x 64");
    }
    HeadOutput out;
    out.rows = features.size() / kFeatureCount;
    out.logits.resize(out.rows * kClassCount);
    out.log_probs.resize(out.rows * kClassCount);
    for (std::size_t b = 0; b < out.rows; ++b) {
        const double *f = features.data() + b * kFeatureCount;
        double *z = out.logits.data() + b * kClassCount;
        for (std::size_t k = 0; k < kClassCount; ++k) {
            const double *w = model.head_weights.data() + k * kFeatureCount;
            double acc = model.head_bias[k];
            for (std::size_t j = 0; j < kFeatureCount; ++j) {
                acc += w[j] * f[j];
            }
            z[k] = acc;
        }
        const double zmax = *std::max_element(z, z + kClassCount);
        double sum = 0.0;
        for (std::size_t k = 0; k < kClassCount; ++k) {
            sum += std::exp(z[k] - zmax);
        }
        const double lse = zmax + std::log(sum);
        for (std::size_t k = 0; k < kClassCount; ++k) {
            out.log_probs[b * kClassCount + k] = z[k] - lse;
        }
    }
    return out;
}

namespace {

PatchBatch patches_of(std::span<const sim::Statevector> samples) {
    std::vector<Grid> grids;
    grids.reserve(samples.size());
    for (const auto &s : samples) {
        grids.push_back(complex_to_grid(s.amplitudes()));
    }
    return grid_patches(grids);
}

double squared_norm(const ModelState &model) {
    double acc = 0.0;
    for (const auto *v : {&model.theta, &model.head_weights, &model.head_bias}) {
        for (double x : *v) {
            acc += x * x;
        }
    }
    return acc;
}

} // namespace

HeadOutput forward(std::span<const sim::Statevector> samples, const ModelState &model,
                   const ForwardContext &ctx, Rng &rng) {
    const PatchBatch patches = patches_of(samples);
    return apply_head(pqeu_forward(patches, model, ctx, rng), model);
}

double loss(std::span<const double> log_probs, std::span<const std::uint8_t> labels,
            const ModelState &model, double l2_lambda) {
    if (log_probs.size() != labels.size() * kClassCount || labels.empty()) {
        throw InvalidArgument("loss: log-probabilities must be B x 8 with B labels, B > 0");
    }
    double nll = 0.0;
    for (std::size_t b = 0; b < labels.size(); ++b) {
        if (labels[b] >= kClassCount) {
            throw InvalidArgument("loss: label out of range");
        }
        nll -= log_probs[b * kClassCount + labels[b]];
    }
    return nll / static_cast<double>(labels.size()) + l2_lambda * squared_norm(model);
}

LossAndGradient loss_and_gradient(const PatchBatch &patches, std::span<const std::uint8_t> labels,
                                  const ModelState &model, const ForwardContext &ctx,
                                  double l2_lambda, Rng &rng) {
    if (labels.size() != patches.samples) {
        throw InvalidArgument("loss_and_gradient: one label per sample required");
    }
    PqeuTape tape;
    const std::vector<double> features = pqeu_forward(patches, model, ctx, rng, &tape);
    LossAndGradient res;
    res.output = apply_head(features, model);
    res.loss = loss(res.output.log_probs, labels, model, l2_lambda);

    const std::size_t B = labels.size();
    const std::size_t nt = model.theta.size();
    const std::size_t nw = model.head_weights.size();
    res.gradient.assign(model.parameter_count(), 0.0);
    double *g_w = res.gradient.data() + nt;
    double *g_b = g_w + nw;

    std::vector<double> d_features(B * kFeatureCount, 0.0);
    const double invB = 1.0 / static_cast<double>(B);
    for (std::size_t b = 0; b < B; ++b) {
        const double *f = features.data() + b * kFeatureCount;
        double *df = d_features.data() + b * kFeatureCount;
        for (std::size_t k = 0; k < kClassCount; ++k) {
            double dz = std::exp(res.output.log_probs[b * kClassCount + k]);
            if (k == labels[b]) {
                dz -= 1.0;
            }
            dz *= invB;
            g_b[k] += dz;
            const double *w = model.head_weights.data() + k * kFeatureCount;
            double *gw = g_w + k * kFeatureCount;
            for (std::size_t j = 0; j < kFeatureCount; ++j) {
                gw[j] += dz * f[j];
                df[j] += dz * w[j];
            }
        }
    }

    const std::vector<double> g_theta = pqeu_backward(tape, model, d_features);
    std::copy(g_theta.begin(), g_theta.end(), res.gradient.begin());

    if (l2_lambda != 0.0) {
        const std::vector<double> flat = model.flatten();
        for (std::size_t i = 0; i < flat.size(); ++i) {
            res.gradient[i] += 2.0 * l2_lambda * flat[i];
        }
    }
    return res;
}

std::vector<std::uint8_t> predict(const HeadOutput &out) {
    std::vector<std::uint8_t> labels(out.rows);
    for (std::size_t b = 0; b < out.rows; ++b) {
        const double *lp = out.log_probs.data() + b * kClassCount;
        std::size_t best = 0;
        for (std::size_t k = 1; k < kClassCount; ++k) {
            if (lp[k] > lp[best]) {
                best = k;
            }
        }
        labels[b] = static_cast<std::uint8_t>(best);
    }
    return labels;
}

SequentialOutput sequential_baseline_forward(std::span<const sim::Statevector> samples,
                                             const ModelState &model, const ForwardContext &ctx,
                                             Rng &rng) {
    model.validate();
    ctx.noise.validate();
    const auto axes = measure::active_axes(ctx.measure, ctx.schedule, ctx.phase);
    const sim::Circuit circuit = noise::with_overrotation(model.kernel, ctx.noise.gate_1q_theta);
    const std::uint32_t T = ctx.noise.gate_2q_p == 0.0 ? 1 : ctx.noise.gate_trajectories;
    const std::size_t per_row = kKernelQubits * axes.size();

    SequentialOutput out;
    std::vector<double> features(samples.size() * kFeatureCount);
    std::vector<double> raw(per_row);
    std::vector<double> expanded(per_row * T);
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const Grid grid = complex_to_grid(samples[s].amplitudes());
        PatchBatch one = grid_patches(std::span<const Grid>(&grid, 1));
        for (PatchOrigin &o : one.origin) {
            o.sample = static_cast<std::uint32_t>(s);
        }
        check_patches(one);
        for (std::size_t i = 0; i < one.row_count(); ++i) {
            StateBatch psi = sim::amplitude_encode(one.row(i), kPatchLength);
            if (ctx.noise.gate_2q_p == 0.0) {
                sim::run_circuit(psi, circuit, model.theta);
            } else {
                if (T > 1) {
                    psi = repeat_rows(psi, T);
                }
                noise::apply_kernel_gate_noise(psi, model.kernel, model.theta, ctx.noise, rng);
            }
            ++out.kernel_invocations;
            sim::pauli_expectations(psi, axes, expanded);
            for (std::size_t k = 0; k < per_row; ++k) {
                double acc = 0.0;
                for (std::uint32_t j = 0; j < T; ++j) {
                    acc += expanded[j * per_row + k];
                }
                raw[k] = acc / static_cast<double>(T);
            }
            const auto f = measure::features_from_expectations(raw, 1, kKernelQubits, axes,
                                                               ctx.measure, rng);
            const PatchOrigin &o = one.origin[i];
            for (std::size_t q = 0; q < kKernelQubits; ++q) {
                features[s * kFeatureCount + fused_index(o.c, o.r, q)] = f.values[q];
            }
        }
    }
    out.output = apply_head(features, model);
    return out;
}

} // namespace pqnet::model
