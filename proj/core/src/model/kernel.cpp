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


#include "pqnet/model/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pqnet/error.hpp"

namespace pqnet::model {

using sim::GateKind;
using sim::GateOp;
using sim::ParamSlot;

sim::Circuit build_kernel(const KernelSpec &spec) {
    if (spec.entangler_period == 0) {
        throw InvalidArgument("build_kernel: entangler_period must be positive");
    }
    std::vector<GateOp> ops;
    std::uint32_t slot = 0;
    std::size_t e = 0;
    const auto next = [&slot] { return ParamSlot{slot++}; };
    for (std::size_t b = 0; b < spec.blocks; ++b) {
        for (std::size_t q = 0; q < kKernelQubits; ++q) {
            ops.push_back(GateOp::rotation(GateKind::RX, q, next()));
            ops.push_back(GateOp::rotation(GateKind::RY, q, next()));
            ops.push_back(GateOp::rotation(GateKind::RZ, q, next()));
        }
        const bool entangled = (b + 1) % spec.entangler_period == 0;
        for (std::size_t k = 0; entangled && k < spec.entanglers_per_block; ++k, ++e) {
            ops.push_back(GateOp::rotation(GateKind::CRX, e % kKernelQubits,
                                           (e + 1) % kKernelQubits, next()));
        }
        if (spec.dressing) {
            for (std::size_t q = 0; q < kKernelQubits; ++q) {
                const bool h = (q + b) % 2 == 0;
                ops.push_back(GateOp::fixed(h ? GateKind::H : GateKind::SX, q));
            }
        }
    }
    static constexpr GateKind kFinal[3] = {GateKind::RX, GateKind::RY, GateKind::RZ};
    for (std::size_t i = 0; i < spec.final_rotations; ++i) {
        ops.push_back(GateOp::rotation(kFinal[(i / kKernelQubits) % 3], i % kKernelQubits, next()));
    }
    return sim::Circuit(kKernelQubits, std::move(ops));
}

sim::Circuit default_kernel() { return build_kernel(KernelSpec{}); }

ModelState::ModelState(sim::Circuit k)
    : kernel(std::move(k)), theta(kernel.param_count(), 0.0),
      head_weights(kClassCount * kFeatureCount, 0.0), head_bias(kClassCount, 0.0) {
    if (kernel.qubit_count() != kKernelQubits) {
        throw InvalidArgument("ModelState: kernel must act on 4 qubits, got " +
                              std::to_string(kernel.qubit_count()));
    }
}

ModelState ModelState::initialize(sim::Circuit k, Rng &rng) {
    ModelState m(std::move(k));
    const double a = std::numbers::pi / 50.0;
    for (double &t : m.theta) {
        t = -a + 2.0 * a * rng.uniform();
    }
    const double w = std::sqrt(6.0 / static_cast<double>(kFeatureCount + kClassCount));
    for (double &x : m.head_weights) {
        x = -w + 2.0 * w * rng.uniform();
    }
    return m;
}

std::size_t ModelState::parameter_count() const {
    return theta.size() + head_weights.size() + head_bias.size();
}

std::vector<double> ModelState::flatten() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    flat.insert(flat.end(), theta.begin(), theta.end());
    flat.insert(flat.end(), head_weights.begin(), head_weights.end());
    flat.insert(flat.end(), head_bias.begin(), head_bias.end());
    return flat;
}

void ModelState::assign(std::span<const double> flat) {
    if (flat.size() != parameter_count()) {
        throw InvalidArgument("ModelState::assign: expected " + std::to_string(parameter_count()) +
                              " values, got " + std::to_string(flat.size()));
    }
    auto it = flat.begin();
    for (auto *v : {&theta, &head_weights, &head_bias}) {
        std::copy(it, it + static_cast<std::ptrdiff_t>(v->size()), v->begin());
        it += static_cast<std::ptrdiff_t>(v->size());
    }
}

void ModelState::validate() const {
    if (kernel.qubit_count() != kKernelQubits || theta.size() != kernel.param_count() ||
        head_weights.size() != kClassCount * kFeatureCount || head_bias.size() != kClassCount) {
        throw InvalidArgument("ModelState: parameter vectors do not match the architecture");
    }
}

std::size_t unshared_parameter_count(const sim::Circuit &kernel) {
    return kPatchesPerSample * kernel.param_count() + kHeadParams;
}

} // namespace pqnet::model
