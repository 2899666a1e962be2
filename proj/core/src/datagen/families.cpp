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
#include <string>

#include "pqnet/datagen.hpp"

namespace pqnet::datagen {

namespace {

using sim::GateOp;
using sim::ParamSlot;
namespace g = sim::gates;

// Shallow layout: a CRY chain over class-specific qubit pairs with per-sample
// angles, then a fixed weak R_x layer so every basis state carries some weight.
GeneratorFamily make_family(std::uint8_t id) {
    constexpr double pi = std::numbers::pi;
    GeneratorFamily f;
    f.class_id = id;
    f.name = "w-family-" + std::to_string(id);

    for (std::size_t i = 0; i < kWQubits; ++i) {
        f.magnitude_profile[i] = 1.0 + 0.45 * std::cos(2.0 * pi * (double(i) - id) / kWQubits);
        f.phase_profile[i] = (pi / 4.0) * id * double(i);
    }
    f.magnitude_spread = 0.12;
    f.phase_spread = 0.3;

    const std::uint32_t stride = 1 + id % 4;
    const bool reversed = id >= 4;
    std::vector<GateOp> ops;
    std::uint32_t slot = 0;
    for (std::uint32_t k = 0; k < 4; ++k) {
        std::uint32_t a = (2 * k + id) % kWQubits;
        std::uint32_t b = (a + stride) % kWQubits;
        if (reversed) {
            std::swap(a, b);
        }
        ops.push_back(g::cry(a, b, ParamSlot{slot++}));
        f.param_distribution.push_back({0.35, 0.1});
    }
    for (std::uint32_t q = 0; q < kWQubits; ++q) {
        ops.push_back(g::rx(q, 0.04));
    }
    f.entangler = sim::Circuit(kWQubits, std::move(ops));
    return f;
}

} // namespace

std::vector<GeneratorFamily> standard_families() {
    std::vector<GeneratorFamily> out;
    for (std::uint8_t id = 0; id < kNumClasses; ++id) {
        out.push_back(make_family(id));
    }
    return out;
}

} // namespace pqnet::datagen
