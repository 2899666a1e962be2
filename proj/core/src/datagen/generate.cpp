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


#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pqnet/datagen.hpp"
#include "pqnet/error.hpp"
#include "pqnet/sim/simulator.hpp"

namespace pqnet::datagen {

namespace {

double alpha_norm2(const std::array<Complex, kWQubits> &alpha) {
    double s = 0.0;
    for (const Complex &a : alpha) {
        s += std::norm(a);
    }
    return s;
}

} // namespace

WAmplitudes::WAmplitudes(const std::array<Complex, kWQubits> &alpha) : alpha_(alpha) {
    const double n2 = alpha_norm2(alpha_);
    if (!(std::abs(n2 - 1.0) <= 1e-12)) {
        throw InvalidArgument("WAmplitudes: sum |alpha_i|^2 = " + std::to_string(n2) +
                              ", expected 1");
    }
}

WAmplitudes WAmplitudes::normalized(std::array<Complex, kWQubits> alpha) {
    const double n2 = alpha_norm2(alpha);
    if (!(n2 > 0.0) || !std::isfinite(n2)) {
        throw InvalidArgument("WAmplitudes::normalized: zero or non-finite coefficients");
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (Complex &a : alpha) {
        a *= inv;
    }
    return WAmplitudes(alpha);
}

WAmplitudes WAmplitudes::symmetric() {
    std::array<Complex, kWQubits> alpha;
    alpha.fill(1.0 / std::sqrt(static_cast<double>(kWQubits)));
    return normalized(alpha);
}

sim::Statevector prepare_w_like(const WAmplitudes &alpha) {
    std::vector<Complex> amps(kWDim);
    for (std::size_t i = 0; i < kWQubits; ++i) {
        amps[excitation_index(i)] = alpha.alpha()[i];
    }
    return sim::Statevector(kWQubits, std::move(amps));
}

double success_probability(const sim::Statevector &state) {
    if (state.qubit_count() != kWQubits) {
        throw InvalidArgument("success_probability: expected an 8-qubit state");
    }
    double p = 0.0;
    for (std::size_t i = 0; i < kWQubits; ++i) {
        p += std::norm(state[excitation_index(i)]);
    }
    return p;
}

sim::Statevector sample_state(const GeneratorFamily &family, Rng &rng) {
    std::array<Complex, kWQubits> alpha;
    std::array<double, kWQubits> mags;
    for (std::size_t i = 0; i < kWQubits; ++i) {
        mags[i] = family.magnitude_profile[i] *
                  std::max(0.05, 1.0 + family.magnitude_spread * rng.normal());
    }
    for (std::size_t i = 0; i < kWQubits; ++i) {
        const double phase =
            family.phase_profile[i] + family.phase_spread * (2.0 * rng.uniform() - 1.0);
        alpha[i] = std::polar(mags[i], phase);
    }
    sim::Statevector state = prepare_w_like(WAmplitudes::normalized(alpha));
    if (family.entangler.empty()) {
        return state;
    }
    std::vector<double> params(family.param_distribution.size());
    if (params.size() != family.entangler.param_count()) {
        throw InvalidArgument("GeneratorFamily " + family.name +
                              ": param_distribution does not match entangler slots");
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
        const SlotDistribution &d = family.param_distribution[k];
        params[k] = d.mean + d.spread * (2.0 * rng.uniform() - 1.0);
    }
    return sim::run_circuit(state, family.entangler, params);
}

Dataset generate_dataset(std::span<const GeneratorFamily> families, std::size_t per_class,
                         std::uint64_t seed) {
    if (per_class == 0) {
        throw InvalidArgument("generate_dataset: per_class must be at least 1");
    }
    Dataset ds;
    ds.seed = seed;
    ds.samples.reserve(families.size() * per_class);
    for (const GeneratorFamily &family : families) {
        if (family.class_id >= kNumClasses) {
            throw InvalidArgument("generate_dataset: class id out of range in " + family.name);
        }
        for (std::size_t k = 0; k < per_class; ++k) {
            Rng rng = Rng::substream(seed, (std::uint64_t{family.class_id} << 32) | k);
            bool accepted = false;
            for (int attempt = 0; attempt < kMaxRetries && !accepted; ++attempt) {
                sim::Statevector state = sample_state(family, rng);
                if (success_probability(state) >= kSuccessFloor) {
                    ds.samples.push_back({std::move(state), family.class_id});
                    accepted = true;
                }
            }
            if (!accepted) {
                throw GenerationError("generator family '" + family.name + "' (class " +
                                      std::to_string(family.class_id) +
                                      ") missed the success-probability floor " +
                                      std::to_string(kMaxRetries) + " times in a row");
            }
        }
    }
    return ds;
}

std::array<std::size_t, kNumClasses> Dataset::per_class_counts() const {
    std::array<std::size_t, kNumClasses> counts{};
    for (const Sample &s : samples) {
        if (s.label < kNumClasses) {
            ++counts[s.label];
        }
    }
    return counts;
}

std::array<double, kNumClasses> min_success_by_class(const Dataset &ds) {
    std::array<double, kNumClasses> out;
    out.fill(std::numeric_limits<double>::quiet_NaN());
    for (const Sample &s : ds.samples) {
        const double p = success_probability(s.state);
        double &m = out[s.label];
        m = std::isnan(m) ? p : std::min(m, p);
    }
    return out;
}

Split stratified_split(const Dataset &ds, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) {
        throw InvalidArgument("stratified_split: test fraction must lie in [0, 1]");
    }
    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        const auto label = ds.samples[i].label;
        if (label >= kNumClasses) {
            throw InvalidArgument("stratified_split: label out of range");
        }
        by_class[label].push_back(i);
    }
    Split split;
    Rng rng = Rng::substream(seed, 0x5EED5B11ull);
    for (auto &idx : by_class) {
        std::shuffle(idx.begin(), idx.end(), rng.engine());
        const auto n_test =
            static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(idx.size())));
        split.test.insert(split.test.end(), idx.begin(), idx.begin() + n_test);
        split.train.insert(split.train.end(), idx.begin() + n_test, idx.end());
    }
    std::sort(split.test.begin(), split.test.end());
    std::sort(split.train.begin(), split.train.end());
    return split;
}

} // namespace pqnet::datagen
