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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pqnet/rng.hpp"
#include "pqnet/sim/circuit.hpp"
#include "pqnet/sim/state.hpp"

namespace pqnet::datagen {

using sim::Complex;

inline constexpr std::size_t kWQubits = 8;
inline constexpr std::size_t kWDim = std::size_t{1} << kWQubits;
inline constexpr std::size_t kNumClasses = 8;
inline constexpr double kSuccessFloor = 0.95;

/// Basis index of the state with only qubit `i` excited (|10000000> for i = 0).
constexpr std::size_t excitation_index(std::size_t i) { return std::size_t{1} << (kWQubits - 1 - i); }

/// Coefficients alpha_1..alpha_8 of a W-like state; unit norm within 1e-12.
class WAmplitudes {
  public:
    /// Throws InvalidArgument unless sum |alpha_i|^2 = 1 within 1e-12.
    explicit WAmplitudes(const std::array<Complex, kWQubits> &alpha);
    /// Rescales to unit norm; throws InvalidArgument for the zero vector.
    static WAmplitudes normalized(std::array<Complex, kWQubits> alpha);
    static WAmplitudes symmetric();

    const std::array<Complex, kWQubits> &alpha() const { return alpha_; }

  private:
    std::array<Complex, kWQubits> alpha_;
};

/// alpha_i on the i-th single-excitation basis state, zero elsewhere.
sim::Statevector prepare_w_like(const WAmplitudes &alpha);

/// Probability mass on the eight single-excitation basis states.
double success_probability(const sim::Statevector &state);

/// Mean and half-width of a uniform draw for one entangler parameter slot.
struct SlotDistribution {
    double mean;
    double spread;
};

/// Stand-in for one trained generative circuit: a seeded distribution over
/// W-like coefficients followed by a family-specific shallow entangling layout.
struct GeneratorFamily {
    std::uint8_t class_id = 0;
    std::string name;
    std::array<double, kWQubits> magnitude_profile{}; ///< relative mean |alpha_i|
    double magnitude_spread = 0.0;                    ///< relative jitter of |alpha_i|
    std::array<double, kWQubits> phase_profile{};     ///< mean arg(alpha_i)
    double phase_spread = 0.0;                        ///< half-width of phase jitter
    sim::Circuit entangler;                           ///< 8 qubits
    std::vector<SlotDistribution> param_distribution; ///< one entry per entangler slot
};

/// The eight families used for the identification experiments.
std::vector<GeneratorFamily> standard_families();

/// One draw from the family (no success-probability check).
sim::Statevector sample_state(const GeneratorFamily &family, Rng &rng);

struct Sample {
    sim::Statevector state;
    std::uint8_t label;
};

struct Dataset {
    static constexpr std::uint32_t kFormatVersion = 1;

    std::size_t qubit_count = kWQubits;
    std::vector<Sample> samples;
    std::optional<std::uint64_t> seed; ///< generation seed (not persisted)

    std::size_t size() const { return samples.size(); }
    std::array<std::size_t, kNumClasses> per_class_counts() const;
};

/// Retry budget per sample before generation fails.
inline constexpr int kMaxRetries = 100;

/// `per_class` samples from every family, each with success probability of at
/// least kSuccessFloor. Sample k of family c is drawn from the substream
/// (seed, c * 2^32 + k). Throws GenerationError naming a family that cannot
/// meet the floor within kMaxRetries draws.
Dataset generate_dataset(std::span<const GeneratorFamily> families, std::size_t per_class,
                         std::uint64_t seed);

/// Per-class minimum success probability (NaN for absent classes).
std::array<double, kNumClasses> min_success_by_class(const Dataset &ds);

/// Binary format: "PQWD", u32 version, u32 qubit_count, u64 sample_count, then per
/// sample a u8 label and 2^n (re, im) f64 pairs, then the CRC-32 of the sample
/// records. All integers little-endian.
std::vector<std::uint8_t> encode_dataset(const Dataset &ds);
/// Throws FormatError on bad magic, version, truncation, checksum or sample invariants.
Dataset decode_dataset(std::span<const std::uint8_t> bytes);

void save_dataset(const Dataset &ds, const std::filesystem::path &path);
Dataset load_dataset(const std::filesystem::path &path);

/// Stratified split: within each class, a seeded shuffle then the first
/// round(test_fraction * n_c) samples go to the test set.
struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};
Split stratified_split(const Dataset &ds, double test_fraction, std::uint64_t seed);

} // namespace pqnet::datagen
