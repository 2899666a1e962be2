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

#include <cstdint>
#include <random>

namespace pqnet {

/// Seeded pseudo-random stream. All randomness in the library flows through
/// explicit instances of this type; there is no global generator.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    /// Independent stream derived from (seed, stream_id). Used to give each
    /// task (sample, sweep point, seed) its own stream.
    static Rng substream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal draw.
    double normal() { return normal_(engine_); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    std::mt19937_64 &engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace pqnet
