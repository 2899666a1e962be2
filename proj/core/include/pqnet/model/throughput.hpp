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

#include <chrono>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "pqnet/model/model.hpp"
#include "pqnet/sim/state.hpp"

namespace pqnet::model {

enum class ThroughputMode { Batched, Sequential };

std::string_view to_string(ThroughputMode mode);

struct ThroughputOptions {
    std::size_t batch_size = 32;
    std::chrono::milliseconds duration{500}; ///< measured time per repetition
    std::chrono::milliseconds warmup{100};
    std::size_t repetitions = 5;
};

struct ThroughputReport {
    ThroughputMode mode = ThroughputMode::Batched;
    std::size_t batch_size = 0;
    double mean = 0.0; ///< samples per second
    double stddev = 0.0;
    std::vector<double> repetitions;
};

/// Noise-free inference throughput over `samples`, cycled in batches of
/// options.batch_size. Sequential mode runs the same batches through
/// sequential_baseline_forward. Throws InvalidArgument for fewer than 5
/// repetitions or an empty sample set.
ThroughputReport bench_throughput(const ModelState &model, std::span<const sim::Statevector> samples,
                                  ThroughputMode mode, const ThroughputOptions &options = {});

} // namespace pqnet::model
