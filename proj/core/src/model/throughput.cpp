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


#include "pqnet/model/throughput.hpp"

#include <cmath>

#include "pqnet/error.hpp"
#include "pqnet/model/pipeline.hpp"

namespace pqnet::model {

std::string_view to_string(ThroughputMode mode) {
    return mode == ThroughputMode::Batched ? "batched" : "sequential";
}

ThroughputReport bench_throughput(const ModelState &model, std::span<const sim::Statevector> samples,
                                  ThroughputMode mode, const ThroughputOptions &options) {
    if (samples.empty() || options.batch_size == 0) {
        throw InvalidArgument("bench_throughput: need samples and a positive batch size");
    }
    if (options.repetitions < 5) {
        throw InvalidArgument("bench_throughput: at least 5 repetitions are required");
    }
    using Clock = std::chrono::steady_clock;
    const ForwardContext ctx{};
    Rng rng(0);
    std::size_t cursor = 0;
    double sink = 0.0;

    // One batch per call, wrapping around the sample set.
    const auto run_batch = [&]() -> std::size_t {
        const std::size_t n = std::min(options.batch_size, samples.size() - cursor);
        const auto batch = samples.subspan(cursor, n);
        cursor = (cursor + n) % samples.size();
        if (mode == ThroughputMode::Batched) {
            sink += forward(batch, model, ctx, rng).logits[0];
        } else {
            sink += sequential_baseline_forward(batch, model, ctx, rng).output.logits[0];
        }
        return n;
    };
    const auto run_for = [&](std::chrono::milliseconds budget) {
        std::size_t done = 0;
        const auto start = Clock::now();
        auto now = start;
        do {
            done += run_batch();
            now = Clock::now();
        } while (now - start < budget);
        return static_cast<double>(done) / std::chrono::duration<double>(now - start).count();
    };

    ThroughputReport report;
    report.mode = mode;
    report.batch_size = options.batch_size;
    run_for(options.warmup);
    for (std::size_t i = 0; i < options.repetitions; ++i) {
        report.repetitions.push_back(run_for(options.duration));
    }
    double mean = 0.0;
    for (double v : report.repetitions) {
        mean += v;
    }
    mean /= static_cast<double>(report.repetitions.size());
    double var = 0.0;
    for (double v : report.repetitions) {
        var += (v - mean) * (v - mean);
    }
    report.mean = mean;
    report.stddev = std::sqrt(var / static_cast<double>(report.repetitions.size() - 1));
    if (!std::isfinite(sink)) {
        throw Error("bench_throughput: non-finite logits");
    }
    return report;
}

} // namespace pqnet::model
