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
#include <functional>
#include <span>
#include <vector>

#include "pqnet/datagen.hpp"
#include "pqnet/measure.hpp"
#include "pqnet/model/model.hpp"
#include "pqnet/model/pipeline.hpp"
#include "pqnet/noise.hpp"

namespace pqnet::model {

struct TrainConfig {
    std::size_t batch_size = 32;
    double learning_rate = 0.002;
    std::size_t epochs = 40;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    double l2_lambda = 1e-4;
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
    double test_fraction = 0.2;
    /// Evaluate the test split after every epoch (NaN in the metrics otherwise).
    bool track_test_accuracy = true;
    measure::MeasureConfig measure;
    noise::NoiseConfig noise;

    void validate() const;
};

/// Adam with bias correction over a flat parameter vector.
class Adam {
  public:
    Adam(std::size_t size, double learning_rate, double beta1, double beta2, double epsilon);

    void step(std::span<double> params, std::span<const double> grad);
    std::uint64_t steps() const { return t_; }

  private:
    double lr_, b1_, b2_, eps_;
    std::uint64_t t_ = 0;
    std::vector<double> m_, v_;
};

struct EpochMetrics {
    std::size_t epoch = 0; ///< 1-based
    std::uint64_t seed = 0;
    measure::Strategy strategy = measure::Strategy::AMub;
    double train_loss = 0.0; ///< mean mini-batch loss over the epoch
    double test_accuracy = 0.0;
};

/// Grids of a dataset after data noise, with labels. Sample i is noised from
/// its own substream so the result does not depend on iteration order.
struct PreparedData {
    std::vector<Grid> grids;
    std::vector<std::uint8_t> labels;
};

PreparedData prepare_inputs(const datagen::Dataset &ds, std::span<const std::size_t> indices,
                            const noise::NoiseConfig &noise, std::uint64_t seed);

struct Evaluation {
    double accuracy = 0.0;
    std::array<std::array<std::size_t, kClassCount>, kClassCount> confusion{}; ///< [true][predicted]
    std::size_t total = 0;
};

/// Inference-phase accuracy on prepared inputs, processed in chunks. Gate,
/// shot and readout noise draw from the substream (seed, eval tag).
Evaluation evaluate(const ModelState &model, const PreparedData &data,
                    const measure::MeasureConfig &measure, const noise::NoiseConfig &noise,
                    std::uint64_t seed);

/// Convenience overload: data noise from `noise` is applied to the selected samples first.
Evaluation evaluate(const ModelState &model, const datagen::Dataset &ds,
                    std::span<const std::size_t> indices, const measure::MeasureConfig &measure,
                    const noise::NoiseConfig &noise, std::uint64_t seed);

struct TrainResult {
    ModelState model;
    std::vector<EpochMetrics> history;
    datagen::Split split;
};

/// Called after every epoch; returning false stops training early.
using EpochCallback = std::function<bool(const EpochMetrics &)>;

/// One training run for one seed. The seed fixes the split, initialization,
/// shuffling and every noise stream. Throws TrainingError on a non-finite loss.
TrainResult train(const datagen::Dataset &ds, const TrainConfig &cfg, std::uint64_t seed,
                  const sim::Circuit &kernel = default_kernel(),
                  const EpochCallback &on_epoch = {});

} // namespace pqnet::model
