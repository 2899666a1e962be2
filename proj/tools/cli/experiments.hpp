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
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pqnet/datagen.hpp"
#include "pqnet/model/model.hpp"
#include "pqnet/model/train.hpp"

namespace pqnet::cli {

/// Everything a command needs. Unset fields keep the TrainConfig defaults.
struct ExperimentConfig {
    model::TrainConfig train;
    std::filesystem::path data;
    std::filesystem::path out_dir = ".";
    /// Trajectories per patch when scoring a model under gate noise.
    std::uint32_t eval_trajectories = 64;
    /// Train once per seed without the swept noise and score every level on
    /// that model. Measurement axes only; the default retrains per level.
    bool fixed_model = false;
};

/// Mean and sample standard deviation (n - 1) of a list of accuracies.
struct Summary {
    std::vector<double> values;
    double mean = 0.0;
    double stddev = 0.0;
};

Summary summarize(std::vector<double> values);

/// One-sided paired t-test of mean(a - b) > 0. Returns the p-value; 1 when
/// every difference is zero and the test is undefined.
double paired_t_pvalue(std::span<const double> a, std::span<const double> b);

using Progress = std::function<void(std::string_view)>;

struct SeedRun {
    std::uint64_t seed = 0;
    model::TrainResult result;
    double accuracy = 0.0; ///< final test accuracy
};

struct MultiSeedRun {
    std::vector<SeedRun> runs;
    std::vector<model::EpochMetrics> history; ///< all seeds, in seed order
    Summary accuracy;
};

/// Final test accuracy of a trained run. Under gate noise the model is scored
/// with `eval_trajectories` trajectories per patch.
double final_accuracy(const datagen::Dataset &ds, const model::TrainResult &run,
                      const model::TrainConfig &cfg, std::uint64_t seed,
                      std::uint32_t eval_trajectories);

/// Trains one model per seed of `cfg.seeds`.
MultiSeedRun train_seeds(const datagen::Dataset &ds, const model::TrainConfig &cfg,
                         std::uint32_t eval_trajectories, const sim::Circuit &kernel,
                         const Progress &progress = {});

enum class SweepAxis { RxTheta, Depol, Gate1q, Gate2q, GateBoth, Shots, Readout };

std::string_view to_string(SweepAxis axis);
/// Throws InvalidArgument on an unknown name.
SweepAxis axis_from_string(std::string_view name);

/// Shots and readout. Only these axes can be swept on a fixed model.
bool measurement_axis(SweepAxis axis);

/// A grid point. Angles accept a "pi" suffix ("0.1pi"); shots accept "analytic".
struct SweepLevel {
    std::string label;
    double value = 0.0;
    bool analytic = false;
};

std::vector<SweepLevel> parse_grid(SweepAxis axis, std::string_view grid);
std::string default_grid(SweepAxis axis);

/// Copy of `cfg` with the noise of one grid point applied. gate-both sets
/// gate_2q_p = v and gate_1q_theta = v * pi.
model::TrainConfig apply_level(const model::TrainConfig &cfg, SweepAxis axis,
                               const SweepLevel &level);

struct SweepPoint {
    SweepAxis axis = SweepAxis::RxTheta;
    std::string level;
    std::uint64_t seed = 0;
    measure::Strategy strategy = measure::Strategy::AMub;
    double accuracy = 0.0;
};

struct SweepOptions {
    SweepAxis axis = SweepAxis::RxTheta;
    std::vector<SweepLevel> grid;
    model::TrainConfig base;
    std::uint32_t eval_trajectories = 64;
    /// Train once per seed without the swept noise and score every level on
    /// that model. Measurement axes only; the default retrains per level.
    bool fixed_model = false;
};

/// Rows ordered by grid point, then seed.
std::vector<SweepPoint> run_sweep(const datagen::Dataset &ds, const SweepOptions &options,
                                  const sim::Circuit &kernel, const Progress &progress = {});

/// Evaluates already trained models at every level of a measurement axis.
/// Throws InvalidArgument for other axes.
std::vector<SweepPoint> sweep_trained(const datagen::Dataset &ds, std::span<const SeedRun> runs,
                                      const SweepOptions &options, const Progress &progress = {});

/// Header: axis,level,seed,strategy,accuracy
void write_sweep_csv(std::ostream &out, std::span<const SweepPoint> rows);
void write_sweep_csv(const std::filesystem::path &path, std::span<const SweepPoint> rows);

/// Accuracies of one level, in row order.
std::vector<double> level_accuracies(std::span<const SweepPoint> rows, std::string_view level);

} // namespace pqnet::cli
