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

#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "pqnet/error.hpp"

namespace pqnet::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string &text, std::string_view what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != text.size() || !std::isfinite(v)) {
        throw InvalidArgument("sweep grid: '" + text + "' is not a valid " + std::string(what));
    }
    return v;
}

bool is_angle(SweepAxis axis) { return axis == SweepAxis::RxTheta || axis == SweepAxis::Gate1q; }

} // namespace

Summary summarize(std::vector<double> values) {
    Summary s;
    s.values = std::move(values);
    const auto n = static_cast<double>(s.values.size());
    if (s.values.empty()) {
        return s;
    }
    s.mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / n;
    if (s.values.size() > 1) {
        double ss = 0.0;
        for (double v : s.values) {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.stddev = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

double paired_t_pvalue(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw InvalidArgument("paired_t_pvalue: need two equally long samples of size >= 2");
    }
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        d[i] = a[i] - b[i];
    }
    const Summary s = summarize(d);
    if (s.stddev == 0.0) {
        return s.mean > 0.0 ? 0.0 : 1.0;
    }
    const double t = s.mean / (s.stddev / std::sqrt(static_cast<double>(d.size())));
    const boost::math::students_t dist(static_cast<double>(d.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, t));
}

double final_accuracy(const datagen::Dataset &ds, const model::TrainResult &run,
                      const model::TrainConfig &cfg, std::uint64_t seed,
                      std::uint32_t eval_trajectories) {
    const bool gated = cfg.noise.has_gate_noise();
    if (!gated && cfg.track_test_accuracy && !run.history.empty() &&
        run.history.size() == cfg.epochs) {
        return run.history.back().test_accuracy;
    }
    noise::NoiseConfig noise = cfg.noise;
    if (gated) {
        noise.gate_trajectories = eval_trajectories;
    }
    return model::evaluate(run.model, ds, run.split.test, cfg.measure, noise, seed).accuracy;
}

MultiSeedRun train_seeds(const datagen::Dataset &ds, const model::TrainConfig &cfg,
                         std::uint32_t eval_trajectories, const sim::Circuit &kernel,
                         const Progress &progress) {
    MultiSeedRun out;
    std::vector<double> acc;
    for (std::uint64_t seed : cfg.seeds) {
        SeedRun run;
        run.seed = seed;
        run.result = model::train(ds, cfg, seed, kernel, [&](const model::EpochMetrics &m) {
            if (progress) {
                std::ostringstream msg;
                msg << "seed " << seed << " epoch " << m.epoch << " loss " << m.train_loss
                    << " acc " << m.test_accuracy;
                progress(msg.str());
            }
            return true;
        });
        run.accuracy = final_accuracy(ds, run.result, cfg, seed, eval_trajectories);
        out.history.insert(out.history.end(), run.result.history.begin(),
                           run.result.history.end());
        acc.push_back(run.accuracy);
        out.runs.push_back(std::move(run));
    }
    out.accuracy = summarize(std::move(acc));
    return out;
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::RxTheta:
        return "rx-theta";
    case SweepAxis::Depol:
        return "depol";
    case SweepAxis::Gate1q:
        return "gate-1q";
    case SweepAxis::Gate2q:
        return "gate-2q";
    case SweepAxis::GateBoth:
        return "gate-both";
    case SweepAxis::Shots:
        return "shots";
    case SweepAxis::Readout:
        return "readout";
    }
    return "?";
}

SweepAxis axis_from_string(std::string_view name) {
    for (SweepAxis a : {SweepAxis::RxTheta, SweepAxis::Depol, SweepAxis::Gate1q,
                        SweepAxis::Gate2q, SweepAxis::GateBoth, SweepAxis::Shots,
                        SweepAxis::Readout}) {
        if (to_string(a) == name) {
            return a;
        }
    }
    throw InvalidArgument("unknown sweep axis '" + std::string(name) +
                          "' (expected rx-theta, depol, gate-1q, gate-2q, gate-both, shots or "
                          "readout)");
}

bool measurement_axis(SweepAxis axis) { return axis == SweepAxis::Shots || axis == SweepAxis::Readout; }

std::vector<SweepLevel> parse_grid(SweepAxis axis, std::string_view grid) {
    std::vector<SweepLevel> out;
    std::size_t pos = 0;
    while (pos <= grid.size()) {
        const std::size_t comma = std::min(grid.find(',', pos), grid.size());
        const std::string item = trim(grid.substr(pos, comma - pos));
        pos = comma + 1;
        if (item.empty()) {
            throw InvalidArgument("sweep grid: empty entry in '" + std::string(grid) + "'");
        }
        SweepLevel lv;
        lv.label = item;
        if (axis == SweepAxis::Shots && item == "analytic") {
            lv.analytic = true;
        } else if (is_angle(axis) && item.ends_with("pi")) {
            const std::string head = item.substr(0, item.size() - 2);
            lv.value = (head.empty() ? 1.0 : parse_number(head, "angle")) * std::numbers::pi;
        } else {
            lv.value = parse_number(item, axis == SweepAxis::Shots ? "shot count" : "level");
        }
        if (axis == SweepAxis::Shots && !lv.analytic &&
            (lv.value < 1.0 || lv.value != std::floor(lv.value))) {
            throw InvalidArgument("sweep grid: shot count must be a positive integer, got " + item);
        }
        out.push_back(std::move(lv));
    }
    return out;
}

std::string default_grid(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::RxTheta:
        return "0,0.05pi,0.1pi,0.2pi,0.3pi";
    case SweepAxis::Depol:
        return "0,0.01,0.02,0.05,0.1";
    case SweepAxis::Gate1q:
        return "0,0.1pi,0.2pi,0.3pi";
    case SweepAxis::Gate2q:
    case SweepAxis::GateBoth:
        return "0,0.1,0.2,0.3";
    case SweepAxis::Shots:
        return "16,64,256,1024,analytic";
    case SweepAxis::Readout:
        return "0,0.1,0.2,0.3,0.4,0.5";
    }
    return {};
}

model::TrainConfig apply_level(const model::TrainConfig &cfg, SweepAxis axis,
                               const SweepLevel &level) {
    model::TrainConfig c = cfg;
    switch (axis) {
    case SweepAxis::RxTheta:
        c.noise.data_rx_theta = level.value;
        break;
    case SweepAxis::Depol:
        c.noise.data_depol_p = level.value;
        break;
    case SweepAxis::Gate1q:
        c.noise.gate_1q_theta = level.value;
        break;
    case SweepAxis::Gate2q:
        c.noise.gate_2q_p = level.value;
        break;
    case SweepAxis::GateBoth:
        c.noise.gate_2q_p = level.value;
        c.noise.gate_1q_theta = level.value * std::numbers::pi;
        break;
    case SweepAxis::Shots:
        c.measure.shots = level.analytic
                              ? measure::kAnalytic
                              : measure::ShotCount(static_cast<std::uint64_t>(level.value));
        break;
    case SweepAxis::Readout:
        c.measure.p_measure = level.value;
        break;
    }
    c.validate();
    return c;
}

std::vector<SweepPoint> run_sweep(const datagen::Dataset &ds, const SweepOptions &options,
                                  const sim::Circuit &kernel, const Progress &progress) {
    if (options.grid.empty()) {
        throw InvalidArgument("run_sweep: empty grid");
    }
    // Validate every level up front so a typo fails before any training.
    for (const SweepLevel &lv : options.grid) {
        (void)apply_level(options.base, options.axis, lv);
    }
    const auto report = [&](const SweepPoint &p) {
        if (progress) {
            std::ostringstream msg;
            msg << to_string(p.axis) << " " << p.level << " seed " << p.seed << " acc "
                << p.accuracy;
            progress(msg.str());
        }
    };
    if (options.fixed_model && !measurement_axis(options.axis)) {
        throw InvalidArgument("run_sweep: fixed-model sweeps need the shots or readout axis");
    }
    std::vector<SweepPoint> rows;
    if (!options.fixed_model) {
        for (const SweepLevel &lv : options.grid) {
            model::TrainConfig cfg = apply_level(options.base, options.axis, lv);
            cfg.track_test_accuracy = false;
            for (std::uint64_t seed : cfg.seeds) {
                const model::TrainResult run = model::train(ds, cfg, seed, kernel);
                SweepPoint p{options.axis, lv.label, seed, cfg.measure.strategy,
                             final_accuracy(ds, run, cfg, seed, options.eval_trajectories)};
                report(p);
                rows.push_back(std::move(p));
            }
        }
        return rows;
    }
    model::TrainConfig train_cfg = options.base;
    train_cfg.track_test_accuracy = false;
    std::vector<SeedRun> runs;
    for (std::uint64_t seed : train_cfg.seeds) {
        SeedRun run;
        run.seed = seed;
        run.result = model::train(ds, train_cfg, seed, kernel);
        runs.push_back(std::move(run));
    }
    return sweep_trained(ds, runs, options, progress);
}

std::vector<SweepPoint> sweep_trained(const datagen::Dataset &ds, std::span<const SeedRun> runs,
                                      const SweepOptions &options, const Progress &progress) {
    if (!measurement_axis(options.axis)) {
        throw InvalidArgument("sweep_trained: axis " + std::string(to_string(options.axis)) +
                              " changes the inputs and needs retraining");
    }
    for (const SweepLevel &lv : options.grid) {
        (void)apply_level(options.base, options.axis, lv);
    }
    std::vector<std::vector<SweepPoint>> by_level(options.grid.size());
    for (const SeedRun &run : runs) {
        const model::PreparedData test =
            model::prepare_inputs(ds, run.result.split.test, options.base.noise, run.seed);
        for (std::size_t i = 0; i < options.grid.size(); ++i) {
            const model::TrainConfig cfg = apply_level(options.base, options.axis, options.grid[i]);
            noise::NoiseConfig noise = cfg.noise;
            if (noise.has_gate_noise()) {
                noise.gate_trajectories = options.eval_trajectories;
            }
            SweepPoint p{options.axis, options.grid[i].label, run.seed, cfg.measure.strategy,
                         model::evaluate(run.result.model, test, cfg.measure, noise, run.seed)
                             .accuracy};
            if (progress) {
                std::ostringstream msg;
                msg << to_string(p.axis) << " " << p.level << " seed " << p.seed << " acc "
                    << p.accuracy;
                progress(msg.str());
            }
            by_level[i].push_back(std::move(p));
        }
    }
    std::vector<SweepPoint> rows;
    for (auto &level : by_level) {
        std::move(level.begin(), level.end(), std::back_inserter(rows));
    }
    return rows;
}

void write_sweep_csv(std::ostream &out, std::span<const SweepPoint> rows) {
    out << "axis,level,seed,strategy,accuracy\n";
    out.precision(17);
    for (const SweepPoint &p : rows) {
        out << to_string(p.axis) << ',' << p.level << ',' << p.seed << ','
            << measure::to_string(p.strategy) << ',' << p.accuracy << '\n';
    }
}

void write_sweep_csv(const std::filesystem::path &path, std::span<const SweepPoint> rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    write_sweep_csv(out, rows);
    if (!out) {
        throw Error("write failed: " + path.string());
    }
}

std::vector<double> level_accuracies(std::span<const SweepPoint> rows, std::string_view level) {
    std::vector<double> out;
    for (const SweepPoint &p : rows) {
        if (p.level == level) {
            out.push_back(p.accuracy);
        }
    }
    return out;
}

} // namespace pqnet::cli
