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


#include "pqnet/model/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "pqnet/error.hpp"

namespace pqnet::model {

namespace {

constexpr std::uint64_t kInitTag = 0x1417;
constexpr std::uint64_t kShuffleTag = 0x5F1E;
constexpr std::uint64_t kTrainNoiseTag = 0x7A19;
constexpr std::uint64_t kEvalTag = 0xE7A1;
constexpr std::uint64_t kDataNoiseTag = 0xDA7A;
constexpr std::size_t kEvalChunk = 256;

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
    return seed ^ (salt * 0x9E3779B97F4A7C15ull);
}

PatchBatch gather(const PreparedData &data, std::span<const std::size_t> idx,
                  std::vector<std::uint8_t> &labels) {
    std::vector<Grid> grids;
    grids.reserve(idx.size());
    labels.clear();
    for (std::size_t i : idx) {
        grids.push_back(data.grids[i]);
        labels.push_back(data.labels[i]);
    }
    return grid_patches(grids);
}

} // namespace

void TrainConfig::validate() const {
    if (batch_size == 0) {
        throw InvalidArgument("TrainConfig: batch_size must be positive");
    }
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw InvalidArgument("TrainConfig: learning_rate must be finite and non-negative");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(adam_epsilon > 0.0)) {
        throw InvalidArgument("TrainConfig: Adam hyperparameters out of range");
    }
    if (!(l2_lambda >= 0.0)) {
        throw InvalidArgument("TrainConfig: l2_lambda must be non-negative");
    }
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw InvalidArgument("TrainConfig: test_fraction must lie in (0, 1)");
    }
    measure.validate();
    noise.validate();
}

Adam::Adam(std::size_t size, double learning_rate, double beta1, double beta2, double epsilon)
    : lr_(learning_rate), b1_(beta1), b2_(beta2), eps_(epsilon), m_(size, 0.0), v_(size, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad) {
    if (params.size() != m_.size() || grad.size() != m_.size()) {
        throw InvalidArgument("Adam::step: size mismatch");
    }
    ++t_;
    const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = b1_ * m_[i] + (1.0 - b1_) * grad[i];
        v_[i] = b2_ * v_[i] + (1.0 - b2_) * grad[i] * grad[i];
        params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
    }
}

PreparedData prepare_inputs(const datagen::Dataset &ds, std::span<const std::size_t> indices,
                            const noise::NoiseConfig &noise, std::uint64_t seed) {
    noise.validate();
    PreparedData out;
    out.grids.reserve(indices.size());
    out.labels.reserve(indices.size());
    const std::uint64_t base = mix(seed, noise.rng_seed);
    for (std::size_t i : indices) {
        if (i >= ds.size()) {
            throw InvalidArgument("prepare_inputs: sample index out of range");
        }
        const datagen::Sample &s = ds.samples[i];
        if (!noise.has_data_noise()) {
            out.grids.push_back(complex_to_grid(s.state.amplitudes()));
        } else {
            sim::StateBatch b = sim::StateBatch::from_states(std::span(&s.state, 1));
            if (noise.data_rx_theta != 0.0) {
                noise::apply_data_rx(b, noise.data_rx_theta);
            }
            if (noise.data_depol_p != 0.0) {
                Rng rng = Rng::substream(base, (kDataNoiseTag << 32) | i);
                noise::apply_data_depolarizing(b, noise.data_depol_p, rng);
            }
            out.grids.push_back(complex_to_grid(b.row(0)));
        }
        out.labels.push_back(s.label);
    }
    return out;
}

Evaluation evaluate(const ModelState &model, const PreparedData &data,
                    const measure::MeasureConfig &measure, const noise::NoiseConfig &noise,
                    std::uint64_t seed) {
    if (data.grids.size() != data.labels.size()) {
        throw InvalidArgument("evaluate: grids and labels differ in length");
    }
    Rng rng = Rng::substream(mix(mix(seed, noise.rng_seed), measure.rng_seed + 1), kEvalTag);
    ForwardContext ctx{measure, noise, {}, measure::Phase::Inference};
    Evaluation ev;
    std::vector<std::size_t> idx;
    std::vector<std::uint8_t> labels;
    for (std::size_t start = 0; start < data.grids.size(); start += kEvalChunk) {
        const std::size_t end = std::min(data.grids.size(), start + kEvalChunk);
        idx.resize(end - start);
        std::iota(idx.begin(), idx.end(), start);
        const PatchBatch patches = gather(data, idx, labels);
        const HeadOutput out = apply_head(pqeu_forward(patches, model, ctx, rng), model);
        const auto pred = predict(out);
        for (std::size_t b = 0; b < pred.size(); ++b) {
            ++ev.confusion[labels[b]][pred[b]];
        }
    }
    ev.total = data.grids.size();
    std::size_t hits = 0;
    for (std::size_t k = 0; k < kClassCount; ++k) {
        hits += ev.confusion[k][k];
    }
    ev.accuracy = ev.total ? static_cast<double>(hits) / static_cast<double>(ev.total) : 0.0;
    return ev;
}

Evaluation evaluate(const ModelState &model, const datagen::Dataset &ds,
                    std::span<const std::size_t> indices, const measure::MeasureConfig &measure,
                    const noise::NoiseConfig &noise, std::uint64_t seed) {
    return evaluate(model, prepare_inputs(ds, indices, noise, seed), measure, noise, seed);
}

TrainResult train(const datagen::Dataset &ds, const TrainConfig &cfg, std::uint64_t seed,
                  const sim::Circuit &kernel, const EpochCallback &on_epoch) {
    cfg.validate();
    TrainResult res;
    res.split = datagen::stratified_split(ds, cfg.test_fraction, seed);
    if (res.split.train.empty()) {
        throw TrainingError("train: empty training split");
    }
    const PreparedData train_set = prepare_inputs(ds, res.split.train, cfg.noise, seed);
    const PreparedData test_set = prepare_inputs(ds, res.split.test, cfg.noise, seed);

    Rng init_rng = Rng::substream(seed, kInitTag);
    res.model = ModelState::initialize(kernel, init_rng);
    Rng shuffle_rng = Rng::substream(seed, kShuffleTag);
    Rng noise_rng =
        Rng::substream(mix(mix(seed, cfg.noise.rng_seed), cfg.measure.rng_seed + 1), kTrainNoiseTag);

    std::vector<double> flat = res.model.flatten();
    Adam adam(flat.size(), cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.adam_epsilon);
    measure::MubSchedule schedule;

    const std::size_t n = train_set.grids.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::uint8_t> labels;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        for (std::size_t i = n; i > 1; --i) {
            std::swap(order[i - 1], order[shuffle_rng.below(i)]);
        }
        double loss_sum = 0.0;
        std::size_t steps = 0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t end = std::min(n, start + cfg.batch_size);
            const PatchBatch patches =
                gather(train_set, std::span(order).subspan(start, end - start), labels);
            const ForwardContext ctx{cfg.measure, cfg.noise, schedule, measure::Phase::Training};
            const LossAndGradient lg =
                loss_and_gradient(patches, labels, res.model, ctx, cfg.l2_lambda, noise_rng);
            const bool grad_ok = std::all_of(lg.gradient.begin(), lg.gradient.end(),
                                             [](double g) { return std::isfinite(g); });
            if (!std::isfinite(lg.loss) || !grad_ok) {
                std::ostringstream msg;
                msg << "train: non-finite " << (std::isfinite(lg.loss) ? "gradient" : "loss")
                    << " at seed " << seed << ", epoch " << epoch << ", step " << steps
                    << " (loss = " << lg.loss << ", lr = " << cfg.learning_rate << ")";
                throw TrainingError(msg.str());
            }
            adam.step(flat, lg.gradient);
            res.model.assign(flat);
            schedule.advance();
            loss_sum += lg.loss;
            ++steps;
        }
        EpochMetrics m;
        m.epoch = epoch;
        m.seed = seed;
        m.strategy = cfg.measure.strategy;
        m.train_loss = loss_sum / static_cast<double>(steps);
        m.test_accuracy = test_set.grids.empty() || !cfg.track_test_accuracy
                              ? std::numeric_limits<double>::quiet_NaN()
                              : evaluate(res.model, test_set, cfg.measure, cfg.noise,
                                         mix(seed, epoch))
                                    .accuracy;
        res.history.push_back(m);
        if (on_epoch && !on_epoch(m)) {
            break;
        }
    }
    return res;
}

} // namespace pqnet::model
