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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numeric>

#include <CLI11.hpp>
#include <json.hpp>

#include "experiments.hpp"
#include "pqnet/checksum.hpp"
#include "pqnet/error.hpp"
#include "pqnet/ingest.hpp"
#include "pqnet/model/checkpoint.hpp"
#include "pqnet/model/metrics.hpp"
#include "pqnet/model/throughput.hpp"

namespace pqnet::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char *kDefaultDataset = "w8.pqwd";

/// Raw option values that need parsing after CLI11 has run.
struct RawOptions {
    std::vector<std::uint64_t> seeds;
    std::uint64_t seed = 0;
    std::string strategy = "a-mub";
    std::string shots = "analytic";
    std::string data_rx_theta = "0";
    std::string gate_1q_theta = "0";
    bool verbose = false;
};

struct State {
    ExperimentConfig cfg;
    RawOptions raw;
    std::ostream *out = nullptr;
    std::ostream *err = nullptr;
};

double parse_angle(const std::string &text) {
    return parse_grid(SweepAxis::RxTheta, text).front().value;
}

void finalize(State &st) {
    model::TrainConfig &t = st.cfg.train;
    const auto strategy = measure::strategy_from_string(st.raw.strategy);
    if (!strategy) {
        throw InvalidArgument("unknown strategy '" + st.raw.strategy +
                              "' (expected pauli-z, s-mub or a-mub)");
    }
    t.measure.strategy = *strategy;
    if (st.raw.shots == "analytic") {
        t.measure.shots = measure::kAnalytic;
    } else {
        const SweepLevel lv = parse_grid(SweepAxis::Shots, st.raw.shots).front();
        t.measure.shots = static_cast<std::uint64_t>(lv.value);
    }
    t.noise.data_rx_theta = parse_angle(st.raw.data_rx_theta);
    t.noise.gate_1q_theta = parse_angle(st.raw.gate_1q_theta);
    t.validate();
    if (st.cfg.eval_trajectories == 0) {
        throw InvalidArgument("--eval-trajectories must be positive");
    }
}

fs::path output_path(const State &st, const fs::path &p) {
    return p.is_absolute() ? p : st.cfg.out_dir / p;
}

void ensure_out_dir(const State &st) {
    if (!st.cfg.out_dir.empty()) {
        fs::create_directories(st.cfg.out_dir);
    }
}

/// Dataset path resolution: explicit path, else $PQ_DATA_DIR/<name>. A relative
/// path that does not exist locally is also looked up under $PQ_DATA_DIR.
fs::path resolve_input(const fs::path &given, const char *fallback_name) {
    const char *root = std::getenv("PQ_DATA_DIR");
    if (given.empty()) {
        if (!root) {
            throw InvalidArgument(std::string("no input given and PQ_DATA_DIR is unset (expected ") +
                                  fallback_name + ")");
        }
        return fs::path(root) / fallback_name;
    }
    if (given.is_relative() && !fs::exists(given) && root) {
        const fs::path alt = fs::path(root) / given;
        if (fs::exists(alt)) {
            return alt;
        }
    }
    return given;
}

datagen::Dataset load_data(const State &st) {
    const fs::path path = resolve_input(st.cfg.data, kDefaultDataset);
    try {
        return datagen::load_dataset(path);
    } catch (const Error &e) {
        throw Error("cannot load dataset " + path.string() + ": " + e.what());
    }
}

Progress progress_sink(const State &st) {
    if (!st.raw.verbose) {
        return {};
    }
    return [err = st.err](std::string_view line) { *err << line << '\n' << std::flush; };
}

std::string hex32(std::uint32_t v) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", v);
    return buf;
}

/// Options shared by train, eval and sweep.
void add_training_options(CLI::App *cmd, State &st) {
    model::TrainConfig &t = st.cfg.train;
    cmd->add_option("--data", st.cfg.data, "Dataset file (default $PQ_DATA_DIR/w8.pqwd)");
    cmd->add_option("--strategy", st.raw.strategy, "pauli-z, s-mub or a-mub")
        ->capture_default_str();
    cmd->add_option("--epochs", t.epochs, "Training epochs")->capture_default_str();
    cmd->add_option("--batch-size", t.batch_size, "Mini-batch size")->capture_default_str();
    cmd->add_option("--lr", t.learning_rate, "Adam learning rate")->capture_default_str();
    cmd->add_option("--l2", t.l2_lambda, "L2 penalty on all parameters")->capture_default_str();
    cmd->add_option("--test-fraction", t.test_fraction, "Held-out fraction per class")
        ->capture_default_str();
    cmd->add_option("--shots", st.raw.shots, "Shots per expectation or 'analytic'")
        ->capture_default_str();
    cmd->add_option("--p-measure", t.measure.p_measure, "Readout bit-flip probability")
        ->capture_default_str();
    cmd->add_option("--measure-seed", t.measure.rng_seed, "Seed salt for shot and readout noise")
        ->capture_default_str();
    cmd->add_option("--data-rx-theta", st.raw.data_rx_theta,
                    "Coherent R_x angle on the data (radians, or e.g. 0.1pi)")
        ->capture_default_str();
    cmd->add_option("--data-depol", t.noise.data_depol_p, "Depolarizing probability on the data")
        ->capture_default_str();
    cmd->add_option("--gate-1q-theta", st.raw.gate_1q_theta,
                    "R_x over-rotation after the kernel (radians, or e.g. 0.1pi)")
        ->capture_default_str();
    cmd->add_option("--gate-2q-p", t.noise.gate_2q_p, "Depolarizing probability per two-qubit gate")
        ->capture_default_str();
    cmd->add_option("--gate-trajectories", t.noise.gate_trajectories,
                    "Trajectories per patch while training under gate noise")
        ->capture_default_str();
    cmd->add_option("--eval-trajectories", st.cfg.eval_trajectories,
                    "Trajectories per patch when scoring under gate noise")
        ->capture_default_str();
    cmd->add_option("--noise-seed", t.noise.rng_seed, "Seed salt for data and gate noise")
        ->capture_default_str();
}

int cmd_gen_data(State &st, std::size_t per_class, const fs::path &out_file) {
    ensure_out_dir(st);
    const auto families = datagen::standard_families();
    const datagen::Dataset ds = datagen::generate_dataset(families, per_class, st.raw.seed);
    const fs::path path = output_path(st, out_file);
    datagen::save_dataset(ds, path);
    const auto bytes = datagen::encode_dataset(ds);
    std::ostream &out = *st.out;
    out << "wrote " << ds.size() << " samples (" << per_class << " per class, seed " << st.raw.seed
        << ") to " << path.string() << "\n";
    out << "crc32 " << hex32(crc32(bytes)) << "\n";
    const auto mins = datagen::min_success_by_class(ds);
    out << std::fixed << std::setprecision(6);
    for (std::size_t k = 0; k < mins.size(); ++k) {
        out << "class " << k << " (" << families[k].name << ") min success " << mins[k] << "\n";
    }
    return kExitOk;
}

int cmd_train(State &st) {
    finalize(st);
    ensure_out_dir(st);
    const datagen::Dataset ds = load_data(st);
    const MultiSeedRun runs = train_seeds(ds, st.cfg.train, st.cfg.eval_trajectories,
                                          model::default_kernel(), progress_sink(st));
    model::write_metrics_csv(output_path(st, "metrics.csv"), runs.history);
    std::ostream &out = *st.out;
    out << std::fixed << std::setprecision(4);
    for (const SeedRun &r : runs.runs) {
        const fs::path ckpt = output_path(st, "model_seed" + std::to_string(r.seed) + ".pqmd");
        model::save_checkpoint(r.result.model, ckpt);
        out << "seed " << r.seed << " accuracy " << r.accuracy << " checkpoint " << ckpt.string()
            << "\n";
    }
    out << "strategy " << measure::to_string(st.cfg.train.measure.strategy) << " accuracy "
        << runs.accuracy.mean << " +- " << runs.accuracy.stddev << " over "
        << runs.runs.size() << " seeds\n";
    return kExitOk;
}

int cmd_eval(State &st, const fs::path &checkpoint, const std::string &split) {
    finalize(st);
    const datagen::Dataset ds = load_data(st);
    const model::ModelState model = model::load_checkpoint(checkpoint);
    const std::uint64_t seed = st.cfg.train.seeds.front();
    std::vector<std::size_t> idx;
    if (split == "all") {
        idx.resize(ds.size());
        std::iota(idx.begin(), idx.end(), 0);
    } else {
        const datagen::Split s = datagen::stratified_split(ds, st.cfg.train.test_fraction, seed);
        idx = split == "train" ? s.train : s.test;
    }
    noise::NoiseConfig noise = st.cfg.train.noise;
    if (noise.has_gate_noise()) {
        noise.gate_trajectories = st.cfg.eval_trajectories;
    }
    const model::Evaluation ev =
        model::evaluate(model, ds, idx, st.cfg.train.measure, noise, seed);
    std::ostream &out = *st.out;
    out << "split " << split << " (seed " << seed << ") samples " << ev.total << " accuracy "
        << std::fixed << std::setprecision(4) << ev.accuracy << "\n";
    out << "confusion [true][predicted]\n";
    for (const auto &row : ev.confusion) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            out << (k ? " " : "") << std::setw(5) << row[k];
        }
        out << "\n";
    }
    return kExitOk;
}

int cmd_sweep(State &st, const std::string &axis_name, std::string grid, fs::path out_file,
              bool fixed_model) {
    finalize(st);
    ensure_out_dir(st);
    SweepOptions opt;
    opt.axis = axis_from_string(axis_name);
    opt.grid = parse_grid(opt.axis, grid.empty() ? default_grid(opt.axis) : grid);
    opt.base = st.cfg.train;
    opt.eval_trajectories = st.cfg.eval_trajectories;
    opt.fixed_model = fixed_model;
    const datagen::Dataset ds = load_data(st);
    const auto rows = run_sweep(ds, opt, model::default_kernel(), progress_sink(st));
    if (out_file.empty()) {
        out_file = "sweep_" + axis_name + ".csv";
    }
    const fs::path path = output_path(st, out_file);
    write_sweep_csv(path, rows);
    std::ostream &out = *st.out;
    out << std::fixed << std::setprecision(4);
    for (const SweepLevel &lv : opt.grid) {
        const Summary s = summarize(level_accuracies(rows, lv.label));
        out << axis_name << " " << lv.label << " accuracy " << s.mean << " +- " << s.stddev << "\n";
    }
    out << "wrote " << rows.size() << " rows to " << path.string() << "\n";
    return kExitOk;
}

struct BenchArgs {
    std::string mode = "both";
    std::size_t batch_size = 32;
    std::size_t repeat = 5;
    long duration_ms = 500;
    long warmup_ms = 100;
    std::size_t samples = 256;
    fs::path checkpoint;
    fs::path out = "bench.json";
};

int cmd_bench(State &st, const BenchArgs &a) {
    if (a.mode != "batched" && a.mode != "sequential" && a.mode != "both") {
        throw InvalidArgument("--mode must be batched, sequential or both");
    }
    ensure_out_dir(st);
    const std::uint64_t seed = st.cfg.train.seeds.empty() ? st.raw.seed : st.cfg.train.seeds.front();
    model::ModelState model;
    if (!a.checkpoint.empty()) {
        model = model::load_checkpoint(a.checkpoint);
    } else {
        Rng rng = Rng::substream(seed, 0xBE7C);
        model = model::ModelState::initialize(model::default_kernel(), rng);
    }
    const std::size_t per_class = std::max<std::size_t>(1, a.samples / datagen::kNumClasses);
    const datagen::Dataset ds =
        datagen::generate_dataset(datagen::standard_families(), per_class, seed);
    std::vector<sim::Statevector> states;
    for (const auto &s : ds.samples) {
        states.push_back(s.state);
    }
    model::ThroughputOptions opt;
    opt.batch_size = a.batch_size;
    opt.repetitions = a.repeat;
    opt.duration = std::chrono::milliseconds(a.duration_ms);
    opt.warmup = std::chrono::milliseconds(a.warmup_ms);

    const std::size_t shared = model.parameter_count();
    const std::size_t unshared = model::unshared_parameter_count(model.kernel);
    nlohmann::ordered_json report;
    report["batch_size"] = a.batch_size;
    report["parameters"] = {{"shared", shared},
                            {"unshared_baseline", unshared},
                            {"ratio", static_cast<double>(unshared) / static_cast<double>(shared)}};
    std::ostream &out = *st.out;
    out << std::fixed << std::setprecision(1);
    out << "parameters shared " << shared << " unshared baseline " << unshared << "\n";
    std::vector<model::ThroughputMode> modes;
    if (a.mode != "sequential") {
        modes.push_back(model::ThroughputMode::Batched);
    }
    if (a.mode != "batched") {
        modes.push_back(model::ThroughputMode::Sequential);
    }
    double batched = 0.0;
    double sequential = 0.0;
    for (model::ThroughputMode m : modes) {
        const model::ThroughputReport r = model::bench_throughput(model, states, m, opt);
        const std::string name(model::to_string(m));
        report["modes"][name] = {{"mean_samples_per_s", r.mean},
                                 {"stddev_samples_per_s", r.stddev},
                                 {"repetitions", r.repetitions}};
        (m == model::ThroughputMode::Batched ? batched : sequential) = r.mean;
        out << name << " " << r.mean << " +- " << r.stddev << " samples/s (" << r.repetitions.size()
            << " repetitions:";
        for (double v : r.repetitions) {
            out << " " << v;
        }
        out << ")\n";
    }
    if (batched > 0.0 && sequential > 0.0) {
        report["speedup"] = batched / sequential;
        out << std::setprecision(2) << "speedup " << batched / sequential << "x\n";
    }
    const fs::path path = output_path(st, a.out);
    std::ofstream f(path);
    if (!f) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    f << report.dump(2) << "\n";
    out << "wrote " << path.string() << "\n";
    return kExitOk;
}

struct IngestArgs {
    fs::path images;
    fs::path labels;
    std::vector<int> classes = {0, 1, 2, 3};
    std::size_t per_class = 0;
    double pedestal = 1e-3;
    fs::path out;
};

int cmd_ingest(State &st, const IngestArgs &a) {
    ensure_out_dir(st);
    const fs::path images = resolve_input(a.images, "mnist/t10k-images-idx3-ubyte.gz");
    const fs::path labels = resolve_input(a.labels, "mnist/t10k-labels-idx1-ubyte.gz");
    const ingest::IdxImageSet set = ingest::load_idx(images, labels);
    ingest::AdapterOptions opt;
    opt.classes.clear();
    for (int c : a.classes) {
        if (c < 0 || c > 255) {
            throw InvalidArgument("--classes entries must lie in [0, 255]");
        }
        opt.classes.push_back(static_cast<std::uint8_t>(c));
    }
    opt.per_class = a.per_class;
    opt.pedestal = a.pedestal;
    const datagen::Dataset ds = ingest::to_dataset(set, opt);
    const fs::path path = output_path(st, a.out);
    datagen::save_dataset(ds, path);
    const auto counts = ds.per_class_counts();
    std::ostream &out = *st.out;
    out << "read " << set.count << " images " << set.height << "x" << set.width << " from "
        << images.string() << "\n";
    for (std::size_t k = 0; k < opt.classes.size(); ++k) {
        out << "class " << k << " (digit " << int(opt.classes[k]) << ") " << counts[k]
            << " samples\n";
    }
    out << "wrote " << ds.size() << " samples to " << path.string() << " crc32 "
        << hex32(crc32(datagen::encode_dataset(ds))) << "\n";
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    State st;
    st.out = &out;
    st.err = &err;

    CLI::App app{"pqnet: shared-kernel quanvolutional classifier experiments"};
    app.name("pqnet");
    app.set_config("--config", "", "key = value configuration file (flags take precedence)");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seeds", st.raw.seeds, "Comma-separated seed list for training runs")
        ->delimiter(',');
    app.add_option("--seed", st.raw.seed, "Seed for data generation and single-seed commands")
        ->capture_default_str();
    app.add_option("--out-dir", st.cfg.out_dir, "Directory for output files")
        ->capture_default_str();
    app.add_flag("-v,--verbose", st.raw.verbose, "Report progress on stderr");

    std::size_t per_class = 2000;
    fs::path gen_out;
    auto *gen = app.add_subcommand("gen-data", "Generate the eight-class W-like state dataset");
    gen->add_option("--per-class", per_class, "Samples per class")->capture_default_str();
    gen->add_option("--out", gen_out, "Output dataset file")->required();

    auto *train = app.add_subcommand("train", "Train one model per seed");
    add_training_options(train, st);

    fs::path checkpoint;
    std::string split = "test";
    auto *eval = app.add_subcommand("eval", "Score a checkpoint");
    add_training_options(eval, st);
    eval->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
    eval->add_option("--split", split, "test, train or all")
        ->check(CLI::IsMember({"test", "train", "all"}))
        ->capture_default_str();

    std::string axis;
    std::string grid;
    fs::path sweep_out;
    bool fixed_model = false;
    auto *sweep = app.add_subcommand("sweep", "Accuracy across one noise axis");
    add_training_options(sweep, st);
    sweep->add_option("--axis", axis, "rx-theta, depol, gate-1q, gate-2q, gate-both, shots, readout")
        ->required();
    sweep->add_option("--grid", grid, "Comma-separated levels (default depends on the axis)");
    sweep->add_option("--out", sweep_out, "CSV file (default sweep_<axis>.csv)");
    sweep->add_flag("--fixed-model", fixed_model,
                    "Shots and readout only: train once per seed and score every level");

    BenchArgs bench_args;
    auto *bench = app.add_subcommand("bench", "Batched versus sequential throughput");
    bench->add_option("--mode", bench_args.mode, "batched, sequential or both")
        ->capture_default_str();
    bench->add_option("--batch-size", bench_args.batch_size)->capture_default_str();
    bench->add_option("--repeat", bench_args.repeat, "Timed repetitions")->capture_default_str();
    bench->add_option("--duration-ms", bench_args.duration_ms, "Time per repetition")
        ->capture_default_str();
    bench->add_option("--warmup-ms", bench_args.warmup_ms)->capture_default_str();
    bench->add_option("--samples", bench_args.samples, "Generated input samples")
        ->capture_default_str();
    bench->add_option("--checkpoint", bench_args.checkpoint, "Model to run (default: random init)");
    bench->add_option("--out", bench_args.out, "JSON report")->capture_default_str();

    IngestArgs ingest_args;
    auto *ingest_cmd = app.add_subcommand("ingest-mnist", "Convert MNIST IDX files to a dataset");
    ingest_cmd->add_option("--images", ingest_args.images,
                           "Image IDX file (default $PQ_DATA_DIR/mnist/t10k-images-idx3-ubyte.gz)");
    ingest_cmd->add_option("--labels", ingest_args.labels,
                           "Label IDX file (default $PQ_DATA_DIR/mnist/t10k-labels-idx1-ubyte.gz)");
    ingest_cmd->add_option("--classes", ingest_args.classes, "Digits to keep, in class order")
        ->delimiter(',');
    ingest_cmd->add_option("--per-class", ingest_args.per_class, "Images per class (0 keeps all)")
        ->capture_default_str();
    ingest_cmd->add_option("--pedestal", ingest_args.pedestal, "Offset added to every pixel")
        ->capture_default_str();
    ingest_cmd->add_option("--out", ingest_args.out, "Output dataset file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        // A lone --seed narrows training to that seed; --seeds wins when both are given.
        if (st.raw.seeds.empty() && app.count("--seed") > 0) {
            st.raw.seeds = {st.raw.seed};
        }
        if (!st.raw.seeds.empty()) {
            st.cfg.train.seeds = st.raw.seeds;
        }
        if (*gen) {
            return cmd_gen_data(st, per_class, gen_out);
        }
        if (*train) {
            return cmd_train(st);
        }
        if (*eval) {
            return cmd_eval(st, checkpoint, split);
        }
        if (*sweep) {
            return cmd_sweep(st, axis, grid, sweep_out, fixed_model);
        }
        if (*bench) {
            return cmd_bench(st, bench_args);
        }
        if (*ingest_cmd) {
            return cmd_ingest(st, ingest_args);
        }
    } catch (const InvalidArgument &e) {
        err << "pqnet: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "pqnet: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

} // namespace pqnet::cli
