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

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "commands.hpp"
#include "experiments.hpp"
#include "pqnet/error.hpp"
#include "pqnet/model/checkpoint.hpp"
#include "pqnet/rng.hpp"
#include "test_util.hpp"

using namespace pqnet;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result pqnet_run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

/// Shared tiny dataset, five samples per class.
class CliTest : public ::testing::Test {
  protected:
    static void SetUpTestSuite() {
        dir_ = new test::TempDir("cli");
        const Result r = pqnet_run({"--seed", "4", "gen-data", "--per-class", "5", "--out", data()});
        ASSERT_EQ(r.code, 0) << r.err;
    }
    static void TearDownTestSuite() {
        delete dir_;
        dir_ = nullptr;
    }
    static std::string data() { return (*dir_ / "tiny.pqwd").string(); }
    static std::string path(const std::string &name) { return (*dir_ / name).string(); }

    static test::TempDir *dir_;
};

test::TempDir *CliTest::dir_ = nullptr;

} // namespace

TEST_F(CliTest, MissingRequiredOptionIsUsageError) {
    EXPECT_EQ(pqnet_run({"gen-data"}).code, cli::kExitUsage);
    EXPECT_EQ(pqnet_run({}).code, cli::kExitUsage);
    EXPECT_EQ(pqnet_run({"frobnicate"}).code, cli::kExitUsage);
    EXPECT_EQ(pqnet_run({"--help"}).code, cli::kExitOk);
}

TEST_F(CliTest, GenDataIsReproducible) {
    const Result a = pqnet_run({"--seed", "4", "gen-data", "--per-class", "5", "--out", path("again.pqwd")});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(slurp(path("again.pqwd")), slurp(data()));
    const Result b = pqnet_run({"--seed", "4", "gen-data", "--per-class", "5", "--out", path("again.pqwd")});
    const auto crc_line = [](const std::string &s) { return s.substr(s.find("crc32")); };
    EXPECT_EQ(crc_line(a.out), crc_line(b.out));
}

TEST_F(CliTest, ZeroEpochCheckpointIsTheInitialization) {
    const Result r = pqnet_run({"--seeds", "3", "--out-dir", path("zero"), "train", "--data", data(),
                                "--epochs", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    Rng init = Rng::substream(3, 0x1417);
    const model::ModelState want = model::ModelState::initialize(model::default_kernel(), init);
    EXPECT_EQ(model::load_checkpoint(path("zero/model_seed3.pqmd")), want);
    EXPECT_TRUE(fs::exists(path("zero/metrics.csv")));
}

TEST_F(CliTest, TrainRerunsAreByteIdentical) {
    for (const char *sub : {"r1", "r2"}) {
        const Result r = pqnet_run({"--seeds", "0,1", "--out-dir", path(sub), "train", "--data", data(),
                                    "--epochs", "1", "--strategy", "s-mub"});
        ASSERT_EQ(r.code, 0) << r.err;
        EXPECT_NE(r.out.find("over 2 seeds"), std::string::npos) << r.out;
    }
    for (const char *f : {"metrics.csv", "model_seed0.pqmd", "model_seed1.pqmd"}) {
        EXPECT_EQ(slurp(path(std::string("r1/") + f)), slurp(path(std::string("r2/") + f))) << f;
    }
}

TEST_F(CliTest, ConfigFileValuesYieldToFlags) {
    std::ofstream(path("run.toml")) << "seeds = [7]\n[train]\nepochs = 0\n";
    Result r = pqnet_run({"--config", path("run.toml"), "--out-dir", path("cfg"), "train", "--data", data()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(path("cfg/model_seed7.pqmd")));
    r = pqnet_run({"--config", path("run.toml"), "--seeds", "2", "--out-dir", path("cfg2"), "train",
                   "--data", data()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(path("cfg2/model_seed2.pqmd")));
    EXPECT_FALSE(fs::exists(path("cfg2/model_seed7.pqmd")));
}

TEST_F(CliTest, BadValuesAreUsageErrors) {
    EXPECT_EQ(pqnet_run({"sweep", "--data", data(), "--axis", "wobble"}).code, cli::kExitUsage);
    EXPECT_EQ(pqnet_run({"train", "--data", data(), "--strategy", "mub"}).code, cli::kExitUsage);
    EXPECT_EQ(pqnet_run({"train", "--data", data(), "--shots", "-3"}).code, cli::kExitUsage);
    EXPECT_EQ(pqnet_run({"sweep", "--data", data(), "--axis", "shots", "--grid", "12.5"}).code,
              cli::kExitUsage);
    EXPECT_EQ(pqnet_run({"train", "--data", path("absent.pqwd")}).code, cli::kExitFailure);
}

TEST_F(CliTest, ReadoutAtHalfIsChance) {
    const Result r = pqnet_run({"--seeds", "0", "--out-dir", path("sw"), "sweep", "--data", data(),
                                "--epochs", "1", "--axis", "readout", "--grid", "0,0.5"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("readout 0.5 accuracy 0.1250"), std::string::npos) << r.out;
    const std::string csv = slurp(path("sw/sweep_readout.csv"));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "axis,level,seed,strategy,accuracy");
}

TEST_F(CliTest, FixedModelSweep) {
    EXPECT_EQ(pqnet_run({"sweep", "--data", data(), "--axis", "gate-2q", "--fixed-model"}).code,
              cli::kExitUsage);
    const Result r = pqnet_run({"--seeds", "0", "--out-dir", path("fm"), "sweep", "--data", data(),
                                "--epochs", "1", "--axis", "readout", "--grid", "0,0.5",
                                "--fixed-model"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("readout 0.5 accuracy 0.1250"), std::string::npos) << r.out;
}

TEST_F(CliTest, EvalReportsConfusion) {
    ASSERT_EQ(pqnet_run({"--seeds", "5", "--out-dir", path("ev"), "train", "--data", data(), "--epochs", "1"}).code, 0);
    const Result r = pqnet_run({"--seed", "5", "eval", "--data", data(), "--checkpoint",
                                path("ev/model_seed5.pqmd"), "--split", "all"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("samples 40 accuracy"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("confusion"), std::string::npos);
}

TEST_F(CliTest, BenchWritesJsonReport) {
    const Result r = pqnet_run({"bench", "--repeat", "5", "--duration-ms", "10", "--warmup-ms", "2",
                                "--samples", "16", "--batch-size", "8", "--out", path("bench.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(path("bench.json")));
    EXPECT_EQ(j["batch_size"], 8);
    EXPECT_EQ(j["parameters"]["shared"], 637);
    EXPECT_EQ(j["parameters"]["unshared_baseline"], 2392);
    for (const char *mode : {"batched", "sequential"}) {
        EXPECT_EQ(j["modes"][mode]["repetitions"].size(), 5u) << mode;
        EXPECT_GT(j["modes"][mode]["mean_samples_per_s"].get<double>(), 0.0);
    }
    EXPECT_EQ(pqnet_run({"bench", "--repeat", "4", "--out", path("b2.json")}).code, cli::kExitUsage);
}

TEST(Experiments, GridParsing) {
    const auto angles = cli::parse_grid(cli::SweepAxis::RxTheta, "0,0.1pi");
    ASSERT_EQ(angles.size(), 2u);
    EXPECT_NEAR(angles[1].value, 0.1 * 3.141592653589793, 1e-15);
    const auto shots = cli::parse_grid(cli::SweepAxis::Shots, "16,analytic");
    EXPECT_TRUE(shots[1].analytic);
    EXPECT_THROW(cli::parse_grid(cli::SweepAxis::Shots, "0"), InvalidArgument);
    EXPECT_THROW(cli::axis_from_string("nope"), InvalidArgument);
}

TEST(Experiments, PairedTTest) {
    const std::vector<double> a = {0.9, 0.92, 0.91, 0.95, 0.93};
    const std::vector<double> b = {0.8, 0.81, 0.84, 0.83, 0.8};
    EXPECT_LT(cli::paired_t_pvalue(a, b), 0.001);
    EXPECT_GT(cli::paired_t_pvalue(b, a), 0.999);
    const auto s = cli::summarize(a);
    EXPECT_NEAR(s.mean, 0.922, 1e-12);
}
