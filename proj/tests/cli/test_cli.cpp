// Copyright 2026 The radar-anomaly Authors
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


// Runs the radar-anomaly executable end to end.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "radar_anomaly/dataset_io.hpp"
#include "radar_anomaly/pipeline.hpp"
#include "radar_anomaly/synthgen.hpp"

namespace radar {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("radar_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunResult run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string command = std::string(RADAR_CLI_PATH) + " " + args + " >" + out.string() +
                                " 2>" + err.string();
    const int status = std::system(command.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::vector<RadarFrame> small_dataset(std::size_t steps = 20) {
  synthgen::SceneConfig sc;
  sc.frames = steps;
  return synthgen::generate_sequence(sc).frames;
}

TEST_F(Cli, HelpMatchesGolden) {
  std::string help;
  for (const char* sub : {"", "generate ", "train ", "eval ", "bench ", "render "}) {
    const RunResult r = run(std::string(sub) + "--help");
    ASSERT_EQ(r.code, 0) << sub;
    help += "$ radar-anomaly " + std::string(sub) + "--help\n" + r.out;
  }
  const std::string golden = slurp(fs::path(RADAR_GOLDEN_DIR) / "cli_help.txt");
  EXPECT_EQ(help, golden);
  for (const char* flag : {"--config", "--dataset", "--checkpoint", "--out", "--seed", "--variant",
                           "--frame"}) {
    EXPECT_NE(help.find(flag), std::string::npos) << flag;
  }
}

TEST_F(Cli, UsageErrorsExitWithOne) {
  for (const char* args : {"", "frobnicate", "generate", "train --dataset x.csv --out o --variant cnn",
                           "render --dataset x.csv --out o --frame abc", "generate --out o --bogus"}) {
    const RunResult r = run(args);
    EXPECT_EQ(r.code, 1) << args;
    EXPECT_EQ(count(r.err, "\n"), 1u) << args << ": " << r.err;
  }
}

TEST_F(Cli, ValidationErrorsExitWithTwo) {
  std::ofstream(path("bad.json")) << "{\"scene\": {\"frames\": 0}}";
  std::ofstream(path("junk.json")) << "{not json";
  std::ofstream(path("unknown.json")) << "{\"scenery\": {}}";
  std::ofstream(path("bad.csv")) << "frame_id,wrong\n";
  for (const std::string args :
       {"generate --out " + path("g") + " --config " + path("bad.json"),
        "generate --out " + path("g") + " --config " + path("junk.json"),
        "generate --out " + path("g") + " --config " + path("unknown.json"),
        "generate --out " + path("g") + " --config " + path("missing.json"),
        "train --dataset " + path("missing.csv") + " --out " + path("t") + " --variant mfg",
        "train --dataset " + path("bad.csv") + " --out " + path("t") + " --variant mfg",
        "eval --dataset " + path("bad.csv") + " --checkpoint " + path("nockpt") + " --out " + path("e"),
        "render --dataset " + path("bad.csv") + " --out " + path("r") + " --frame 0"}) {
    const RunResult r = run(args);
    EXPECT_EQ(r.code, 2) << args;
    EXPECT_EQ(count(r.err, "\n"), 1u) << args << ": " << r.err;
    EXPECT_EQ(r.err.rfind("radar-anomaly: error: ", 0), 0u) << r.err;
  }
}

TEST_F(Cli, UnwritableOutputExitsWithThree) {
  std::ofstream(path("cfg.json")) << "{\"scene\": {\"frames\": 2}}";
  const RunResult r = run("generate --config " + path("cfg.json") + " --out /proc/radar_anomaly_out");
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_EQ(count(r.err, "\n"), 1u) << r.err;
}

TEST_F(Cli, GenerateTwiceWithSameSeedIsIdentical) {
  std::ofstream(path("cfg.json")) << "{\"scene\": {\"frames\": 30}}";
  ASSERT_EQ(run("generate --config " + path("cfg.json") + " --seed 7 --out " + path("a")).code, 0);
  ASSERT_EQ(run("generate --config " + path("cfg.json") + " --seed 7 --out " + path("b")).code, 0);
  ASSERT_EQ(run("generate --config " + path("cfg.json") + " --seed 8 --out " + path("c")).code, 0);
  for (const char* file : {"dataset.csv", "dataset.stats.json"}) {
    EXPECT_EQ(slurp(dir_ / "a" / file), slurp(dir_ / "b" / file)) << file;
  }
  EXPECT_NE(slurp(dir_ / "a" / "dataset.csv"), slurp(dir_ / "c" / "dataset.csv"));
  EXPECT_NE(slurp(dir_ / "a" / "dataset.stats.json").find("\"seed\": 7"), std::string::npos);
  EXPECT_EQ(read_dataset(dir_ / "a" / "dataset.csv").size(), 90u);
}

TEST_F(Cli, RenderWithoutMovingTargetsHasNoArrows) {
  RadarFrame still;
  still.frame_id = 4;
  still.ego.speed = 0.0;
  for (double v : {0.0, 0.5, -1.0, 1.0}) {
    RadarTarget t;
    t.x = 10.0 + v;
    t.y = 3.0 * v;
    t.v_d = v;
    t.v_d_comp = v;
    still.targets.push_back(t);
  }
  RadarFrame moving = still;
  moving.frame_id = 5;
  moving.targets[0].v_d = moving.targets[0].v_d_comp = 4.0;
  write_dataset(std::vector<RadarFrame>{still, moving}, fs::path(path("d.csv")));

  ASSERT_EQ(run("render --dataset " + path("d.csv") + " --frame 4 --seed 3 --out " + path("r")).code, 0);
  const std::string svg = slurp(dir_ / "r" / "frame_4.svg");
  EXPECT_EQ(count(svg, "class=\"arrow\""), 0u);
  EXPECT_NE(svg.find("seed=3"), std::string::npos);

  ASSERT_EQ(run("render --dataset " + path("d.csv") + " --frame 5 --out " + path("r")).code, 0);
  EXPECT_EQ(count(slurp(dir_ / "r" / "frame_5.svg"), "class=\"arrow\""), 1u);
}

TEST_F(Cli, RenderUnknownFrameListsValidRange) {
  write_dataset(small_dataset(4), fs::path(path("d.csv")));
  const RunResult r = run("render --dataset " + path("d.csv") + " --frame 99 --out " + path("r"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("unknown frame id 99"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("0..11"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir_ / "r" / "frame_99.svg"));
}

// The toy checkpoint is an untrained model; relabeling the dataset with its own
// predictions makes every prediction correct.
TEST_F(Cli, EvalOnAllCorrectFixtureReportsPerfectF1) {
  std::vector<RadarFrame> frames = small_dataset(20);
  const auto test_frames = pipeline::split_dataset(frames, 0.8).test;
  const pipeline::FeatureStats stats = pipeline::FeatureStats::compute(frames);
  std::optional<pipeline::Model> toy;
  for (std::uint64_t seed = 0; seed < 64 && !toy; ++seed) {
    auto config = models::ModelConfig::desk(models::Variant::PointNet);
    config.seed = seed;
    pipeline::Model candidate(config);
    std::size_t anomalous = 0;
    std::size_t total = 0;
    for (const RadarFrame& f : test_frames) {
      for (Label l : pipeline::predict_frame(candidate, stats, f)) {
        anomalous += l == Label::Anomalous;
        ++total;
      }
    }
    if (anomalous > 0 && anomalous < total) toy.emplace(std::move(candidate));
  }
  ASSERT_TRUE(toy.has_value()) << "no toy model predicts both classes";
  for (RadarFrame& f : frames) {
    const auto predicted = pipeline::predict_frame(*toy, stats, f);
    for (std::size_t i = 0; i < f.targets.size(); ++i) f.targets[i].label = predicted[i];
  }
  write_dataset(frames, fs::path(path("fixture.csv")));
  pipeline::save_checkpoint(dir_ / "toy", *toy, stats, 11);

  const RunResult r = run("eval --dataset " + path("fixture.csv") + " --checkpoint " + path("toy") +
                          " --out " + path("e"));
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(dir_ / "e" / "eval_report.csv");
  EXPECT_EQ(csv.rfind("# radar-anomaly eval-report v1 seed=11\n", 0), 0u);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  std::getline(lines, line);
  ASSERT_EQ(line.rfind("all,", 0), 0u) << line;
  EXPECT_EQ(line.substr(line.rfind(',') + 1), "1") << line;
  EXPECT_NE(line.find(",0,0,"), std::string::npos) << "expected no FP and no FN: " << line;
  EXPECT_NE(r.out.find("1.0000"), std::string::npos);
}

TEST_F(Cli, TrainEvalBenchRenderRoundTrip) {
  std::ofstream(path("cfg.json"))
      << R"({"scene": {"frames": 40}, "preset": "desk", "train": {"epochs": 1, "batch_size": 8},
            "bench": {"frames": 100, "repetitions": 10}})";
  const std::string cfg = " --config " + path("cfg.json");
  ASSERT_EQ(run("generate" + cfg + " --out " + path("g")).code, 0);
  const std::string data = " --dataset " + path("g/dataset.csv");
  for (const char* variant : {"pointnet", "mfg"}) {
    const RunResult r = run("train" + data + cfg + " --seed 5 --variant " + variant + " --out " +
                            path(std::string("ck_") + variant));
    ASSERT_EQ(r.code, 0) << r.err;
  }
  const std::string log = slurp(dir_ / "ck_mfg" / "training_log.csv");
  EXPECT_EQ(log.rfind("# radar-anomaly training-log v1 seed=5\n", 0), 0u);
  const auto checkpoint = pipeline::load_checkpoint(dir_ / "ck_mfg");
  EXPECT_EQ(checkpoint.model.config().variant, models::Variant::MFG);
  EXPECT_EQ(checkpoint.model.config().seed, 5u);

  ASSERT_EQ(run("eval" + data + cfg + " --checkpoint " + path("ck_mfg") + " --out " + path("e")).code, 0);
  EXPECT_NE(slurp(dir_ / "e" / "predictions.csv").find("seed=5"), std::string::npos);

  const RunResult b = run("bench" + data + cfg + " --checkpoint " + path("ck_pointnet") +
                          " --checkpoint " + path("ck_mfg") + " --out " + path("b"));
  ASSERT_EQ(b.code, 0) << b.err;
  const std::string bench = slurp(dir_ / "b" / "bench.csv");
  EXPECT_EQ(bench.rfind("# radar-anomaly bench v1 seed=5\n", 0), 0u);
  EXPECT_NE(bench.find("\nck_pointnet,pointnet,100,10,"), std::string::npos) << bench;
  EXPECT_NE(bench.find("\nck_mfg,mfg,100,10,"), std::string::npos) << bench;

  // Frame 100 is a Left-sensor frame, so it is in the held-out split.
  const RunResult r = run("render" + data + " --frame 100 --report " + path("e") + " --out " + path("r"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir_ / "r" / "frame_100.svg").find("mode=predictions"), std::string::npos);
}

}  // namespace
}  // namespace radar
