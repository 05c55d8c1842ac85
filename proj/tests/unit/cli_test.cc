// Copyright (c) 2026 The vaed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "gtest/gtest.h"
#include "vaed/cli/run_config.h"
#include "vaed/common/error.h"
#include "vaed/common/faed.h"
#include "vaed/models/aed_model.h"
#include "vaed/models/checkpoint.h"
#include "vaed/pipeline/stages.h"

namespace vaed::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
  int code;
  std::string err;
};

// Runs the command-line binary with `args`, capturing its exit code and
// standard error.
Outcome Vaed(const std::string& args) {
  const fs::path err = fs::temp_directory_path() / ("vaed_cli_err_" + std::to_string(::getpid()));
  const std::string cmd = std::string(VAED_BINARY) + " " + args + " 2> " + err.string() + " > /dev/null";
  const int status = std::system(cmd.c_str());
  Outcome o{WIFEXITED(status) ? WEXITSTATUS(status) : -1, fs::exists(err) ? ReadFileBytes(err) : ""};
  fs::remove(err);
  return o;
}

TEST(RunConfigTest, FlagsOverrideFileOverrideDefaults) {
  CLI::App app;
  CLI::App* sub = app.add_subcommand("train-aed");
  RunConfig rc(sub);
  double lr = 2e-4;
  int batch = 25;
  uint64_t seed = 0;
  std::string aug = "none";
  bool balanced = true;
  rc.Add("lr", &lr, "");
  rc.Add("batch-size", &batch, "");
  rc.Add("seed", &seed, "");
  rc.Add("aug", &aug, "");
  rc.Add("balanced", &balanced, "");
  app.parse("train-aed --lr 0.1", false);
  rc.ApplyFile(json{{"command", "train-aed"}, {"lr", 0.5}, {"seed", 3}, {"aug", "all"}, {"balanced", false}});
  EXPECT_EQ(lr, 0.1);
  EXPECT_EQ(seed, 3u);
  EXPECT_EQ(aug, "all");
  EXPECT_FALSE(balanced);
  EXPECT_EQ(batch, 25);
  const json r = rc.Resolved();
  EXPECT_EQ(r.at("command"), "train-aed");
  EXPECT_EQ(r.at("lr"), 0.1);
  EXPECT_EQ(r.at("batch-size"), 25);
  EXPECT_EQ(r.at("seed"), 3);
}

TEST(RunConfigTest, RejectsUnknownKeysWrongTypesAndOtherCommands) {
  CLI::App app;
  CLI::App* sub = app.add_subcommand("embed");
  RunConfig rc(sub);
  int jobs = 1;
  rc.Add("jobs", &jobs, "");
  app.parse("embed", false);
  EXPECT_THROW(rc.ApplyFile(json{{"threads", 4}}), ValidationError);
  EXPECT_THROW(rc.ApplyFile(json{{"jobs", "four"}}), ValidationError);
  EXPECT_THROW(rc.ApplyFile(json{{"command", "featurize"}}), ValidationError);
  EXPECT_THROW(rc.ApplyFile(json::array()), ValidationError);
  EXPECT_THROW(rc.ApplyFile(fs::path("/nonexistent/config.json")), ValidationError);
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(Vaed("--help").code, 0);
  EXPECT_EQ(Vaed("no-such-command").code, 1);
  EXPECT_EQ(Vaed("train-aed --batch-size notanumber").code, 1);
  const Outcome missing = Vaed("featurize --workdir /nonexistent/vaed");
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("vaed synth-data"), std::string::npos) << missing.err;
  const Outcome conflict = Vaed("train-aed --workdir /nonexistent/vaed --branch audio --aug tmask");
  EXPECT_EQ(conflict.code, 1);
  EXPECT_NE(conflict.err.find("voice branch"), std::string::npos) << conflict.err;
}

TEST(CliTest, GradcheckPasses) { EXPECT_EQ(Vaed("gradcheck").code, 0); }

// The whole pipeline through the binary on a small corpus.
class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() / ("vaed_cli_" + std::to_string(::getpid()));
    fs::remove_all(root_);
    fs::create_directories(root_);
    const json corpus = {{"speakers", 4},        {"utterances", 8}, {"val-utterances", 2},
                         {"clips", 600},         {"classes", 12},   {"seed", 7},
                         {"min-eval-positives", 5}};
    WriteFileBytes(root_ / "synth.json", corpus.dump());
    synth_ = Vaed("synth-data --jobs 2 --workdir " + W() + " --config " + (root_ / "synth.json").string());
  }
  static void TearDownTestSuite() { fs::remove_all(root_); }
  static std::string W() { return (root_ / "w").string(); }

  static inline fs::path root_;
  static inline Outcome synth_;
};

TEST_F(PipelineTest, SynthDataIsReproducibleFromItsResolvedConfig) {
  ASSERT_EQ(synth_.code, 0) << synth_.err;
  const fs::path resolved = root_ / "w" / "corpus" / "run_config.json";
  ASSERT_TRUE(fs::exists(resolved));
  EXPECT_EQ(json::parse(ReadFileBytes(resolved)).at("clips"), 600);
  const fs::path again = root_ / "again";
  ASSERT_EQ(Vaed("synth-data --config " + resolved.string() + " --corpus " + again.string()).code, 0);
  for (const char* f : {"speaker.jsonl", "aed.jsonl", "corpus.json"}) {
    EXPECT_EQ(ReadFileBytes(root_ / "w" / "corpus" / f), ReadFileBytes(again / f)) << f;
  }
}

TEST_F(PipelineTest, StagesRunInOrderAndReportMissingPrerequisites) {
  ASSERT_EQ(synth_.code, 0) << synth_.err;
  const std::string w = " --workdir " + W();
  const Outcome early = Vaed("pretrain-speaker" + w);
  EXPECT_EQ(early.code, 1);
  EXPECT_NE(early.err.find("vaed featurize"), std::string::npos) << early.err;

  ASSERT_EQ(Vaed("featurize --jobs 2" + w).code, 0);
  const Outcome no_ckpt = Vaed("embed" + w);
  EXPECT_EQ(no_ckpt.code, 1);
  EXPECT_NE(no_ckpt.err.find("vaed pretrain-speaker"), std::string::npos) << no_ckpt.err;
  const Outcome no_emb = Vaed("train-aed --max-epochs 1" + w);
  EXPECT_EQ(no_emb.code, 1);
  EXPECT_NE(no_emb.err.find("vaed embed"), std::string::npos) << no_emb.err;

  ASSERT_EQ(Vaed("pretrain-speaker --voice-arch arch2 --max-epochs 1" + w).code, 0);
  const fs::path speaker_run = root_ / "w" / "runs" / "speaker-arch2";
  for (const char* f : {"best.ckpt", "last.ckpt", "epochs.jsonl", "summary.json", "run_config.json"}) {
    EXPECT_TRUE(fs::exists(speaker_run / f)) << f;
  }
  ASSERT_EQ(Vaed("embed --jobs 2 --voice-arch arch2" + w).code, 0);
  const fs::path run = root_ / "w" / "run";
  ASSERT_EQ(Vaed("train-aed --branch dual --voice-arch arch2 --aug all --max-epochs 1 --out " +
                 run.string() + w).code, 0);
  const json cfg = json::parse(ReadFileBytes(run / "run_config.json"));
  EXPECT_EQ(cfg.at("aug"), "all");
  EXPECT_EQ(cfg.at("branch"), "dual");

  const fs::path eval = root_ / "w" / "eval";
  ASSERT_EQ(Vaed("evaluate --checkpoint " + (run / "best.ckpt").string() + " --out " + eval.string() + w).code, 0);
  const json report = json::parse(ReadFileBytes(eval / "report.json"));
  EXPECT_EQ(report.at("classes").size(), 12u);
  EXPECT_GT(report.at("n_clips").get<int>(), 0);
  EXPECT_TRUE(fs::exists(eval / "classes.csv"));
  EXPECT_TRUE(fs::exists(eval / "pr" / "tone_1k.csv"));

  // Remove two cached embeddings; evaluation enumerates both before failing.
  std::vector<std::string> removed;
  for (const auto& e : fs::directory_iterator(root_ / "w" / "cache" / "embeddings" / "arch2")) {
    if (e.path().extension() != ".faed" || removed.size() == 2) continue;
    const auto corpus = data::LoadCorpus(root_ / "w" / "corpus");
    const std::string id = e.path().stem().string();
    for (const auto& r : corpus.aed_records) {
      if (r.id == id && r.split == "eval") {
        removed.push_back(id);
        fs::remove(e.path());
      }
    }
  }
  ASSERT_EQ(removed.size(), 2u);
  const fs::path broken = root_ / "w" / "eval_broken";
  const Outcome missing = Vaed("evaluate --checkpoint " + (run / "best.ckpt").string() + " --out " + broken.string() + w);
  EXPECT_EQ(missing.code, 1);
  const json errors = json::parse(ReadFileBytes(broken / "errors.json"));
  ASSERT_EQ(errors.at("errors").size(), 2u);
  for (const auto& e : errors.at("errors")) {
    EXPECT_NE(std::find(removed.begin(), removed.end(), e.at("id").get<std::string>()), removed.end());
  }
}

TEST_F(PipelineTest, UntrainedModelScoresAtChance) {
  ASSERT_EQ(synth_.code, 0) << synth_.err;
  const pipeline::Paths paths{root_ / "w" / "corpus", root_ / "w" / "cache"};
  if (!fs::exists(paths.cache / "stats" / "aed.faed")) pipeline::Featurize(paths, 2);
  const auto spec = models::AedSpec::Desk(models::BranchMode::kAudioOnly, models::AudioBranch::kCnn, 12, 128);
  models::AedModel model(spec, 17);
  models::Checkpoint ckpt = models::CaptureCheckpoint(model.Params());
  ckpt.meta = {{"task", "aed"}, {"fingerprint", spec.Fingerprint()}, {"spec", spec.ToJson()}};
  const fs::path path = root_ / "untrained.ckpt";
  models::SaveCheckpoint(path, ckpt);
  const auto e = pipeline::Evaluate(paths, path);
  EXPECT_NEAR(e.report.mauc, 0.5, 0.05);
  EXPECT_GT(e.report.n_clips, 100);
}

}  // namespace
}  // namespace vaed::cli
