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

#include <glog/logging.h>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vaed/cli/run_config.h"
#include "vaed/common/error.h"
#include "vaed/common/faed.h"
#include "vaed/data/corpus.h"
#include "vaed/nn/grad_check.h"
#include "vaed/pipeline/stages.h"

namespace fs = std::filesystem;
using nlohmann::json;
using vaed::cli::RunConfig;

namespace {

struct Common {
  std::string config;
  std::string workdir = "work";
  std::string corpus;
  std::string cache;
  int jobs = 1;

  vaed::pipeline::Paths paths() const {
    return {corpus.empty() ? fs::path(workdir) / "corpus" : fs::path(corpus),
            cache.empty() ? fs::path(workdir) / "cache" : fs::path(cache)};
  }
};

struct TrainFlags {
  double lr = 2e-4;
  int batch_size = 25;
  double lr_shrink = 0.9;
  double lr_min = 1e-6;
  int patience = 1;
  int max_epochs = 100;
  uint64_t seed = 0;
  bool balanced = true;

  vaed::train::TrainConfig ToConfig() const {
    vaed::train::TrainConfig c;
    c.lr_initial = lr;
    c.batch_size = batch_size;
    c.lr_shrink = lr_shrink;
    c.lr_min = lr_min;
    c.plateau_patience = patience;
    c.max_epochs = max_epochs;
    c.seed = seed;
    c.balanced = balanced;
    return c;
  }
};

struct Command {
  CLI::App* app;
  RunConfig config;
  Common common;
  std::function<void(Command&)> run;
};

void AddCommon(Command& c, bool with_jobs) {
  c.app->add_option("--config", c.common.config, "JSON file of option values (keys are flag names)");
  c.config.Add("workdir", &c.common.workdir, "Root for the corpus, cache and runs");
  c.config.Add("corpus", &c.common.corpus, "Corpus directory (default <workdir>/corpus)");
  c.config.Add("cache", &c.common.cache, "Cache directory (default <workdir>/cache)");
  if (with_jobs) c.config.Add("jobs", &c.common.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

void AddTrain(Command& c, TrainFlags* t) {
  c.config.Add("lr", &t->lr, "Initial learning rate");
  c.config.Add("batch-size", &t->batch_size, "Minibatch size");
  c.config.Add("lr-shrink", &t->lr_shrink, "Plateau shrink factor");
  c.config.Add("lr-min", &t->lr_min, "Stop once the rate falls below this");
  c.config.Add("patience", &t->patience, "Epochs without a new best before shrinking");
  c.config.Add("max-epochs", &t->max_epochs, "Epoch cap");
  c.config.Add("seed", &t->seed, "Seed for init, sampling and augmentation");
  c.config.Add("balanced", &t->balanced, "Class- or speaker-first sampling");
}

void SaveResolved(const Command& c, const fs::path& dir, const std::string& file = "run_config.json") {
  vaed::WriteFileBytes(dir / file, c.config.Resolved().dump(2) + "\n");
}

void FailOnErrors(const vaed::data::CacheReport& r, const fs::path& report_path) {
  vaed::WriteFileBytes(report_path, r.ToJson().dump(2) + "\n");
  LOG(INFO) << r.written << " written, " << r.skipped << " up to date, " << r.errors.size()
            << " failed; report in " << report_path.string();
  if (!r.errors.empty()) {
    for (const auto& e : r.errors) LOG(ERROR) << e.id << ": " << e.message;
    throw vaed::Error(std::to_string(r.errors.size()) + " records failed");
  }
}

int Exit(int code, const std::string& message) {
  std::cerr << "vaed: " << message << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  FLAGS_logtostderr = true;
  google::InitGoogleLogging(argv[0]);

  CLI::App app{"Voice-aware acoustic event detection pipeline"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<Command>> commands;
  auto add = [&](const std::string& name, const std::string& help) -> Command& {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.push_back(std::make_unique<Command>(Command{sub, RunConfig(sub), {}, {}}));
    return *commands.back();
  };

  // synth-data
  vaed::data::CorpusConfig corpus_cfg;
  uint64_t corpus_seed = 7;
  {
    Command& c = add("synth-data", "Synthesize the speaker and event corpora");
    AddCommon(c, true);
    c.config.Add("seed", &corpus_seed, "Corpus seed");
    c.config.Add("speakers", &corpus_cfg.n_speakers, "Number of synthetic speakers");
    c.config.Add("utterances", &corpus_cfg.utterances_per_speaker, "Utterances per speaker");
    c.config.Add("val-utterances", &corpus_cfg.speaker_val_per_speaker, "Validation utterances per speaker");
    c.config.Add("clips", &corpus_cfg.n_aed_clips, "Event clips");
    c.config.Add("classes", &corpus_cfg.n_event_classes, "Event classes");
    c.config.Add("val-fraction", &corpus_cfg.aed_val_fraction, "Event validation fraction");
    c.config.Add("eval-fraction", &corpus_cfg.aed_eval_fraction, "Event evaluation fraction");
    c.config.Add("min-eval-positives", &corpus_cfg.min_eval_positives, "Eval clips required per class");
    c.run = [&](Command& c) {
      corpus_cfg.Validate();
      const fs::path out = c.common.paths().corpus;
      const auto corpus = vaed::data::BuildCorpora(corpus_cfg, corpus_seed, out, c.common.jobs);
      SaveResolved(c, out);
      LOG(INFO) << corpus.speaker_records.size() << " utterances and " << corpus.aed_records.size()
                << " clips written to " << out.string();
    };
  }

  // featurize
  {
    Command& c = add("featurize", "Cache log-mel features and normalization statistics");
    AddCommon(c, true);
    c.run = [&](Command& c) {
      const auto paths = c.common.paths();
      const auto report = vaed::pipeline::Featurize(paths, c.common.jobs);
      SaveResolved(c, paths.cache, "featurize_config.json");
      FailOnErrors(report, paths.cache / "featurize_report.json");
    };
  }

  // pretrain-speaker
  TrainFlags speaker_train;
  std::string speaker_arch = "arch2", speaker_preset = "desk", speaker_out;
  {
    Command& c = add("pretrain-speaker", "Train the speaker classifier that provides embeddings");
    AddCommon(c, false);
    c.config.Add("voice-arch", &speaker_arch, "arch1 | arch2");
    c.config.Add("preset", &speaker_preset, "desk | full layer widths");
    c.config.Add("out", &speaker_out, "Run directory (default <workdir>/runs/speaker-<arch>)");
    AddTrain(c, &speaker_train);
    c.run = [&](Command& c) {
      const auto arch = vaed::models::ParseVoiceArch(speaker_arch);
      const auto preset = vaed::pipeline::ParsePreset(speaker_preset);
      const fs::path out = speaker_out.empty() ? fs::path(c.common.workdir) / "runs" / ("speaker-" + speaker_arch)
                                               : fs::path(speaker_out);
      const auto config = speaker_train.ToConfig();
      config.Validate();
      SaveResolved(c, out);
      const auto r = vaed::pipeline::PretrainSpeaker(c.common.paths(), arch, preset, config, out);
      LOG(INFO) << "best validation accuracy " << r.best_metric << " at epoch " << r.best_epoch;
    };
  }

  // embed
  std::string embed_arch = "arch2", embed_ckpt;
  {
    Command& c = add("embed", "Cache frame-level speaker embeddings of every event clip");
    AddCommon(c, true);
    c.config.Add("voice-arch", &embed_arch, "arch1 | arch2");
    c.config.Add("checkpoint", &embed_ckpt,
                 "Speaker checkpoint (default <workdir>/runs/speaker-<arch>/best.ckpt)");
    c.run = [&](Command& c) {
      const auto arch = vaed::models::ParseVoiceArch(embed_arch);
      const fs::path ckpt = embed_ckpt.empty()
                                ? fs::path(c.common.workdir) / "runs" / ("speaker-" + embed_arch) / "best.ckpt"
                                : fs::path(embed_ckpt);
      const auto paths = c.common.paths();
      const auto report = vaed::pipeline::Embed(paths, ckpt, arch, c.common.jobs);
      const fs::path dir = paths.cache / "embeddings" / embed_arch;
      SaveResolved(c, dir, "embed_config.json");
      FailOnErrors(report, dir / "embed_report.json");
    };
  }

  // train-aed
  TrainFlags aed_train;
  std::string branch = "dual", audio_branch = "cnn", aed_arch = "arch2", aug = "none", aed_preset = "desk",
              aed_out;
  vaed::augment::AugmentConfig aug_cfg;
  {
    Command& c = add("train-aed", "Train the event detector");
    AddCommon(c, false);
    c.config.Add("branch", &branch, "dual | audio");
    c.config.Add("audio-branch", &audio_branch, "cnn | recurrent");
    c.config.Add("voice-arch", &aed_arch, "Embedding source: arch1 | arch2");
    c.config.Add("preset", &aed_preset, "desk | full layer widths");
    c.config.Add("aug", &aug, "none | all | comma list of mixup, tmask, dropout");
    c.config.Add("aug-time-mask-width", &aug_cfg.time_mask_width, "Masked embedding frames");
    c.config.Add("aug-independent-frames", &aug_cfg.independent_frames,
                 "Mask scattered frames instead of one block");
    c.config.Add("aug-mixup-alpha", &aug_cfg.mixup_alpha, "Beta(alpha, alpha) mixup weights");
    c.config.Add("aug-dropout-p", &aug_cfg.voice_dropout_p, "Voice-branch input dropout rate");
    c.config.Add("out", &aed_out, "Run directory (default <workdir>/runs/aed-<branch>-<audio>[-<arch>]-<aug>-s<seed>)");
    AddTrain(c, &aed_train);
    c.run = [&](Command& c) {
      vaed::pipeline::AedRun run;
      run.mode = vaed::models::ParseBranchMode(branch);
      run.audio = vaed::models::ParseAudioBranch(audio_branch);
      run.voice_arch = vaed::models::ParseVoiceArch(aed_arch);
      run.preset = vaed::pipeline::ParsePreset(aed_preset);
      auto config = aed_train.ToConfig();
      const auto enabled = vaed::augment::AugmentConfig::Parse(aug);
      config.aug = aug_cfg;
      config.aug.mixup = enabled.mixup;
      config.aug.time_mask = enabled.time_mask;
      config.aug.voice_dropout = enabled.voice_dropout;
      run.Validate(config.aug);
      config.Validate();
      std::string tag = "aed-" + branch + "-" + audio_branch;
      if (run.mode == vaed::models::BranchMode::kDual) tag += "-" + aed_arch;
      tag += "-" + config.aug.EnableString() + "-s" + std::to_string(aed_train.seed);
      const fs::path out = aed_out.empty() ? fs::path(c.common.workdir) / "runs" / tag : fs::path(aed_out);
      SaveResolved(c, out);
      const auto r = vaed::pipeline::TrainAed(c.common.paths(), run, config, out);
      LOG(INFO) << "best validation mAP " << r.best_metric << " at epoch " << r.best_epoch;
    };
  }

  // evaluate
  std::string eval_ckpt, eval_split = "eval", eval_out;
  {
    Command& c = add("evaluate", "Score an event-detection checkpoint");
    AddCommon(c, false);
    c.config.Add("checkpoint", &eval_ckpt, "AED checkpoint");
    c.config.Add("split", &eval_split, "train | val | eval");
    c.config.Add("out", &eval_out, "Report directory (default <checkpoint dir>/eval-<split>)");
    c.run = [&](Command& c) {
      if (eval_ckpt.empty()) throw vaed::ValidationError("--checkpoint is required");
      const fs::path out = eval_out.empty() ? fs::path(eval_ckpt).parent_path() / ("eval-" + eval_split)
                                            : fs::path(eval_out);
      SaveResolved(c, out);
      const auto e = vaed::pipeline::Evaluate(c.common.paths(), eval_ckpt, eval_split, out);
      LOG(INFO) << "mAP " << e.report.map << " mAUC " << e.report.mauc << " d' " << e.report.d_prime
                << " over " << e.report.n_clips << " clips; report in " << out.string();
    };
  }

  // gradcheck
  uint64_t gc_seed = 1;
  double gc_tol = 1e-4;
  std::string gc_out;
  {
    Command& c = add("gradcheck", "Finite-difference verification of every kernel");
    c.app->add_option("--config", c.common.config, "JSON file of option values");
    c.config.Add("seed", &gc_seed, "Seed for inputs and probes");
    c.config.Add("tolerance", &gc_tol, "Maximum relative error");
    c.config.Add("out", &gc_out, "Optional JSON report path");
    c.run = [&](Command& c) {
      const auto checks = vaed::nn::RunKernelGradientSuite(gc_seed, gc_tol);
      json report = json::array();
      bool ok = true;
      for (const auto& k : checks) {
        std::printf("%-28s %.3e %s\n", k.kernel.c_str(), k.max_rel_error, k.passed() ? "ok" : "FAIL");
        report.push_back({{"kernel", k.kernel},
                          {"max_rel_error", k.max_rel_error},
                          {"tolerance", k.tolerance},
                          {"worst_entry", k.worst_entry},
                          {"passed", k.passed()}});
        ok = ok && k.passed();
      }
      if (!gc_out.empty()) vaed::WriteFileBytes(gc_out, report.dump(2) + "\n");
      if (!ok) throw vaed::Error("gradient check failed");
    };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  for (auto& c : commands) {
    if (!c->app->parsed()) continue;
    try {
      if (!c->common.config.empty()) c->config.ApplyFile(fs::path(c->common.config));
      c->run(*c);
    } catch (const vaed::ValidationError& e) {
      return Exit(1, e.what());
    } catch (const std::exception& e) {
      return Exit(2, e.what());
    }
  }
  return 0;
}
