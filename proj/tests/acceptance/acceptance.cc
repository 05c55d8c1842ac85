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

// Acceptance suite: one PASS/FAIL line per criterion. Criteria 6-10 share one
// work directory holding the default synthetic corpus and its caches.

#include <glog/logging.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "oracles/oracles.h"
#include "vaed/common/error.h"
#include "vaed/common/faed.h"
#include "vaed/common/random.h"
#include "vaed/data/cache.h"
#include "vaed/data/corpus.h"
#include "vaed/data/dataset.h"
#include "vaed/dsp/log_mel.h"
#include "vaed/metrics/metrics.h"
#include "vaed/models/aed_model.h"
#include "vaed/models/checkpoint.h"
#include "vaed/models/speaker_model.h"
#include "vaed/nn/conv.h"
#include "vaed/nn/grad_check.h"
#include "vaed/nn/pool.h"
#include "vaed/pipeline/stages.h"
#include "vaed/train/scheduler.h"
#include "vaed/train/train.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vaed;
using models::AedSpec;
using models::AudioBranch;
using models::BranchMode;
using models::VoiceArch;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string Fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Options {
  fs::path work = "acceptance_work";
  std::string only;
  int jobs = 1;
  uint64_t corpus_seed = 7;
  int speaker_epochs = 10;
  int aed_epochs = 10;
  int seeds = 3;
};

// Lazily built shared artifacts; each step records its wall time once.
class Workspace {
 public:
  explicit Workspace(const Options& o) : opt_(o), paths_{o.work / "corpus", o.work / "cache"} {}

  const pipeline::Paths& paths() const { return paths_; }
  const Options& options() const { return opt_; }

  // Corpus, features and statistics.
  void Prepare() {
    if (prepared_) return;
    Timed("synth-data", [&] { corpus_ = data::BuildCorpora(data::CorpusConfig(), opt_.corpus_seed, paths_.corpus, opt_.jobs); });
    Timed("featurize", [&] {
      const auto r = pipeline::Featurize(paths_, opt_.jobs);
      if (!r.errors.empty()) throw Error("featurize failed for " + r.errors.front().id);
    });
    prepared_ = true;
  }

  const data::Corpus& corpus() {
    Prepare();
    return corpus_;
  }

  const train::FitResult& Speaker(VoiceArch arch) {
    Prepare();
    auto it = speaker_.find(arch);
    if (it != speaker_.end()) return it->second;
    const std::string name = models::ToString(arch);
    train::TrainConfig cfg;
    cfg.max_epochs = opt_.speaker_epochs;
    cfg.seed = 1;
    train::FitResult r;
    Timed("pretrain-" + name, [&] {
      r = pipeline::PretrainSpeaker(paths_, arch, pipeline::Preset::kDesk, cfg, SpeakerDir(arch));
    });
    return speaker_.emplace(arch, std::move(r)).first->second;
  }

  fs::path SpeakerDir(VoiceArch arch) const { return opt_.work / "runs" / ("speaker-" + models::ToString(arch)); }

  void Embeddings(VoiceArch arch) {
    if (embedded_.count(arch)) return;
    Speaker(arch);
    Timed("embed-" + models::ToString(arch), [&] {
      const auto r = pipeline::Embed(paths_, SpeakerDir(arch) / "best.ckpt", arch, opt_.jobs);
      if (!r.errors.empty()) throw Error("embedding failed for " + r.errors.front().id);
    });
    embedded_.insert(arch);
  }

  struct AedOutcome {
    train::FitResult fit;
    metrics::EvalReport eval;
    double seconds = 0;
  };

  // Trains (once) and evaluates the named configuration for one seed.
  const AedOutcome& Aed(const std::string& tag, BranchMode mode, const std::string& aug, uint64_t seed) {
    const std::string key = tag + "-s" + std::to_string(seed);
    auto it = aed_.find(key);
    if (it != aed_.end()) return it->second;
    Prepare();
    if (mode == BranchMode::kDual) Embeddings(VoiceArch::kArch2);
    pipeline::AedRun run;
    run.mode = mode;
    run.audio = AudioBranch::kCnn;
    run.voice_arch = VoiceArch::kArch2;
    train::TrainConfig cfg;
    cfg.max_epochs = opt_.aed_epochs;
    cfg.seed = seed;
    cfg.aug = augment::AugmentConfig::Parse(aug);
    const fs::path dir = opt_.work / "runs" / ("aed-" + key);
    AedOutcome o;
    const auto t0 = Clock::now();
    o.fit = pipeline::TrainAed(paths_, run, cfg, dir);
    o.eval = pipeline::Evaluate(paths_, dir / "best.ckpt", "eval", dir / "eval").report;
    o.seconds = Seconds(t0);
    step_seconds_["aed-" + key] = o.seconds;
    LOG(INFO) << key << ": eval mAP " << o.eval.map << ", best epoch " << o.fit.best_epoch;
    return aed_.emplace(key, std::move(o)).first->second;
  }

  double StepSeconds(const std::string& step) const {
    auto it = step_seconds_.find(step);
    return it == step_seconds_.end() ? 0.0 : it->second;
  }

 private:
  void Timed(const std::string& step, const std::function<void()>& fn) {
    const auto t0 = Clock::now();
    fn();
    step_seconds_[step] = Seconds(t0);
    LOG(INFO) << step << " took " << step_seconds_[step] << " s";
  }

  Options opt_;
  pipeline::Paths paths_;
  bool prepared_ = false;
  data::Corpus corpus_;
  std::map<VoiceArch, train::FitResult> speaker_;
  std::set<VoiceArch> embedded_;
  std::map<std::string, AedOutcome> aed_;
  std::map<std::string, double> step_seconds_;
};

Verdict GradientSuite(Workspace&) {
  const auto t0 = Clock::now();
  const auto checks = nn::RunKernelGradientSuite(1, 1e-4);
  const double secs = Seconds(t0);
  double worst = 0;
  std::string worst_kernel, failed;
  for (const auto& k : checks) {
    if (k.max_rel_error >= worst) {
      worst = k.max_rel_error;
      worst_kernel = k.kernel;
    }
    if (!k.passed()) failed += " " + k.kernel;
  }
  return {failed.empty() && secs < 120,
          std::to_string(checks.size()) + " kernels, max rel err " + Fmt("%.2e", worst) + " (" +
              worst_kernel + ") < 1e-4, " + Fmt("%.1f", secs) + " s < 120 s" +
              (failed.empty() ? "" : "; failed:" + failed)};
}

template <typename T>
Tensor<T> Uniform(Shape s, Rng& rng) {
  Tensor<T> t(std::move(s));
  for (T& v : t.storage()) v = static_cast<T>(UniformReal(rng, -1, 1));
  return t;
}

// Convolutions run in double so the bound measures the lowering, not float
// accumulation order. Pooling is checked in float, where it must be exact.
Verdict OracleEquivalence(Workspace&) {
  Rng rng(2026);
  double conv2d_err = 0, conv1d_err = 0;
  int pool_mismatch = 0;
  for (int trial = 0; trial < 50; ++trial) {
    nn::Conv2dOptions o;
    o.in_channels = static_cast<int>(UniformInt(rng, 1, 4));
    o.out_channels = static_cast<int>(UniformInt(rng, 1, 6));
    o.kernel_h = static_cast<int>(UniformInt(rng, 1, 3));
    o.kernel_w = static_cast<int>(UniformInt(rng, 1, 8));
    o.stride_h = static_cast<int>(UniformInt(rng, 1, 2));
    o.stride_w = static_cast<int>(UniformInt(rng, 1, 2));
    o.pad_h = static_cast<int>(UniformInt(rng, 0, 1));
    o.pad_w = static_cast<int>(UniformInt(rng, 0, 1));
    const int h = static_cast<int>(UniformInt(rng, o.kernel_h, 20));
    const int w = static_cast<int>(UniformInt(rng, o.kernel_w, 16));
    nn::Conv2d<double> conv("c", o);
    conv.weight().value = Uniform<double>(conv.weight().value.shape(), rng);
    conv.bias().value = Uniform<double>(conv.bias().value.shape(), rng);
    const TensorD x = Uniform<double>({2, o.in_channels, h, w}, rng);
    const TensorD y = conv.Forward(x, nn::Mode::kEval);
    const TensorD ref = testing::DirectConv2d(x, conv.weight().value, conv.bias().value, o.stride_h,
                                              o.stride_w, o.pad_h, o.pad_w);
    if (y.shape() != ref.shape()) return {false, "conv2d shape mismatch in trial " + std::to_string(trial)};
    for (size_t i = 0; i < y.size(); ++i) conv2d_err = std::max(conv2d_err, std::fabs(y[i] - ref[i]));

    const int ci = static_cast<int>(UniformInt(rng, 1, 8)), co = static_cast<int>(UniformInt(rng, 1, 6));
    const int k = static_cast<int>(UniformInt(rng, 1, 3)), pad = static_cast<int>(UniformInt(rng, 0, 1));
    const int t = static_cast<int>(UniformInt(rng, k, 30));
    nn::Conv1d<double> c1("c1", ci, co, k, 1, pad);
    c1.weight().value = Uniform<double>(c1.weight().value.shape(), rng);
    c1.bias().value = Uniform<double>(c1.bias().value.shape(), rng);
    const TensorD x1 = Uniform<double>({2, ci, t}, rng);
    const TensorD y1 = c1.Forward(x1, nn::Mode::kEval);
    const TensorD r1 = testing::DirectConv1d(x1, c1.weight().value, c1.bias().value, 1, pad);
    if (y1.shape() != r1.shape()) return {false, "conv1d shape mismatch in trial " + std::to_string(trial)};
    for (size_t i = 0; i < y1.size(); ++i) conv1d_err = std::max(conv1d_err, std::fabs(y1[i] - r1[i]));

    const int kh = static_cast<int>(UniformInt(rng, 1, 3)), kw = static_cast<int>(UniformInt(rng, 1, 3));
    const int ph = static_cast<int>(UniformInt(rng, kh, 17)), pw = static_cast<int>(UniformInt(rng, kw, 17));
    const bool ceil_mode = trial % 3 != 0;
    const TensorF xp = Uniform<float>({2, 3, ph, pw}, rng);
    nn::MaxPool2d<float> pool("p", kh, kw, ceil_mode);
    if (!(pool.Forward(xp, nn::Mode::kEval) == testing::WindowMax(xp, kh, kw, ceil_mode))) ++pool_mismatch;
  }
  return {conv2d_err <= 1e-6 && conv1d_err <= 1e-6 && pool_mismatch == 0,
          "50 shapes: conv2d max abs err " + Fmt("%.1e", conv2d_err) + ", conv1d " + Fmt("%.1e", conv1d_err) +
              " (<= 1e-6); maxpool exact mismatches " + std::to_string(pool_mismatch)};
}

Verdict Shapes(Workspace&) {
  std::vector<std::string> bad;
  auto expect = [&](const std::string& what, const Shape& got, const Shape& want) {
    if (got != want) bad.push_back(what + " " + ShapeToString(got) + " != " + ShapeToString(want));
  };
  dsp::Waveform clip;
  clip.samples.assign(10 * 16000, 0.0f);
  Rng rng(5);
  for (float& s : clip.samples) s = static_cast<float>(0.1 * StandardNormal(rng));
  const TensorF feat = dsp::LogMel(clip).values;
  expect("log-mel", feat.shape(), {400, 64});
  const TensorF x = feat.Reshaped({1, 400, 64});
  for (VoiceArch arch : {VoiceArch::kArch1, VoiceArch::kArch2}) {
    models::SpeakerModel m(models::SpeakerSpec::Full(arch), 1);
    const auto out = m.Forward(x, nn::Mode::kEval);
    expect(models::ToString(arch) + " embedding", out.embedding.shape(), {1, 100, 1024});
    expect(models::ToString(arch) + " logits", out.logits.shape(), {1, 1211});
  }
  models::AedModel aed(AedSpec::Full(BranchMode::kDual, AudioBranch::kCnn), 1);
  const TensorF e({1, 100, 1024}, 0.1f);
  expect("audio branch", aed.TraceAudio(x).back().second, {1, 100, 768});
  expect("voice branch", aed.TraceVoice(e).back().second, {1, 100, 64});
  const auto o = aed.Forward(x, &e, nn::Mode::kEval);
  expect("fusion", aed.fused().shape(), {1, 100, 832});
  expect("AED output", o.clip_probs.shape(), {1, 527});
  if (bad.empty()) {
    return {true, "input 400x64, embeddings 100x1024, audio 100x768, voice 100x64, fusion 100x832, "
                  "527 classes, 1211 speakers"};
  }
  std::string detail = "mismatch:";
  for (const auto& b : bad) detail += " " + b + ";";
  return {false, detail};
}

Verdict MetricFidelity(Workspace&) {
  const std::pair<double, double> rows[] = {{0.903, 1.840}, {0.951, 2.338}, {0.950, 2.325},
                                            {0.966, 2.584}, {0.962, 2.506}, {0.962, 2.517}};
  double worst = 0;
  for (auto [auc, dp] : rows) worst = std::max(worst, std::fabs(metrics::DPrime(auc) - dp));
  return {worst <= 0.01, "6 published (mAUC, d') pairs, max |error| " + Fmt("%.4f", worst) + " <= 0.01"};
}

Verdict SchedulerArithmetic(Workspace&) {
  train::PlateauScheduler s;
  s.Observe(0.3);
  int epochs = 1;
  while (!s.stop() && epochs < 1000) {
    s.Observe(0.3);
    ++epochs;
  }
  const bool bracket = 2e-4 * std::pow(0.9, 51) < 1e-6 && 1e-6 <= 2e-4 * std::pow(0.9, 50);
  return {s.shrinks() == 51 && bracket && s.stop(),
          std::to_string(s.shrinks()) + " shrinks (expected 51), final lr " + Fmt("%.3e", s.lr())};
}

Verdict Overfit(Workspace& ws) {
  ws.Embeddings(VoiceArch::kArch2);
  const auto& c = ws.corpus();
  auto records = data::FilterSplit(c.aed_records, "train");
  records.resize(25);
  const auto stats = data::LoadNormStats(ws.paths().cache, "aed");
  const auto batch = data::LoadAedSet(records, ws.paths().cache, stats, c.config.n_event_classes, "arch2");
  const int E = batch.embedding.at(0).dim(1);
  const auto t0 = Clock::now();
  const auto r = train::OverfitAed(batch, AedSpec::Desk(BranchMode::kDual, AudioBranch::kCnn, c.config.n_event_classes, E),
                                   500, 2e-4, 0.02, 1);
  const double secs = Seconds(t0);
  const double loss = r.losses.back();
  return {loss < 0.02 && r.metric == 1.0 && secs < 300,
          "25 clips: BCE " + Fmt("%.4f", loss) + " < 0.02 after " + std::to_string(r.steps) +
              " steps (<= 500), batch mAP " + Fmt("%.4f", r.metric) + " == 1, " + Fmt("%.0f", secs) + " s < 300 s"};
}

Verdict VoiceBranchHelps(Workspace& ws) {
  std::vector<double> dual, audio, diffs;
  for (int s = 1; s <= ws.options().seeds; ++s) {
    dual.push_back(ws.Aed("dual-aug", BranchMode::kDual, "all", s).eval.map);
    audio.push_back(ws.Aed("audio", BranchMode::kAudioOnly, "none", s).eval.map);
    diffs.push_back(dual.back() - audio.back());
  }
  double secs = ws.StepSeconds("synth-data") + ws.StepSeconds("featurize") + ws.StepSeconds("pretrain-arch2") +
                ws.StepSeconds("embed-arch2");
  for (int s = 1; s <= ws.options().seeds; ++s) {
    secs += ws.StepSeconds("aed-dual-aug-s" + std::to_string(s)) + ws.StepSeconds("aed-audio-s" + std::to_string(s));
  }
  const double margin = Median(dual) - Median(audio);
  std::string per_seed;
  for (size_t i = 0; i < dual.size(); ++i) per_seed += Fmt(" %.4f", dual[i]) + "/" + Fmt("%.4f", audio[i]);
  return {margin >= 0.02 && secs < 1800,
          "median eval mAP dual " + Fmt("%.4f", Median(dual)) + " vs audio-only " + Fmt("%.4f", Median(audio)) +
              ", margin " + Fmt("%+.4f", margin) + " (>= 0.02); per seed" + per_seed + "; pipeline " +
              Fmt("%.0f", secs) + " s < 1800 s"};
}

Verdict AugmentationHelps(Workspace& ws) {
  std::vector<double> aug, noaug, aug_best, noaug_best;
  for (int s = 1; s <= ws.options().seeds; ++s) {
    const auto& a = ws.Aed("dual-aug", BranchMode::kDual, "all", s);
    const auto& n = ws.Aed("dual-noaug", BranchMode::kDual, "none", s);
    aug.push_back(a.eval.map);
    noaug.push_back(n.eval.map);
    aug_best.push_back(a.fit.best_epoch);
    noaug_best.push_back(n.fit.best_epoch);
  }
  const bool map_ok = Median(aug) >= Median(noaug);
  const bool later = Median(aug_best) > Median(noaug_best);
  return {map_ok && later,
          "median eval mAP aug " + Fmt("%.4f", Median(aug)) + " vs no-aug " + Fmt("%.4f", Median(noaug)) +
              (map_ok ? " (>=)" : " (<)") + "; median best epoch " + Fmt("%.0f", Median(aug_best)) + " vs " +
              Fmt("%.0f", Median(noaug_best)) + (later ? " (later)" : " (not later)") + " of " +
              std::to_string(ws.options().aed_epochs)};
}

Verdict SpeakerPretraining(Workspace& ws) {
  std::string detail;
  bool ok = true;
  for (VoiceArch arch : {VoiceArch::kArch1, VoiceArch::kArch2}) {
    const auto& r = ws.Speaker(arch);
    int first = 0;
    for (const auto& e : r.epochs) {
      if (e.val_metric >= 0.95) {
        first = e.epoch;
        break;
      }
    }
    ok = ok && first > 0 && first <= 30;
    detail += models::ToString(arch) + " best " + Fmt("%.3f", r.best_metric) + ", >= 0.95 at epoch " +
              (first ? std::to_string(first) : std::string("never")) + "; ";
  }
  const auto& c = ws.corpus();
  return {ok, detail + std::to_string(c.config.n_speakers) + " speakers, " +
                  std::to_string(data::FilterSplit(c.speaker_records, "val").size()) + " validation utterances"};
}

Verdict Determinism(Workspace& ws) {
  std::vector<std::string> bad;
  const auto& c = ws.corpus();
  const fs::path again = ws.options().work / "determinism";
  fs::remove_all(again);
  data::BuildCorpora(c.config, c.seed, again / "corpus", ws.options().jobs);
  for (const char* f : {"speaker.jsonl", "aed.jsonl", "corpus.json"}) {
    if (ReadFileBytes(ws.paths().corpus / f) != ReadFileBytes(again / "corpus" / f)) bad.push_back(f);
  }
  std::vector<data::ClipRecord> sample;
  for (size_t i = 0; i < c.aed_records.size(); i += 48) sample.push_back(c.aed_records[i]);
  for (size_t i = 0; i < c.speaker_records.size(); i += 48) sample.push_back(c.speaker_records[i]);
  int audio_diff = 0, feature_diff = 0;
  for (const auto& r : sample) {
    if (ReadFileBytes(ws.paths().corpus / r.path) != ReadFileBytes(again / "corpus" / r.path)) ++audio_diff;
  }
  data::CacheFeatures(sample, again / "corpus", again / "cache", ws.options().jobs);
  for (const auto& r : sample) {
    const fs::path rel = fs::path("features") / (r.id + ".faed");
    if (ReadFileBytes(ws.paths().cache / rel) != ReadFileBytes(again / "cache" / rel)) ++feature_diff;
  }
  if (audio_diff) bad.push_back(std::to_string(audio_diff) + " audio files");
  if (feature_diff) bad.push_back(std::to_string(feature_diff) + " feature files");

  const int n_classes = c.config.n_event_classes;
  const AedSpec dual = AedSpec::Desk(BranchMode::kDual, AudioBranch::kCnn, n_classes, 128);
  models::AedModel m1(dual, 11), m2(dual, 11);
  models::SpeakerModel s1(models::SpeakerSpec::Desk(VoiceArch::kArch1), 11);
  models::SpeakerModel s2(models::SpeakerSpec::Desk(VoiceArch::kArch1), 11);
  if (models::EncodeCheckpoint(models::CaptureCheckpoint(m1.Params())) !=
          models::EncodeCheckpoint(models::CaptureCheckpoint(m2.Params())) ||
      models::EncodeCheckpoint(models::CaptureCheckpoint(s1.Params())) !=
          models::EncodeCheckpoint(models::CaptureCheckpoint(s2.Params()))) {
    bad.push_back("initial parameters");
  }

  ws.Embeddings(VoiceArch::kArch2);
  const auto stats = data::LoadNormStats(ws.paths().cache, "aed");
  auto train_recs = data::FilterSplit(c.aed_records, "train");
  auto val_recs = data::FilterSplit(c.aed_records, "val");
  train_recs.resize(300);
  val_recs.resize(100);
  const auto train = data::LoadAedSet(train_recs, ws.paths().cache, stats, n_classes, "arch2");
  const auto val = data::LoadAedSet(val_recs, ws.paths().cache, stats, n_classes, "arch2");
  const AedSpec spec = AedSpec::Desk(BranchMode::kDual, AudioBranch::kCnn, n_classes, train.embedding[0].dim(1));
  train::TrainConfig cfg;
  cfg.max_epochs = 2;
  cfg.seed = 3;
  const auto a = train::FitAed(train, val, spec, cfg, "arch2", again / "run_a");
  const auto b = train::FitAed(train, val, spec, cfg, "arch2", again / "run_b");
  for (const char* f : {"best.ckpt", "last.ckpt"}) {
    if (ReadFileBytes(again / "run_a" / f) != ReadFileBytes(again / "run_b" / f)) bad.push_back(std::string("checkpoint ") + f);
  }
  std::string detail = "manifests, " + std::to_string(sample.size()) + " audio and feature files, initial "
                       "parameters, augmentation-off checkpoints";
  if (!bad.empty()) {
    detail = "differ:";
    for (const auto& x : bad) detail += " " + x;
  }
  return {bad.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  FLAGS_logtostderr = true;
  google::InitGoogleLogging(argv[0]);
  Options opt;
  CLI::App app{"Acceptance criteria"};
  std::string work = opt.work.string();
  app.add_option("--work", work, "Shared work directory")->capture_default_str();
  app.add_option("--only", opt.only, "Comma list of criteria to run (default all)");
  app.add_option("--jobs", opt.jobs, "Worker threads for synthesis, features and embeddings")->capture_default_str();
  app.add_option("--speaker-epochs", opt.speaker_epochs, "Epoch cap for speaker pretraining")->capture_default_str();
  app.add_option("--aed-epochs", opt.aed_epochs, "Epoch cap for each event-detection run")->capture_default_str();
  app.add_option("--seeds", opt.seeds, "Seeds per event-detection configuration")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  opt.work = work;

  const std::vector<std::pair<std::string, std::function<Verdict(Workspace&)>>> criteria = {
      {"kernel gradient suite", GradientSuite},
      {"oracle equivalence", OracleEquivalence},
      {"shape conformance", Shapes},
      {"metric fidelity", MetricFidelity},
      {"scheduler arithmetic", SchedulerArithmetic},
      {"single-batch overfit", Overfit},
      {"voice branch improves mAP", VoiceBranchHelps},
      {"augmentation improves dual-branch training", AugmentationHelps},
      {"speaker pretraining accuracy", SpeakerPretraining},
      {"determinism", Determinism},
  };
  std::set<int> selected;
  if (!opt.only.empty()) {
    std::stringstream ss(opt.only);
    for (std::string tok; std::getline(ss, tok, ',');) selected.insert(std::stoi(tok));
  }

  Workspace ws(opt);
  json summary = json::array();
  int passed = 0, run = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    ++run;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[i].second(ws);
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = Seconds(t0);
    passed += v.pass;
    std::printf("[%s] %2d %s: %s (%.0f s)\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
    summary.push_back({{"criterion", id}, {"name", criteria[i].first}, {"pass", v.pass},
                       {"detail", v.detail}, {"seconds", secs}});
  }
  std::printf("%d/%d criteria passed\n", passed, run);
  WriteFileBytes(opt.work / "acceptance.json", summary.dump(2) + "\n");
  return passed == run ? 0 : 1;
}
