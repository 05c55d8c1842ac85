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

#include "vaed/train/train.h"

#include <glog/logging.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "vaed/common/error.h"
#include "vaed/common/faed.h"
#include "vaed/common/random.h"
#include "vaed/metrics/evaluate.h"
#include "vaed/models/aed_model.h"
#include "vaed/models/speaker_model.h"
#include "vaed/nn/adam.h"
#include "vaed/nn/loss.h"
#include "vaed/train/samplers.h"
#include "vaed/train/scheduler.h"

namespace vaed::train {

namespace fs = std::filesystem;
using nlohmann::json;

void TrainConfig::Validate() const {
  if (!(lr_shrink > 0 && lr_shrink < 1)) throw ValidationError("lr_shrink must be in (0, 1)");
  if (!(lr_initial > 0)) throw ValidationError("lr_initial must be positive");
  if (!(lr_min > 0 && lr_min < lr_initial)) {
    throw ValidationError("lr_min must be positive and below lr_initial");
  }
  if (batch_size < 2) throw ValidationError("batch_size must be at least 2");
  if (plateau_patience < 1) throw ValidationError("plateau_patience must be at least 1");
  if (max_epochs < 1) throw ValidationError("max_epochs must be at least 1");
  aug.Validate();
}

json TrainConfig::ToJson() const {
  return {{"lr_initial", lr_initial},
          {"batch_size", batch_size},
          {"lr_shrink", lr_shrink},
          {"lr_min", lr_min},
          {"plateau_patience", plateau_patience},
          {"max_epochs", max_epochs},
          {"seed", seed},
          {"balanced", balanced},
          {"aug",
           {{"enable", aug.EnableString()},
            {"time_mask_width", aug.time_mask_width},
            {"independent_frames", aug.independent_frames},
            {"mixup_alpha", aug.mixup_alpha},
            {"voice_dropout_p", aug.voice_dropout_p}}}};
}

TrainConfig TrainConfig::FromJson(const json& j) {
  TrainConfig c;
  c.lr_initial = j.value("lr_initial", c.lr_initial);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.lr_shrink = j.value("lr_shrink", c.lr_shrink);
  c.lr_min = j.value("lr_min", c.lr_min);
  c.plateau_patience = j.value("plateau_patience", c.plateau_patience);
  c.max_epochs = j.value("max_epochs", c.max_epochs);
  c.seed = j.value("seed", c.seed);
  c.balanced = j.value("balanced", c.balanced);
  if (j.contains("aug")) {
    const json& a = j.at("aug");
    c.aug = augment::AugmentConfig::Parse(a.value("enable", std::string("none")));
    c.aug.time_mask_width = a.value("time_mask_width", c.aug.time_mask_width);
    c.aug.independent_frames = a.value("independent_frames", c.aug.independent_frames);
    c.aug.mixup_alpha = a.value("mixup_alpha", c.aug.mixup_alpha);
    c.aug.voice_dropout_p = a.value("voice_dropout_p", c.aug.voice_dropout_p);
  }
  c.Validate();
  return c;
}

json EpochLog::ToJson() const {
  return {{"epoch", epoch},         {"train_loss", train_loss}, {"val_loss", val_loss},
          {"val_metric", val_metric}, {"lr", lr},               {"wall_time", wall_time},
          {"improved", improved}};
}

json FitResult::SummaryJson() const {
  json log = json::array();
  for (const EpochLog& e : epochs) log.push_back(e.ToJson());
  return {{"epochs_run", epochs.size()},
          {"best_epoch", best_epoch},
          {"best_metric", best_metric},
          {"reached_lr_floor", reached_lr_floor},
          {"final_lr", epochs.empty() ? 0.0 : epochs.back().lr},
          {"log", log}};
}

namespace {

// Computes gradients for one batch and returns its loss.
using StepFn = std::function<double(const std::vector<size_t>& batch, Rng& aug_rng)>;
struct ValResult {
  double loss;
  double metric;
};

struct Loop {
  const TrainConfig& config;
  size_t n_train;
  std::function<std::vector<size_t>(Rng&)> draw_epoch;
  StepFn step;
  std::function<ValResult()> validate;
  std::function<std::string(size_t)> id_of;
  nn::ParamList<float> params;
  json meta;
  const char* metric_name;
};

void DumpNonFinite(const std::optional<fs::path>& out_dir, int epoch, size_t batch,
                   const std::vector<std::string>& ids, const std::string& what) {
  if (out_dir) {
    const json j = {{"epoch", epoch}, {"batch", batch}, {"ids", ids}, {"error", what}};
    WriteFileBytes(*out_dir / "nonfinite.json", j.dump(2) + "\n");
  }
}

FitResult Run(Loop& loop, const std::optional<fs::path>& out_dir) {
  const TrainConfig& cfg = loop.config;
  cfg.Validate();
  if (loop.n_train < 2) throw ValidationError("training needs at least 2 examples");
  PlateauScheduler sched({cfg.lr_initial, cfg.lr_shrink, cfg.lr_min, cfg.plateau_patience});
  nn::Adam<float> adam(loop.params);
  Rng sampler_rng = MakeRng(cfg.seed, "sampler");
  Rng aug_rng = MakeRng(cfg.seed, "augment");
  const size_t bs = static_cast<size_t>(cfg.batch_size);

  std::ofstream jsonl;
  if (out_dir) {
    fs::create_directories(*out_dir);
    jsonl.open(*out_dir / "epochs.jsonl", std::ios::trunc);
    if (!jsonl) throw IoError("cannot write " + (*out_dir / "epochs.jsonl").string());
  }

  auto snapshot = [&](const nn::Adam<float>* opt, int epoch, double metric) {
    models::Checkpoint c = models::CaptureCheckpoint(loop.params, opt);
    for (auto& [k, v] : loop.meta.items()) c.meta[k] = v;
    c.meta["epoch"] = epoch;
    c.meta["metric"] = metric;
    c.meta["metric_name"] = loop.metric_name;
    c.meta["rng"] = {{"sampler", SerializeRng(sampler_rng)}, {"augment", SerializeRng(aug_rng)}};
    c.meta["scheduler"] = sched.State();
    c.meta["config"] = cfg.ToJson();
    return c;
  };

  FitResult result;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<size_t> order = loop.draw_epoch(sampler_rng);
    // Full batches only; a pass shorter than one batch becomes a single batch.
    const size_t n_batches = std::max<size_t>(1, order.size() / bs);
    double loss_sum = 0;
    for (size_t b = 0; b < n_batches; ++b) {
      const size_t begin = b * bs;
      const size_t end = order.size() < bs ? order.size() : begin + bs;
      const std::vector<size_t> batch(order.begin() + begin, order.begin() + end);
      std::vector<std::string> ids;
      for (size_t i : batch) ids.push_back(loop.id_of(i));
      nn::ZeroGrads(loop.params);
      double loss = 0;
      try {
        loss = loop.step(batch, aug_rng);
        if (!std::isfinite(loss)) throw NonFiniteError("loss is " + std::to_string(loss));
        adam.Step(sched.lr());
      } catch (const NonFiniteError& e) {
        DumpNonFinite(out_dir, epoch, b, ids, e.what());
        std::ostringstream msg;
        msg << "non-finite value in epoch " << epoch << " batch " << b << " (first id "
            << ids.front() << "): " << e.what();
        throw NonFiniteError(msg.str());
      }
      loss_sum += loss;
    }
    const ValResult val = loop.validate();
    EpochLog log;
    log.epoch = epoch;
    log.train_loss = loss_sum / static_cast<double>(n_batches);
    log.val_loss = val.loss;
    log.val_metric = val.metric;
    log.lr = sched.lr();
    log.improved = sched.Observe(val.metric);
    log.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.epochs.push_back(log);
    if (log.improved) {
      result.best = snapshot(nullptr, epoch, val.metric);
      if (out_dir) models::SaveCheckpoint(*out_dir / "best.ckpt", result.best);
    }
    if (jsonl.is_open()) jsonl << log.ToJson().dump() << "\n" << std::flush;
    LOG(INFO) << "epoch " << epoch << " train_loss " << log.train_loss << " val_loss "
              << log.val_loss << " " << loop.metric_name << " " << log.val_metric << " lr "
              << log.lr << (log.improved ? " *" : "");
    if (sched.stop()) {
      result.reached_lr_floor = true;
      break;
    }
  }
  result.best_epoch = sched.best_epoch();
  result.best_metric = sched.best();
  result.last = snapshot(&adam, static_cast<int>(result.epochs.size()), result.epochs.back().val_metric);
  if (out_dir) {
    models::SaveCheckpoint(*out_dir / "last.ckpt", result.last);
    WriteFileBytes(*out_dir / "summary.json", result.SummaryJson().dump(2) + "\n");
  }
  return result;
}

std::vector<int> Gather(const std::vector<int>& v, const std::vector<size_t>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (size_t i : idx) out.push_back(v[i]);
  return out;
}

void CheckDualInputs(const data::AedSet& set, const models::AedSpec& spec, const char* which) {
  if (spec.mode != models::BranchMode::kDual) return;
  if (set.embedding.size() != set.size()) {
    throw FusionError(std::string("dual-branch training needs embeddings for the ") + which + " set");
  }
}

// Applies the configured augmentations in order mixup, time mask, dropout.
void Augment(const augment::AugmentConfig& aug, bool dual, TensorF* x, TensorF* e, TensorF* y,
             Rng& rng) {
  if (aug.mixup) augment::Mixup(x, dual ? e : nullptr, y, aug.mixup_alpha, rng);
  if (!dual) return;
  if (aug.time_mask) augment::TimeMask(e, aug.time_mask_width, rng, aug.independent_frames);
  if (aug.voice_dropout) augment::VoiceDropout(e, aug.voice_dropout_p, nn::Mode::kTrain, rng);
}

std::vector<size_t> All(size_t n) {
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

}  // namespace

FitResult FitSpeaker(const data::SpeakerSet& train, const data::SpeakerSet& val,
                     const models::SpeakerSpec& spec, const TrainConfig& config,
                     const std::optional<fs::path>& out_dir) {
  spec.Validate();
  if (config.aug.any()) throw ValidationError("augmentation applies to event training only");
  models::SpeakerModel model(spec, DeriveSeed(config.seed, "init"));
  BalancedSpeakerSampler sampler(train.speaker);
  Loop loop{config,
            train.size(),
            [&](Rng& rng) {
              return config.balanced ? sampler.Draw(train.size(), rng) : Shuffled(train.size(), rng);
            },
            [&](const std::vector<size_t>& batch, Rng&) {
              const TensorF x = data::StackRows(train.logmel, batch);
              const std::vector<int> y = Gather(train.speaker, batch);
              const auto out = model.Forward(x, nn::Mode::kTrain);
              TensorF grad;
              const double loss = nn::CrossEntropy<float>(out.logits, y, &grad);
              if (std::isfinite(loss)) model.Backward(grad);
              return loss;
            },
            [&] {
              const auto s = metrics::ScoreSpeaker(model, val, config.batch_size);
              return ValResult{s.loss, s.accuracy};
            },
            [&](size_t i) { return train.ids[i]; },
            model.Params(),
            {{"task", "speaker"}, {"fingerprint", spec.Fingerprint()}, {"spec", spec.ToJson()}},
            "accuracy"};
  return Run(loop, out_dir);
}

FitResult FitAed(const data::AedSet& train, const data::AedSet& val, const models::AedSpec& spec,
                 const TrainConfig& config, const std::string& voice_arch,
                 const std::optional<fs::path>& out_dir) {
  spec.Validate();
  if (train.num_classes != spec.num_classes || val.num_classes != spec.num_classes) {
    throw ModelSpecError("class count of the data does not match the model");
  }
  CheckDualInputs(train, spec, "training");
  CheckDualInputs(val, spec, "validation");
  const bool dual = spec.mode == models::BranchMode::kDual;
  models::AedModel model(spec, DeriveSeed(config.seed, "init"));
  std::optional<BalancedClassSampler> sampler;
  if (config.balanced) sampler.emplace(train.labels, train.num_classes);
  json meta = {{"task", "aed"}, {"fingerprint", spec.Fingerprint()}, {"spec", spec.ToJson()}};
  if (dual) meta["voice_arch"] = voice_arch;
  Loop loop{config,
            train.size(),
            [&](Rng& rng) { return sampler ? sampler->Draw(train.size(), rng) : Shuffled(train.size(), rng); },
            [&](const std::vector<size_t>& batch, Rng& aug_rng) {
              TensorF x = data::StackRows(train.logmel, batch);
              TensorF y = data::MultiHot(train.labels, batch, train.num_classes);
              TensorF e;
              if (dual) e = data::StackRows(train.embedding, batch);
              Augment(config.aug, dual, &x, &e, &y, aug_rng);
              const auto out = model.Forward(x, dual ? &e : nullptr, nn::Mode::kTrain);
              TensorF grad;
              const double loss = nn::BinaryCrossEntropy<float>(out.clip_probs, y, &grad);
              if (std::isfinite(loss)) model.Backward(grad);
              return loss;
            },
            [&] {
              const auto s = metrics::ScoreAed(model, val, config.batch_size);
              return ValResult{s.loss, metrics::BuildReport(s.clip, s.truth).map};
            },
            [&](size_t i) { return train.ids[i]; },
            model.Params(),
            meta,
            "mAP"};
  return Run(loop, out_dir);
}

OverfitResult OverfitSpeaker(const data::SpeakerSet& batch, const models::SpeakerSpec& spec,
                             int max_steps, double lr, double loss_target, uint64_t seed) {
  models::SpeakerModel model(spec, DeriveSeed(seed, "init"));
  auto params = model.Params();
  nn::Adam<float> adam(params);
  const TensorF x = data::StackRows(batch.logmel, All(batch.size()));
  OverfitResult r;
  for (int k = 0; k < max_steps; ++k) {
    nn::ZeroGrads(params);
    const auto out = model.Forward(x, nn::Mode::kTrain);
    TensorF grad;
    const double loss = nn::CrossEntropy<float>(out.logits, batch.speaker, &grad);
    if (!std::isfinite(loss)) throw NonFiniteError("overfit loss became non-finite at step " + std::to_string(k));
    r.losses.push_back(loss);
    r.steps = k + 1;
    if (loss < loss_target) {
      r.steps = k;
      break;
    }
    model.Backward(grad);
    adam.Step(lr);
  }
  r.metric = metrics::ScoreSpeaker(model, batch, static_cast<int>(batch.size())).accuracy;
  return r;
}

OverfitResult OverfitAed(const data::AedSet& batch, const models::AedSpec& spec, int max_steps,
                         double lr, double loss_target, uint64_t seed) {
  CheckDualInputs(batch, spec, "overfit");
  const bool dual = spec.mode == models::BranchMode::kDual;
  models::AedModel model(spec, DeriveSeed(seed, "init"));
  auto params = model.Params();
  nn::Adam<float> adam(params);
  const auto idx = All(batch.size());
  const TensorF x = data::StackRows(batch.logmel, idx);
  const TensorF y = data::MultiHot(batch.labels, idx, batch.num_classes);
  TensorF e;
  if (dual) e = data::StackRows(batch.embedding, idx);
  OverfitResult r;
  for (int k = 0; k < max_steps; ++k) {
    nn::ZeroGrads(params);
    const auto out = model.Forward(x, dual ? &e : nullptr, nn::Mode::kTrain);
    TensorF grad;
    const double loss = nn::BinaryCrossEntropy<float>(out.clip_probs, y, &grad);
    if (!std::isfinite(loss)) throw NonFiniteError("overfit loss became non-finite at step " + std::to_string(k));
    r.losses.push_back(loss);
    r.steps = k + 1;
    if (loss < loss_target) {
      r.steps = k;
      break;
    }
    model.Backward(grad);
    adam.Step(lr);
  }
  const auto s = metrics::ScoreAed(model, batch, static_cast<int>(batch.size()));
  r.metric = metrics::BuildReport(s.clip, s.truth).map;
  return r;
}

}  // namespace vaed::train
