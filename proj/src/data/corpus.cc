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

#include "vaed/data/corpus.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "vaed/common/error.h"
#include "vaed/common/faed.h"
#include "vaed/common/parallel.h"

namespace vaed::data {

namespace fs = std::filesystem;

void ClipRecord::Validate(Task task) const {
  if (id.empty()) throw ValidationError("clip record without id");
  if (split != "train" && split != "val" && split != "eval") {
    throw ValidationError("clip " + id + " has unknown split '" + split + "'");
  }
  if (task == Task::kSpeaker && !speaker.has_value()) {
    throw ValidationError("speaker record " + id + " has no speaker id");
  }
  if (task == Task::kAed && labels.empty()) {
    throw ValidationError("AED record " + id + " has no labels");
  }
}

nlohmann::json ClipRecord::ToJson() const {
  nlohmann::json j = {{"id", id}, {"path", path}, {"labels", labels}};
  j["speaker"] = speaker ? nlohmann::json(*speaker) : nlohmann::json(nullptr);
  j["split"] = split;
  return j;
}

ClipRecord ClipRecord::FromJson(const nlohmann::json& j, const std::string& source) {
  try {
    ClipRecord r;
    r.id = j.at("id");
    r.path = j.at("path");
    r.labels = j.at("labels").get<std::vector<int>>();
    if (!j.at("speaker").is_null()) r.speaker = j.at("speaker").get<int>();
    r.split = j.at("split");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(source + ": bad manifest record: " + e.what());
  }
}

void WriteManifest(const fs::path& path, const std::vector<ClipRecord>& records) {
  std::string out;
  for (const ClipRecord& r : records) out += r.ToJson().dump() + "\n";
  WriteFileBytes(path, out);
}

std::vector<ClipRecord> ReadManifest(const fs::path& path, Task task) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::vector<ClipRecord> out;
  std::set<std::string> ids;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(where + ": " + e.what());
    }
    ClipRecord r = ClipRecord::FromJson(j, where);
    r.Validate(task);
    if (!ids.insert(r.id).second) throw ValidationError(where + ": duplicate clip id " + r.id);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ClipRecord> FilterSplit(const std::vector<ClipRecord>& records,
                                    const std::string& split) {
  std::vector<ClipRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const ClipRecord& r) { return r.split == split; });
  return out;
}

void CorpusConfig::Validate() const {
  if (n_speakers < 1 || utterances_per_speaker < 1) throw ValidationError("empty speaker corpus");
  if (speaker_val_per_speaker < 1 || speaker_val_per_speaker >= utterances_per_speaker) {
    throw ValidationError("speaker validation count must leave training utterances");
  }
  if (!(utterance_min_s > 0 && utterance_min_s <= utterance_max_s && utterance_max_s <= 10)) {
    throw ValidationError("utterance durations must satisfy 0 < min <= max <= 10 s");
  }
  if (n_aed_clips < 1 || n_event_classes < 2) throw ValidationError("empty AED corpus");
  if (!(aed_val_fraction > 0 && aed_eval_fraction > 0 && aed_val_fraction + aed_eval_fraction < 1)) {
    throw ValidationError("AED split fractions must be positive and leave a training split");
  }
}

nlohmann::json CorpusConfig::ToJson() const {
  return {{"n_speakers", n_speakers},
          {"utterances_per_speaker", utterances_per_speaker},
          {"speaker_val_per_speaker", speaker_val_per_speaker},
          {"utterance_min_s", utterance_min_s},
          {"utterance_max_s", utterance_max_s},
          {"n_aed_clips", n_aed_clips},
          {"n_event_classes", n_event_classes},
          {"aed_val_fraction", aed_val_fraction},
          {"aed_eval_fraction", aed_eval_fraction},
          {"min_eval_positives", min_eval_positives},
          {"max_attempts", max_attempts}};
}

CorpusConfig CorpusConfig::FromJson(const nlohmann::json& j) {
  CorpusConfig c;
  c.n_speakers = j.value("n_speakers", c.n_speakers);
  c.utterances_per_speaker = j.value("utterances_per_speaker", c.utterances_per_speaker);
  c.speaker_val_per_speaker = j.value("speaker_val_per_speaker", c.speaker_val_per_speaker);
  c.utterance_min_s = j.value("utterance_min_s", c.utterance_min_s);
  c.utterance_max_s = j.value("utterance_max_s", c.utterance_max_s);
  c.n_aed_clips = j.value("n_aed_clips", c.n_aed_clips);
  c.n_event_classes = j.value("n_event_classes", c.n_event_classes);
  c.aed_val_fraction = j.value("aed_val_fraction", c.aed_val_fraction);
  c.aed_eval_fraction = j.value("aed_eval_fraction", c.aed_eval_fraction);
  c.min_eval_positives = j.value("min_eval_positives", c.min_eval_positives);
  c.max_attempts = j.value("max_attempts", c.max_attempts);
  return c;
}

namespace {

std::string NumberedId(const char* fmt, int a, int b = 0) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

}  // namespace

bool StratifySplits(std::vector<ClipRecord>* records, int n_classes, double val_fraction,
                    double eval_fraction, int min_eval_positives, Rng& rng) {
  std::vector<int> freq(static_cast<size_t>(n_classes), 0);
  for (const ClipRecord& r : *records)
    for (int c : r.labels) ++freq.at(static_cast<size_t>(c));
  std::map<int, std::vector<size_t>> by_key;
  for (size_t i = 0; i < records->size(); ++i) {
    const auto& labels = (*records)[i].labels;
    int key = labels.front();
    for (int c : labels)
      if (freq[c] < freq[key]) key = c;
    by_key[key].push_back(i);
  }
  for (auto& [key, idx] : by_key) {
    for (size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[UniformInt(rng, 0, i - 1)]);
    const size_t n_eval = static_cast<size_t>(std::lround(eval_fraction * idx.size()));
    const size_t n_val = static_cast<size_t>(std::lround(val_fraction * idx.size()));
    for (size_t i = 0; i < idx.size(); ++i) {
      (*records)[idx[i]].split = i < n_eval ? "eval" : i < n_eval + n_val ? "val" : "train";
    }
  }
  std::vector<int> eval_pos(static_cast<size_t>(n_classes), 0);
  for (const ClipRecord& r : *records)
    if (r.split == "eval")
      for (int c : r.labels) ++eval_pos[c];
  return std::all_of(eval_pos.begin(), eval_pos.end(),
                     [&](int n) { return n >= min_eval_positives; });
}

Corpus PlanCorpora(const CorpusConfig& config, uint64_t seed) {
  config.Validate();
  Corpus c;
  c.config = config;
  c.seed = seed;
  c.speakers = MakeSpeakerProfiles(config.n_speakers, seed);
  c.classes = DefaultEventClasses(config.n_event_classes, config.n_speakers, seed);

  for (int s = 0; s < config.n_speakers; ++s) {
    Rng rng = MakeRng(seed, "speaker_split/" + std::to_string(s));
    std::vector<int> order(static_cast<size_t>(config.utterances_per_speaker));
    std::iota(order.begin(), order.end(), 0);
    for (int i = config.utterances_per_speaker - 1; i > 0; --i) std::swap(order[i], order[UniformInt(rng, 0, i)]);
    std::vector<bool> held(order.size(), false);
    for (int i = 0; i < config.speaker_val_per_speaker; ++i) held[order[i]] = true;
    for (int u = 0; u < config.utterances_per_speaker; ++u) {
      ClipRecord r;
      r.id = NumberedId("spk%02d_u%03d", s, u);
      r.path = "audio/speaker/" + r.id + ".wav";
      r.speaker = s;
      r.split = held[u] ? "val" : "train";
      c.speaker_records.push_back(std::move(r));
    }
  }

  const int n_classes = static_cast<int>(c.classes.size());
  for (c.attempt = 0; c.attempt < config.max_attempts; ++c.attempt) {
    const uint64_t plan_seed = DeriveSeed(seed, "aed_plan/" + std::to_string(c.attempt));
    c.aed_records.clear();
    for (int i = 0; i < config.n_aed_clips; ++i) {
      ClipRecord r;
      r.id = NumberedId("aed_%05d", i);
      r.path = "audio/aed/" + r.id + ".wav";
      Rng rng = MakeRng(plan_seed, r.id);
      const int count = static_cast<int>(UniformInt(rng, 1, std::min(3, n_classes)));
      std::vector<int> pool(static_cast<size_t>(n_classes));
      std::iota(pool.begin(), pool.end(), 0);
      for (int k = 0; k < count; ++k) std::swap(pool[k], pool[UniformInt(rng, k, n_classes - 1)]);
      r.labels.assign(pool.begin(), pool.begin() + count);
      std::sort(r.labels.begin(), r.labels.end());
      c.aed_records.push_back(std::move(r));
    }
    Rng split_rng = MakeRng(plan_seed, "split");
    if (StratifySplits(&c.aed_records, n_classes, config.aed_val_fraction,
                       config.aed_eval_fraction, config.min_eval_positives, split_rng)) {
      return c;
    }
  }
  throw ValidationError("could not stratify the AED corpus after " +
                        std::to_string(config.max_attempts) + " attempts; add clips");
}

nlohmann::json CorpusToJson(const Corpus& c) {
  nlohmann::json speakers = nlohmann::json::array(), classes = nlohmann::json::array();
  for (const auto& s : c.speakers) speakers.push_back(s.ToJson());
  for (const auto& e : c.classes) classes.push_back(e.ToJson());
  return {{"config", c.config.ToJson()}, {"seed", c.seed},        {"attempt", c.attempt},
          {"speakers", speakers},         {"classes", classes}};
}

Corpus BuildCorpora(const CorpusConfig& config, uint64_t seed, const fs::path& out, int jobs) {
  Corpus c = PlanCorpora(config, seed);
  const uint64_t audio_seed = DeriveSeed(seed, "audio/" + std::to_string(c.attempt));
  ParallelFor(c.speaker_records.size(), jobs, [&](size_t i) {
    const ClipRecord& r = c.speaker_records[i];
    Rng rng = MakeRng(audio_seed, r.id);
    const double dur = UniformReal(rng, config.utterance_min_s, config.utterance_max_s);
    dsp::Waveform w = SynthSpeakerUtterance(c.speakers[*r.speaker], dur, rng);
    dsp::WriteWav(out / r.path, w.samples, dsp::kSampleRate);
  });
  ParallelFor(c.aed_records.size(), jobs, [&](size_t i) {
    const ClipRecord& r = c.aed_records[i];
    Rng rng = MakeRng(audio_seed, r.id);
    AedClip clip = SynthAedClipWithLabels(c.classes, c.speakers, r.labels, rng);
    dsp::WriteWav(out / r.path, clip.wave.samples, dsp::kSampleRate);
  });
  WriteManifest(out / "speaker.jsonl", c.speaker_records);
  WriteManifest(out / "aed.jsonl", c.aed_records);
  WriteFileBytes(out / "corpus.json", CorpusToJson(c).dump(2) + "\n");
  return c;
}

Corpus LoadCorpus(const fs::path& dir) {
  const fs::path meta = dir / "corpus.json";
  if (!fs::exists(meta)) {
    throw MissingPrerequisiteError("no corpus at " + dir.string(), "synth-data");
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFileBytes(meta));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(meta.string() + ": " + e.what());
  }
  Corpus c;
  c.config = CorpusConfig::FromJson(j.at("config"));
  c.seed = j.at("seed");
  c.attempt = j.at("attempt");
  for (const auto& s : j.at("speakers")) c.speakers.push_back(SpeakerProfile::FromJson(s));
  for (const auto& e : j.at("classes")) c.classes.push_back(EventClass::FromJson(e));
  c.speaker_records = ReadManifest(dir / "speaker.jsonl", Task::kSpeaker);
  c.aed_records = ReadManifest(dir / "aed.jsonl", Task::kAed);
  return c;
}

}  // namespace vaed::data
