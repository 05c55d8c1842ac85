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

#include "vaed/data/cache.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>

#include "vaed/common/error.h"
#include "vaed/common/faed.h"
#include "vaed/common/parallel.h"
#include "vaed/common/random.h"
#include "vaed/dsp/waveform.h"
#include "vaed/models/checkpoint.h"
#include "vaed/models/speaker_model.h"

namespace vaed::data {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kFeatureVersion = "logmel-1024-400-64-v1";
constexpr int kEmbedBatch = 25;

std::string Hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string HashBytes(std::string_view bytes, std::string_view salt) {
  return Hex(Fnv1a64(bytes, Fnv1a64(salt)));
}

// <dir>/index.json: {id: {"input": hash, "output": hash}}.
class HashIndex {
 public:
  explicit HashIndex(fs::path dir) : path_(std::move(dir) / "index.json") {
    if (!fs::exists(path_)) return;
    try {
      entries_ = nlohmann::json::parse(ReadFileBytes(path_));
    } catch (const nlohmann::json::parse_error&) {
      entries_ = nlohmann::json::object();  // a corrupt index only costs a rebuild
    }
  }
  bool Fresh(const std::string& id, const std::string& input, const fs::path& output) {
    std::string want;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = entries_.find(id);
      if (it == entries_.end() || it->value("input", "") != input) return false;
      want = it->value("output", "");
    }
    return fs::exists(output) && want == HashBytes(ReadFileBytes(output), "");
  }
  void Set(const std::string& id, const std::string& input, const std::string& output) {
    std::lock_guard<std::mutex> lock(mu_);
    entries_[id] = {{"input", input}, {"output", output}};
  }
  void Save() const { WriteFileBytes(path_, entries_.dump(1) + "\n"); }

 private:
  fs::path path_;
  nlohmann::json entries_ = nlohmann::json::object();
  std::mutex mu_;
};

class ErrorSink {
 public:
  void Add(const std::string& id, const std::string& msg) {
    std::lock_guard<std::mutex> lock(mu_);
    errors_.push_back({id, msg});
  }
  std::vector<RecordError> Take() {
    std::sort(errors_.begin(), errors_.end(),
              [](const RecordError& a, const RecordError& b) { return a.id < b.id; });
    return std::move(errors_);
  }

 private:
  std::mutex mu_;
  std::vector<RecordError> errors_;
};

fs::path FeaturePath(const fs::path& cache, const std::string& id) {
  return cache / "features" / (id + ".faed");
}

fs::path EmbeddingPath(const fs::path& cache, const std::string& arch, const std::string& id) {
  return cache / "embeddings" / arch / (id + ".faed");
}

TensorF LoadArray(const fs::path& path, const Shape& expected_tail, const std::string& stage) {
  if (!fs::exists(path)) throw MissingPrerequisiteError("missing cache file " + path.string(), stage);
  FaedArray a = ReadFaed(path);
  TensorF t(a.dims, std::move(a.values));
  if (t.shape() != expected_tail) {
    throw FormatError(path.string() + ": expected shape " + ShapeToString(expected_tail) +
                      ", found " + ShapeToString(t.shape()));
  }
  return t;
}

}  // namespace

nlohmann::json CacheReport::ToJson() const {
  nlohmann::json errs = nlohmann::json::array();
  for (const auto& e : errors) errs.push_back({{"id", e.id}, {"error", e.message}});
  return {{"written", written}, {"skipped", skipped}, {"failed", errors.size()}, {"errors", errs}};
}

CacheReport CacheFeatures(const std::vector<ClipRecord>& records, const fs::path& audio_root,
                          const fs::path& cache_dir, int jobs) {
  HashIndex index(cache_dir / "features");
  ErrorSink sink;
  std::vector<char> wrote(records.size(), 0), ok(records.size(), 0);
  ParallelFor(records.size(), jobs, [&](size_t i) {
    const ClipRecord& r = records[i];
    try {
      const fs::path audio = fs::path(r.path).is_absolute() ? fs::path(r.path) : audio_root / r.path;
      if (!fs::exists(audio)) throw IoError("missing audio file " + audio.string());
      const std::string bytes = ReadFileBytes(audio);
      const std::string in_hash = HashBytes(bytes, kFeatureVersion);
      const fs::path out = FeaturePath(cache_dir, r.id);
      if (index.Fresh(r.id, in_hash, out)) {
        ok[i] = 1;
        return;
      }
      dsp::WavData wav = dsp::DecodeWav(bytes, audio.string());
      dsp::Waveform w = dsp::PrepareWaveform(wav.samples, wav.sample_rate, r.id);
      dsp::LogMelFeature f = dsp::LogMel(w);
      const std::string encoded = EncodeFaed(f.values.shape(), f.values.values());
      WriteFileBytes(out, encoded);
      index.Set(r.id, in_hash, HashBytes(encoded, ""));
      wrote[i] = ok[i] = 1;
    } catch (const std::exception& e) {
      sink.Add(r.id, e.what());
    }
  });
  index.Save();
  CacheReport report;
  for (size_t i = 0; i < records.size(); ++i) {
    report.written += wrote[i];
    report.skipped += ok[i] && !wrote[i];
  }
  report.errors = sink.Take();
  return report;
}

TensorF LoadFeature(const fs::path& cache_dir, const std::string& id) {
  return LoadArray(FeaturePath(cache_dir, id), {dsp::kNumFrames, dsp::kNumMels}, "featurize");
}

dsp::NormStats ComputeNormStats(const std::vector<ClipRecord>& records, const fs::path& cache_dir,
                                const std::string& name) {
  dsp::NormStatsAccumulator acc;
  for (const ClipRecord& r : records) acc.Add({LoadFeature(cache_dir, r.id)});
  dsp::NormStats s = acc.Finish();
  const TensorF t = dsp::NormStatsToTensor(s);
  WriteFaed(cache_dir / "stats" / (name + ".faed"), t.shape(), t.values());
  return s;
}

dsp::NormStats LoadNormStats(const fs::path& cache_dir, const std::string& name) {
  const fs::path p = cache_dir / "stats" / (name + ".faed");
  if (!fs::exists(p)) throw MissingPrerequisiteError("missing normalization stats " + p.string(), "featurize");
  FaedArray a = ReadFaed(p);
  return dsp::NormStatsFromTensor(TensorF(a.dims, std::move(a.values)), p.string());
}

CacheReport CacheEmbeddings(const std::vector<ClipRecord>& records, const fs::path& cache_dir,
                            const fs::path& checkpoint, const std::string& arch,
                            const dsp::NormStats& stats, int jobs) {
  if (!fs::exists(checkpoint)) {
    throw MissingPrerequisiteError("missing speaker checkpoint " + checkpoint.string(),
                                   "pretrain-speaker");
  }
  const models::Checkpoint ckpt = models::LoadCheckpoint(checkpoint);
  const models::SpeakerSpec spec = models::SpeakerSpec::FromJson(ckpt.meta.at("spec"));
  const TensorF stats_t = dsp::NormStatsToTensor(stats);
  const std::string salt =
      ckpt.meta.value("fingerprint", "") + HashBytes(EncodeCheckpoint(ckpt), "") +
      HashBytes(EncodeFaed(stats_t.shape(), stats_t.values()), "");

  HashIndex index(cache_dir / "embeddings" / arch);
  ErrorSink sink;
  std::vector<char> wrote(records.size(), 0), ok(records.size(), 0);
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(records.size())));
  ParallelFor(static_cast<size_t>(workers), workers, [&](size_t w) {
    models::SpeakerModel model(spec);
    models::RestoreParams(ckpt, spec.Fingerprint(), model.Params());
    std::vector<size_t> pending;
    std::vector<std::string> hashes;
    auto write_batch = [&] {
      TensorF batch({static_cast<int>(pending.size()), dsp::kNumFrames, dsp::kNumMels});
      const size_t feat = static_cast<size_t>(dsp::kNumFrames) * dsp::kNumMels;
      for (size_t b = 0; b < pending.size(); ++b) {
        const TensorF x = dsp::Normalize({LoadFeature(cache_dir, records[pending[b]].id)}, stats).values;
        std::copy(x.data(), x.data() + feat, batch.data() + b * feat);
      }
      const TensorF emb = model.Embed(batch);
      const size_t per = emb.size() / pending.size();
      const Shape one = {emb.dim(1), emb.dim(2)};
      for (size_t b = 0; b < pending.size(); ++b) {
        const std::string& id = records[pending[b]].id;
        const std::string encoded = EncodeFaed(one, {emb.data() + b * per, per});
        WriteFileBytes(EmbeddingPath(cache_dir, arch, id), encoded);
        index.Set(id, hashes[b], HashBytes(encoded, ""));
        wrote[pending[b]] = ok[pending[b]] = 1;
      }
    };
    auto flush = [&] {
      if (pending.empty()) return;
      try {
        write_batch();
      } catch (const std::exception& e) {
        for (size_t i : pending) sink.Add(records[i].id, e.what());
      }
      pending.clear();
      hashes.clear();
    };
    for (size_t i = w; i < records.size(); i += static_cast<size_t>(workers)) {
      const ClipRecord& r = records[i];
      try {
        const fs::path feat = FeaturePath(cache_dir, r.id);
        if (!fs::exists(feat)) throw MissingPrerequisiteError("missing features for " + r.id, "featurize");
        const std::string in_hash = HashBytes(ReadFileBytes(feat), salt);
        if (index.Fresh(r.id, in_hash, EmbeddingPath(cache_dir, arch, r.id))) {
          ok[i] = 1;
          continue;
        }
        pending.push_back(i);
        hashes.push_back(in_hash);
      } catch (const std::exception& e) {
        sink.Add(r.id, e.what());
      }
      if (pending.size() == kEmbedBatch) flush();
    }
    flush();
  });
  index.Save();
  CacheReport report;
  for (size_t i = 0; i < records.size(); ++i) {
    report.written += wrote[i];
    report.skipped += ok[i] && !wrote[i];
  }
  report.errors = sink.Take();
  return report;
}

TensorF LoadEmbedding(const fs::path& cache_dir, const std::string& arch, const std::string& id) {
  const fs::path p = EmbeddingPath(cache_dir, arch, id);
  if (!fs::exists(p)) throw MissingPrerequisiteError("missing embedding " + p.string(), "embed");
  FaedArray a = ReadFaed(p);
  TensorF t(a.dims, std::move(a.values));
  if (t.ndim() != 2 || t.dim(0) != dsp::kNumFrames / 4) {
    throw FormatError(p.string() + ": expected a [100, E] embedding, found " + ShapeToString(t.shape()));
  }
  return t;
}

std::vector<RecordError> AuditCache(const std::vector<ClipRecord>& records, const fs::path& cache_dir,
                                    const std::optional<std::string>& arch) {
  std::vector<RecordError> errors;
  for (const ClipRecord& r : records) {
    try {
      LoadFeature(cache_dir, r.id);
      if (arch) LoadEmbedding(cache_dir, *arch, r.id);
    } catch (const Error& e) {
      errors.push_back({r.id, e.what()});
    }
  }
  return errors;
}

}  // namespace vaed::data
