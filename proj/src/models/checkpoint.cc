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

#include "vaed/models/checkpoint.h"

#include <map>

#include "vaed/common/bytes.h"
#include "vaed/common/error.h"
#include "vaed/common/faed.h"

namespace vaed::models {

namespace {

constexpr std::string_view kMagic = "CKPT";

void PutEntries(ByteWriter* w, const NamedTensors& entries) {
  w->Put<uint32_t>(static_cast<uint32_t>(entries.size()));
  for (const auto& [name, t] : entries) {
    w->Put<uint32_t>(static_cast<uint32_t>(name.size()));
    w->PutBytes(name);
    w->Put<uint32_t>(static_cast<uint32_t>(t.ndim()));
    for (int d : t.shape()) w->Put<uint32_t>(static_cast<uint32_t>(d));
    w->PutFloats(t.data(), t.size());
  }
}

NamedTensors GetEntries(ByteReader* r) {
  const uint32_t count = r->Get<uint32_t>();
  NamedTensors out;
  for (uint32_t i = 0; i < count; ++i) {
    const uint32_t len = r->Get<uint32_t>();
    std::string name(r->Take(len));
    const uint32_t ndim = r->Get<uint32_t>();
    if (ndim > 8) throw FormatError(r->source() + ": tensor " + name + " has ndim " + std::to_string(ndim));
    Shape shape(ndim);
    for (auto& d : shape) d = static_cast<int>(r->Get<uint32_t>());
    if (NumElements(shape) * sizeof(float) > r->remaining()) {
      throw FormatError(r->source() + ": tensor " + name + " payload truncated");
    }
    TensorF t(shape);
    r->GetFloats(t.data(), t.size());
    out.emplace_back(std::move(name), std::move(t));
  }
  return out;
}

}  // namespace

std::string EncodeCheckpoint(const Checkpoint& ckpt) {
  ByteWriter w;
  w.PutBytes(kMagic);
  w.Put<uint32_t>(kCheckpointVersion);
  const std::string meta = ckpt.meta.dump();
  w.Put<uint32_t>(static_cast<uint32_t>(meta.size()));
  w.PutBytes(meta);
  PutEntries(&w, ckpt.params);
  PutEntries(&w, ckpt.optimizer);
  return std::move(w.str());
}

Checkpoint DecodeCheckpoint(std::string_view bytes, const std::string& source) {
  ByteReader r(bytes, source);
  if (r.Take(4) != kMagic) throw FormatError(source + ": not a checkpoint (bad magic)");
  const uint32_t version = r.Get<uint32_t>();
  if (version != kCheckpointVersion) {
    throw FormatError(source + ": unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt;
  const uint32_t meta_len = r.Get<uint32_t>();
  try {
    ckpt.meta = nlohmann::json::parse(r.Take(meta_len));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(source + ": corrupt checkpoint metadata: " + e.what());
  }
  ckpt.params = GetEntries(&r);
  ckpt.optimizer = GetEntries(&r);
  if (r.remaining() != 0) throw FormatError(source + ": trailing bytes after checkpoint");
  return ckpt;
}

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  WriteFileBytes(path, EncodeCheckpoint(ckpt));
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  return DecodeCheckpoint(ReadFileBytes(path), path.string());
}

Checkpoint CaptureCheckpoint(const nn::ParamList<float>& params, const nn::Adam<float>* adam) {
  Checkpoint ckpt;
  for (const nn::Param<float>* p : params) ckpt.params.emplace_back(p->name, p->value);
  if (adam != nullptr) {
    const nn::Adam<float>& a = *adam;
    for (size_t i = 0; i < a.params().size(); ++i) {
      ckpt.optimizer.emplace_back("adam.m." + a.params()[i]->name, a.first_moments()[i]);
      ckpt.optimizer.emplace_back("adam.v." + a.params()[i]->name, a.second_moments()[i]);
    }
    ckpt.meta["adam_step"] = a.step();
  }
  return ckpt;
}

void RestoreParams(const Checkpoint& ckpt, const std::string& fingerprint,
                   const nn::ParamList<float>& params) {
  const std::string have = ckpt.meta.value("fingerprint", std::string());
  if (have != fingerprint) {
    throw ModelSpecError("checkpoint fingerprint " + have + " does not match model " +
                         fingerprint);
  }
  if (ckpt.params.size() != params.size()) {
    throw ModelSpecError("checkpoint holds " + std::to_string(ckpt.params.size()) +
                         " tensors, model has " + std::to_string(params.size()));
  }
  std::map<std::string, const TensorF*> by_name;
  for (const auto& [name, t] : ckpt.params) by_name[name] = &t;
  for (const nn::Param<float>* p : params) {
    auto it = by_name.find(p->name);
    if (it == by_name.end()) throw ModelSpecError("checkpoint lacks parameter " + p->name);
    if (it->second->shape() != p->value.shape()) {
      throw ModelSpecError("parameter " + p->name + " has shape " +
                           ShapeToString(it->second->shape()) + " in checkpoint, expected " +
                           ShapeToString(p->value.shape()));
    }
  }
  for (nn::Param<float>* p : params) p->value = *by_name[p->name];
}

void RestoreOptimizer(const Checkpoint& ckpt, nn::Adam<float>* adam) {
  std::map<std::string, const TensorF*> by_name;
  for (const auto& [name, t] : ckpt.optimizer) by_name[name] = &t;
  for (size_t i = 0; i < adam->params().size(); ++i) {
    const std::string& n = adam->params()[i]->name;
    auto m = by_name.find("adam.m." + n), v = by_name.find("adam.v." + n);
    if (m == by_name.end() || v == by_name.end()) {
      throw ModelSpecError("checkpoint lacks optimizer state for " + n);
    }
    adam->first_moments()[i] = *m->second;
    adam->second_moments()[i] = *v->second;
  }
  adam->set_step(ckpt.meta.value("adam_step", int64_t{0}));
}

}  // namespace vaed::models
