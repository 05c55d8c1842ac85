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

#include "vaed/models/blocks.h"

#include <cmath>

#include "vaed/common/error.h"
#include "vaed/common/random.h"
#include "vaed/dsp/log_mel.h"
#include "vaed/nn/activations.h"
#include "vaed/nn/batchnorm.h"
#include "vaed/nn/conv.h"

namespace vaed::models {

void AddConvBnRelu(nn::Sequential<float>* seq, const std::string& name, int in, int out,
                   int kernel_h, int kernel_w, int pad_h, int pad_w) {
  seq->Add<nn::Conv2d<float>>(name,
                              nn::Conv2dOptions{in, out, kernel_h, kernel_w, 1, 1, pad_h, pad_w});
  seq->Add<nn::BatchNorm<float>>(name + "_bn", out);
  seq->Add<nn::Relu<float>>();
}

LayerShapes TraceShapes(nn::Sequential<float>& seq, const TensorF& x, TensorF* out) {
  LayerShapes trace;
  TensorF h = x;
  for (size_t i = 0; i < seq.size(); ++i) {
    h = seq.at(i).Forward(h, Mode::kEval);
    trace.emplace_back(seq.at(i).name(), h.shape());
  }
  if (out != nullptr) *out = std::move(h);
  return trace;
}

TensorF AsImageBatch(const TensorF& logmel) {
  const Shape& s = logmel.shape();
  const bool flat = s.size() == 3 && s[1] == dsp::kNumFrames && s[2] == dsp::kNumMels;
  const bool image =
      s.size() == 4 && s[1] == 1 && s[2] == dsp::kNumFrames && s[3] == dsp::kNumMels;
  if (!flat && !image) {
    throw ModelSpecError("expected log-mel batch [N, 400, 64], got " + ShapeToString(s));
  }
  return logmel.Reshaped({s[0], 1, dsp::kNumFrames, dsp::kNumMels});
}

namespace {

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool Contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

void FillUniform(TensorF* t, Rng& rng, double bound) {
  for (float& v : t->storage()) v = static_cast<float>(UniformReal(rng, -bound, bound));
}

}  // namespace

void InitParams(const nn::ParamList<float>& params, uint64_t seed) {
  for (nn::Param<float>* p : params) {
    const std::string& n = p->name;
    TensorF& v = p->value;
    Rng rng = MakeRng(seed, n);
    if (Contains(n, ".weight_ih") || Contains(n, ".weight_hh")) {
      const int hidden = v.dim(0) / 3;
      FillUniform(&v, rng, 1.0 / std::sqrt(static_cast<double>(hidden)));
    } else if (EndsWith(n, ".weight")) {
      // Linear stores [in, out]; convolutions store [out, in, k...].
      const size_t fan_in = v.ndim() == 2 ? static_cast<size_t>(v.dim(0)) : v.size() / v.dim(0);
      FillUniform(&v, rng, std::sqrt(6.0 / static_cast<double>(fan_in)));
    } else if (EndsWith(n, ".gamma") || EndsWith(n, ".running_var")) {
      v.Fill(1.0f);
    } else if (EndsWith(n, ".beta") || EndsWith(n, ".running_mean") || Contains(n, ".bias")) {
      v.SetZero();
    } else {
      throw ModelSpecError("no initialization rule for parameter " + n);
    }
  }
}

size_t CountTrainable(const nn::ParamList<float>& params) {
  size_t n = 0;
  for (const nn::Param<float>* p : params) {
    if (p->trainable) n += p->value.size();
  }
  return n;
}

}  // namespace vaed::models
