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

#include "vaed/nn/grad_check.h"

#include <algorithm>
#include <cmath>

#include "vaed/common/random.h"
#include "vaed/nn/activations.h"
#include "vaed/nn/batchnorm.h"
#include "vaed/nn/conv.h"
#include "vaed/nn/gru.h"
#include "vaed/nn/linear.h"
#include "vaed/nn/loss.h"
#include "vaed/nn/ops.h"
#include "vaed/nn/pool.h"

namespace vaed::nn {

namespace {

double RelError(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

void Track(GradCheckResult* r, double a, double num, const std::string& where, size_t i) {
  const double e = RelError(a, num);
  ++r->entries_checked;
  if (e >= r->max_rel_error) {
    r->max_rel_error = e;
    r->worst_entry = where + "[" + std::to_string(i) + "]";
  }
}

TensorD RandomTensor(Shape shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  TensorD t(std::move(shape));
  for (double& v : t.storage()) v = UniformReal(rng, lo, hi);
  return t;
}

// Values bounded away from zero so ReLU kinks stay outside the difference
// stencil.
TensorD AwayFromZero(Shape shape, Rng& rng) {
  TensorD t(std::move(shape));
  for (double& v : t.storage()) {
    const double mag = UniformReal(rng, 0.1, 1.0);
    v = UniformReal(rng, 0.0, 1.0) < 0.5 ? -mag : mag;
  }
  return t;
}

void RandomizeParams(Layer<double>& layer, Rng& rng, double scale = 0.5) {
  ParamList<double> params;
  layer.CollectParams(&params);
  for (Param<double>* p : params) {
    if (!p->trainable) continue;
    for (double& v : p->value.storage()) v = UniformReal(rng, -scale, scale);
  }
}

}  // namespace

GradCheckResult CheckLayerGradients(Layer<double>& layer, const TensorD& input,
                                    const GradCheckOptions& options) {
  Rng rng(options.seed);
  auto forward = [&](const TensorD& x) {
    if (options.before_forward) options.before_forward();
    return layer.Forward(x, options.mode);
  };
  TensorD y = forward(input);
  TensorD weights = RandomTensor(y.shape(), rng);
  auto objective = [&](const TensorD& x) {
    TensorD out = forward(x);
    double s = 0.0;
    for (size_t i = 0; i < out.size(); ++i) s += out[i] * weights[i];
    return s;
  };

  ParamList<double> params;
  layer.CollectParams(&params);
  ZeroGrads(params);
  forward(input);
  TensorD dx = layer.Backward(weights);

  GradCheckResult result;
  const double h = options.step;
  for (Param<double>* p : params) {
    if (!p->trainable) continue;
    for (size_t i = 0; i < p->value.size(); ++i) {
      const double orig = p->value[i];
      p->value[i] = orig + h;
      const double up = objective(input);
      p->value[i] = orig - h;
      const double down = objective(input);
      p->value[i] = orig;
      Track(&result, p->grad[i], (up - down) / (2 * h), p->name, i);
    }
  }
  TensorD x = input;
  for (size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double up = objective(x);
    x[i] = orig - h;
    const double down = objective(x);
    x[i] = orig;
    Track(&result, dx[i], (up - down) / (2 * h), "input", i);
  }
  return result;
}

GradCheckResult CheckScalarGradient(const std::function<double(const TensorD&)>& f,
                                    const TensorD& analytic, const TensorD& x,
                                    double step) {
  GradCheckResult result;
  TensorD probe = x;
  for (size_t i = 0; i < probe.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + step;
    const double up = f(probe);
    probe[i] = orig - step;
    const double down = f(probe);
    probe[i] = orig;
    Track(&result, analytic[i], (up - down) / (2 * step), "input", i);
  }
  return result;
}

std::vector<KernelCheck> RunKernelGradientSuite(uint64_t seed, double tolerance) {
  std::vector<KernelCheck> out;
  Rng rng(seed);
  auto record = [&](const std::string& name, const GradCheckResult& r) {
    out.push_back({name, r.max_rel_error, tolerance, r.worst_entry});
  };

  {
    Conv2d<double> conv("conv2d", {2, 3, 3, 3, 1, 1, 1, 1});
    RandomizeParams(conv, rng);
    record("conv2d", CheckLayerGradients(conv, RandomTensor({2, 2, 4, 4}, rng)));
  }
  {
    Conv2d<double> conv("conv2d_strided", {2, 2, 1, 8, 1, 2, 0, 0});
    RandomizeParams(conv, rng);
    record("conv2d_1x8_stride", CheckLayerGradients(conv, RandomTensor({2, 2, 3, 12}, rng)));
  }
  {
    Conv1d<double> conv("conv1d", 3, 2, 3, 1, 1);
    RandomizeParams(conv, rng);
    record("conv1d", CheckLayerGradients(conv, RandomTensor({2, 3, 7}, rng)));
  }
  {
    // Distinct values so no window has a tie within the difference stencil.
    MaxPool2d<double> pool("maxpool_ceil", 2, 2, true);
    TensorD x({2, 2, 5, 5});
    std::vector<double> vals(x.size());
    for (size_t i = 0; i < vals.size(); ++i) vals[i] = 0.01 * static_cast<double>(i);
    for (size_t i = vals.size(); i > 1; --i) {
      std::swap(vals[i - 1], vals[static_cast<size_t>(UniformInt(rng, 0, static_cast<int64_t>(i - 1)))]);
    }
    std::copy(vals.begin(), vals.end(), x.data());
    record("maxpool2d_ceil", CheckLayerGradients(pool, x));
  }
  {
    BatchNorm<double> bn("batchnorm", 3);
    RandomizeParams(bn, rng);
    record("batchnorm_train", CheckLayerGradients(bn, RandomTensor({4, 3, 5}, rng)));
    GradCheckOptions eval;
    eval.mode = Mode::kEval;
    bn.running_mean().value = RandomTensor({3}, rng);
    bn.running_var().value = RandomTensor({3}, rng, 0.5, 2.0);
    record("batchnorm_eval", CheckLayerGradients(bn, RandomTensor({4, 3, 5}, rng), eval));
  }
  {
    Linear<double> fc("linear", 5, 4);
    RandomizeParams(fc, rng);
    record("linear", CheckLayerGradients(fc, RandomTensor({2, 3, 5}, rng)));
  }
  {
    Gru<double> gru("gru", 2, 2, GruDirection::kForward);
    RandomizeParams(gru, rng, 0.8);
    record("gru_forward", CheckLayerGradients(gru, RandomTensor({2, 3, 2}, rng)));
  }
  {
    Gru<double> gru("bigru", 2, 3, GruDirection::kBidirectional);
    RandomizeParams(gru, rng, 0.8);
    record("gru_bidirectional", CheckLayerGradients(gru, RandomTensor({2, 4, 2}, rng)));
  }
  {
    Relu<double> relu;
    record("relu", CheckLayerGradients(relu, AwayFromZero({3, 7}, rng)));
  }
  {
    Sigmoid<double> sig;
    record("sigmoid", CheckLayerGradients(sig, RandomTensor({3, 7}, rng, -3, 3)));
  }
  {
    Dropout<double> drop("dropout", 0.5);
    GradCheckOptions opts;
    opts.before_forward = [&drop] { drop.Reseed(99); };
    record("dropout", CheckLayerGradients(drop, RandomTensor({4, 6}, rng), opts));
  }
  {
    LinearSoftmaxPool<double> pool;
    record("linear_softmax_pool", CheckLayerGradients(pool, RandomTensor({2, 5, 3}, rng, 0.05, 0.95)));
  }
  {
    TimeMean<double> mean;
    record("time_mean", CheckLayerGradients(mean, RandomTensor({2, 5, 3}, rng)));
  }
  {
    FlattenToFrames<double> flat;
    record("flatten_to_frames", CheckLayerGradients(flat, RandomTensor({2, 3, 4, 2}, rng)));
  }
  {
    TensorD pred = RandomTensor({3, 4}, rng, 0.05, 0.95);
    TensorD target = RandomTensor({3, 4}, rng, 0.0, 1.0);
    TensorD grad;
    BinaryCrossEntropy(pred, target, &grad);
    auto f = [&](const TensorD& p) { return BinaryCrossEntropy<double>(p, target, nullptr); };
    record("bce", CheckScalarGradient(f, grad, pred));
  }
  {
    TensorD logits = RandomTensor({3, 5}, rng, -2, 2);
    std::vector<int> labels = {0, 3, 4};
    TensorD grad;
    CrossEntropy<double>(logits, labels, &grad);
    auto f = [&](const TensorD& z) { return CrossEntropy<double>(z, labels, nullptr); };
    record("cross_entropy", CheckScalarGradient(f, grad, logits));
  }
  return out;
}

}  // namespace vaed::nn
