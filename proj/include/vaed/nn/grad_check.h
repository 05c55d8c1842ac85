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

#ifndef VAED_NN_GRAD_CHECK_H_
#define VAED_NN_GRAD_CHECK_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vaed/nn/layer.h"

namespace vaed::nn {

// Worst disagreement between analytic and central-difference gradients,
// |analytic - numeric| / max(1, |analytic|, |numeric|).
struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_entry;  // "<param or input>[flat index]"
  size_t entries_checked = 0;
};

struct GradCheckOptions {
  double step = 1e-5;
  uint64_t seed = 1;
  Mode mode = Mode::kTrain;
  // Called before every forward pass, e.g. to reseed a dropout mask.
  std::function<void()> before_forward;
};

// Checks a layer under the scalar objective L = sum(R * layer(x)) with a fixed
// random R, against every trainable parameter entry and every input entry.
GradCheckResult CheckLayerGradients(Layer<double>& layer, const TensorD& input,
                                    const GradCheckOptions& options = {});

// Checks a scalar function f(x) given its analytic gradient at x.
GradCheckResult CheckScalarGradient(const std::function<double(const TensorD&)>& f,
                                    const TensorD& analytic, const TensorD& x,
                                    double step = 1e-5);

struct KernelCheck {
  std::string kernel;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  std::string worst_entry;
  bool passed() const { return max_rel_error < tolerance; }
};

// Runs the full f64 kernel suite (conv, pooling, normalization, dense,
// recurrent, activations, clip pooling and losses).
std::vector<KernelCheck> RunKernelGradientSuite(uint64_t seed, double tolerance = 1e-4);

}  // namespace vaed::nn

#endif  // VAED_NN_GRAD_CHECK_H_
