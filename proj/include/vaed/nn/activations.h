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

#ifndef VAED_NN_ACTIVATIONS_H_
#define VAED_NN_ACTIVATIONS_H_

#include <cstdint>
#include <string>

#include "vaed/common/random.h"
#include "vaed/nn/layer.h"

namespace vaed::nn {

template <typename T>
class Relu : public Layer<T> {
 public:
  explicit Relu(std::string name = "relu") : name_(std::move(name)) {}
  Tensor<T> Forward(const Tensor<T>& x, Mode mode) override;
  Tensor<T> Backward(const Tensor<T>& dy) override;
  std::string name() const override { return name_; }

 private:
  std::string name_;
  Tensor<T> output_;
};

template <typename T>
class Sigmoid : public Layer<T> {
 public:
  explicit Sigmoid(std::string name = "sigmoid") : name_(std::move(name)) {}
  Tensor<T> Forward(const Tensor<T>& x, Mode mode) override;
  Tensor<T> Backward(const Tensor<T>& dy) override;
  std::string name() const override { return name_; }

 private:
  std::string name_;
  Tensor<T> output_;
};

// Inverted dropout: in train mode each element is zeroed with probability p
// and survivors are scaled by 1/(1-p); eval mode is the identity.
template <typename T>
class Dropout : public Layer<T> {
 public:
  Dropout(std::string name, double p, uint64_t seed = 0);
  Tensor<T> Forward(const Tensor<T>& x, Mode mode) override;
  Tensor<T> Backward(const Tensor<T>& dy) override;
  std::string name() const override { return name_; }

  void Reseed(uint64_t seed) { rng_.seed(seed); }
  void set_rate(double p);
  double rate() const { return p_; }
  Rng& rng() { return rng_; }

 private:
  std::string name_;
  double p_;
  Rng rng_;
  Tensor<T> mask_;  // empty when the last forward was an identity
};

template <typename T>
inline T SigmoidScalar(T x) {
  // Split by sign so exp never overflows.
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  const T e = std::exp(x);
  return e / (T(1) + e);
}

}  // namespace vaed::nn

#endif  // VAED_NN_ACTIVATIONS_H_
