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

#ifndef VAED_NN_LAYER_H_
#define VAED_NN_LAYER_H_

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "vaed/common/tensor.h"

namespace vaed::nn {

enum class Mode { kTrain, kEval };

// A named weight with its accumulated gradient. Non-trainable params hold
// buffers such as batch-norm running statistics; they are checkpointed but
// never touched by the optimizer.
template <typename T>
struct Param {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;
  bool trainable = true;

  Param() = default;
  Param(std::string n, Shape shape, bool is_trainable = true)
      : name(std::move(n)),
        value(shape),
        grad(is_trainable ? Tensor<T>(shape) : Tensor<T>()),
        trainable(is_trainable) {}
};

template <typename T>
using ParamList = std::vector<Param<T>*>;

// Layers cache whatever the backward pass needs during Forward, so one
// Forward must precede each Backward. Backward accumulates into Param::grad.
template <typename T>
class Layer {
 public:
  virtual ~Layer() = default;
  virtual Tensor<T> Forward(const Tensor<T>& x, Mode mode) = 0;
  virtual Tensor<T> Backward(const Tensor<T>& dy) = 0;
  virtual void CollectParams(ParamList<T>* out) {}
  virtual std::string name() const = 0;
};

template <typename T>
void ZeroGrads(const ParamList<T>& params) {
  for (Param<T>* p : params) {
    if (p->trainable) p->grad.SetZero();
  }
}

template <typename T>
class Sequential : public Layer<T> {
 public:
  explicit Sequential(std::string name = "seq") : name_(std::move(name)) {}

  template <typename L, typename... Args>
  L* Add(Args&&... args) {
    auto layer = std::make_unique<L>(std::forward<Args>(args)...);
    L* raw = layer.get();
    layers_.push_back(std::move(layer));
    return raw;
  }

  Tensor<T> Forward(const Tensor<T>& x, Mode mode) override {
    Tensor<T> h = x;
    for (auto& l : layers_) h = l->Forward(h, mode);
    return h;
  }
  Tensor<T> Backward(const Tensor<T>& dy) override {
    Tensor<T> g = dy;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->Backward(g);
    return g;
  }
  void CollectParams(ParamList<T>* out) override {
    for (auto& l : layers_) l->CollectParams(out);
  }
  std::string name() const override { return name_; }

  size_t size() const { return layers_.size(); }
  Layer<T>& at(size_t i) { return *layers_[i]; }

 private:
  std::string name_;
  std::vector<std::unique_ptr<Layer<T>>> layers_;
};

}  // namespace vaed::nn

#endif  // VAED_NN_LAYER_H_
