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

#ifndef VAED_NN_GRU_H_
#define VAED_NN_GRU_H_

#include <string>
#include <vector>

#include "vaed/nn/layer.h"

namespace vaed::nn {

enum class GruDirection { kForward, kBackward, kBidirectional };

// Gated recurrent unit over [N, T, D] with zero initial state. Per step, with
// gates stacked in (r, z, n) order in the weight rows:
//   r  = sigmoid(W_r x + U_r h + b_r)
//   z  = sigmoid(W_z x + U_z h + b_z)
//   n  = tanh(W_n x + r * (U_n h) + b_n)
//   h' = (1 - z) * n + z * h
// Output is [N, T, H], or [N, T, 2H] for bidirectional with the forward pass
// in the first H features and the time-reversed pass in the last H.
template <typename T>
class Gru : public Layer<T> {
 public:
  Gru(std::string name, int input_size, int hidden_size,
      GruDirection direction = GruDirection::kForward);

  Tensor<T> Forward(const Tensor<T>& x, Mode mode) override;
  Tensor<T> Backward(const Tensor<T>& dy) override;
  void CollectParams(ParamList<T>* out) override;
  std::string name() const override { return name_; }

  int hidden_size() const { return hidden_; }
  int output_size() const { return hidden_ * static_cast<int>(dirs_.size()); }

  struct DirectionParams {
    Param<T> w_ih;  // [3H, D]
    Param<T> w_hh;  // [3H, H]
    Param<T> bias;  // [3H]
    bool reverse = false;
    // Forward cache, all [N, T, *].
    Tensor<T> gates;   // r, z, n activations, [N, T, 3H]
    Tensor<T> hh_n;    // U_n h_{t-1}, [N, T, H]
    Tensor<T> states;  // h_t, [N, T, H]
  };
  std::vector<DirectionParams>& directions() { return dirs_; }

 private:
  void RunDirection(DirectionParams& d, const Tensor<T>& x, Tensor<T>* y, int offset);
  void BackDirection(DirectionParams& d, const Tensor<T>& dy, int offset, Tensor<T>* dx);

  std::string name_;
  int input_, hidden_;
  std::vector<DirectionParams> dirs_;
  Tensor<T> input_cache_;
};

}  // namespace vaed::nn

#endif  // VAED_NN_GRU_H_
