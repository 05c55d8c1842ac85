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

#include "vaed/nn/gru.h"

#include <cmath>

#include "vaed/common/error.h"
#include "vaed/nn/activations.h"
#include "vaed/nn/gemm.h"

namespace vaed::nn {

template <typename T>
Gru<T>::Gru(std::string name, int input_size, int hidden_size, GruDirection direction)
    : name_(std::move(name)), input_(input_size), hidden_(hidden_size) {
  auto make = [&](const std::string& suffix, bool reverse) {
    DirectionParams d;
    d.w_ih = Param<T>(name_ + ".weight_ih" + suffix, {3 * hidden_, input_});
    d.w_hh = Param<T>(name_ + ".weight_hh" + suffix, {3 * hidden_, hidden_});
    d.bias = Param<T>(name_ + ".bias" + suffix, {3 * hidden_});
    d.reverse = reverse;
    dirs_.push_back(std::move(d));
  };
  switch (direction) {
    case GruDirection::kForward:
      make("", false);
      break;
    case GruDirection::kBackward:
      make("", true);
      break;
    case GruDirection::kBidirectional:
      make("", false);
      make("_reverse", true);
      break;
  }
}

template <typename T>
Tensor<T> Gru<T>::Forward(const Tensor<T>& x, Mode) {
  if (x.ndim() != 3 || x.dim(2) != input_ || x.dim(1) < 1) {
    throw DimensionError(name_ + ": expected [N, T>=1, " + std::to_string(input_) +
                         "], got " + ShapeToString(x.shape()));
  }
  input_cache_ = x;
  Tensor<T> y({x.dim(0), x.dim(1), output_size()});
  for (size_t i = 0; i < dirs_.size(); ++i) {
    RunDirection(dirs_[i], x, &y, static_cast<int>(i) * hidden_);
  }
  return y;
}

template <typename T>
void Gru<T>::RunDirection(DirectionParams& d, const Tensor<T>& x, Tensor<T>* y, int offset) {
  const int n = x.dim(0), steps = x.dim(1), h = hidden_, g3 = 3 * hidden_;
  const int out_width = y->dim(2);
  // Input projections for every step at once: [N*T, 3H].
  Tensor<T> xw({n, steps, g3});
  for (int r = 0; r < n * steps; ++r) {
    std::copy(d.bias.value.data(), d.bias.value.data() + g3, xw.data() + static_cast<size_t>(r) * g3);
  }
  Gemm<T>(false, true, n * steps, g3, input_, x.data(), d.w_ih.value.data(), T(1), xw.data());

  d.gates = Tensor<T>({n, steps, g3});
  d.hh_n = Tensor<T>({n, steps, h});
  d.states = Tensor<T>({n, steps, h});
  std::vector<T> h_prev(static_cast<size_t>(n) * h, T(0));
  std::vector<T> uh(static_cast<size_t>(n) * g3);
  for (int s = 0; s < steps; ++s) {
    const int t = d.reverse ? steps - 1 - s : s;
    Gemm<T>(false, true, n, g3, h, h_prev.data(), d.w_hh.value.data(), T(0), uh.data());
    for (int b = 0; b < n; ++b) {
      const size_t row = static_cast<size_t>(b) * steps + t;
      const T* xr = xw.data() + row * g3;
      const T* ur = uh.data() + static_cast<size_t>(b) * g3;
      T* gates = d.gates.data() + row * g3;
      T* hn = d.hh_n.data() + row * h;
      T* state = d.states.data() + row * h;
      T* hp = h_prev.data() + static_cast<size_t>(b) * h;
      T* out = y->data() + row * out_width + offset;
      for (int j = 0; j < h; ++j) {
        const T r = SigmoidScalar(xr[j] + ur[j]);
        const T z = SigmoidScalar(xr[h + j] + ur[h + j]);
        const T un = ur[2 * h + j];
        const T cand = std::tanh(xr[2 * h + j] + r * un);
        const T next = (T(1) - z) * cand + z * hp[j];
        gates[j] = r;
        gates[h + j] = z;
        gates[2 * h + j] = cand;
        hn[j] = un;
        state[j] = next;
        out[j] = next;
      }
      std::copy(state, state + h, hp);
    }
  }
}

template <typename T>
Tensor<T> Gru<T>::Backward(const Tensor<T>& dy) {
  ExpectShape(dy.shape(), {input_cache_.dim(0), input_cache_.dim(1), output_size()},
              name_ + " backward");
  Tensor<T> dx(input_cache_.shape());
  for (size_t i = 0; i < dirs_.size(); ++i) {
    BackDirection(dirs_[i], dy, static_cast<int>(i) * hidden_, &dx);
  }
  return dx;
}

template <typename T>
void Gru<T>::BackDirection(DirectionParams& d, const Tensor<T>& dy, int offset, Tensor<T>* dx) {
  const Tensor<T>& x = input_cache_;
  const int n = x.dim(0), steps = x.dim(1), h = hidden_, g3 = 3 * hidden_;
  const int out_width = dy.dim(2);
  Tensor<T> dxw({n, steps, g3});
  std::vector<T> dh_next(static_cast<size_t>(n) * h, T(0));
  std::vector<T> h_prev(static_cast<size_t>(n) * h);
  std::vector<T> duh(static_cast<size_t>(n) * g3);
  for (int s = steps - 1; s >= 0; --s) {
    const int t = d.reverse ? steps - 1 - s : s;
    const int t_prev = d.reverse ? t + 1 : t - 1;
    for (int b = 0; b < n; ++b) {
      const size_t row = static_cast<size_t>(b) * steps + t;
      T* hp = h_prev.data() + static_cast<size_t>(b) * h;
      if (s == 0) {
        std::fill(hp, hp + h, T(0));
      } else {
        const T* src = d.states.data() + (static_cast<size_t>(b) * steps + t_prev) * h;
        std::copy(src, src + h, hp);
      }
      const T* gates = d.gates.data() + row * g3;
      const T* hn = d.hh_n.data() + row * h;
      const T* dout = dy.data() + row * out_width + offset;
      T* dn_row = dh_next.data() + static_cast<size_t>(b) * h;
      T* dxr = dxw.data() + row * g3;
      T* dur = duh.data() + static_cast<size_t>(b) * g3;
      for (int j = 0; j < h; ++j) {
        const T r = gates[j], z = gates[h + j], cand = gates[2 * h + j];
        const T dh = dout[j] + dn_row[j];
        const T dcand = dh * (T(1) - z);
        const T dz = dh * (hp[j] - cand);
        const T dcand_pre = dcand * (T(1) - cand * cand);
        const T dr = dcand_pre * hn[j];
        const T dr_pre = dr * r * (T(1) - r);
        const T dz_pre = dz * z * (T(1) - z);
        dxr[j] = dr_pre;
        dxr[h + j] = dz_pre;
        dxr[2 * h + j] = dcand_pre;
        dur[j] = dr_pre;
        dur[h + j] = dz_pre;
        dur[2 * h + j] = dcand_pre * r;
        dn_row[j] = dh * z;  // direct path to h_{t-1}; recurrent path added below
      }
    }
    Gemm<T>(true, false, g3, h, n, duh.data(), h_prev.data(), T(1), d.w_hh.grad.data());
    Gemm<T>(false, false, n, h, g3, duh.data(), d.w_hh.value.data(), T(1), dh_next.data());
  }
  Gemm<T>(true, false, g3, input_, n * steps, dxw.data(), x.data(), T(1), d.w_ih.grad.data());
  for (int r = 0; r < n * steps; ++r) {
    const T* row = dxw.data() + static_cast<size_t>(r) * g3;
    for (int j = 0; j < g3; ++j) d.bias.grad[j] += row[j];
  }
  Gemm<T>(false, false, n * steps, input_, g3, dxw.data(), d.w_ih.value.data(), T(1), dx->data());
}

template <typename T>
void Gru<T>::CollectParams(ParamList<T>* out) {
  for (DirectionParams& d : dirs_) {
    out->push_back(&d.w_ih);
    out->push_back(&d.w_hh);
    out->push_back(&d.bias);
  }
}

template class Gru<float>;
template class Gru<double>;

}  // namespace vaed::nn
