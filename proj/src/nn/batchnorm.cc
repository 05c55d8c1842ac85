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

#include "vaed/nn/batchnorm.h"

#include <cmath>

#include "vaed/common/error.h"

namespace vaed::nn {

template <typename T>
BatchNorm<T>::BatchNorm(std::string name, int channels, T eps, T momentum)
    : name_(std::move(name)),
      channels_(channels),
      eps_(eps),
      momentum_(momentum),
      gamma_(name_ + ".gamma", {channels}),
      beta_(name_ + ".beta", {channels}),
      running_mean_(name_ + ".running_mean", {channels}, false),
      running_var_(name_ + ".running_var", {channels}, false) {
  gamma_.value.Fill(T(1));
  running_var_.value.Fill(T(1));
}

template <typename T>
Tensor<T> BatchNorm<T>::Forward(const Tensor<T>& x, Mode mode) {
  if (x.ndim() < 2 || x.dim(1) != channels_) {
    throw DimensionError(name_ + ": expected [N, " + std::to_string(channels_) +
                         ", ...], got " + ShapeToString(x.shape()));
  }
  const int n = x.dim(0);
  const size_t inner = x.size() / (static_cast<size_t>(n) * channels_);
  const size_t count = static_cast<size_t>(n) * inner;
  mode_ = mode;
  xhat_ = Tensor<T>(x.shape());
  inv_std_.assign(channels_, T(0));
  Tensor<T> y(x.shape());
  if (mode == Mode::kTrain && count < 2) {
    throw DegenerateBatchError(name_ + ": train-mode batch norm needs at least two "
                               "values per channel");
  }
  for (int c = 0; c < channels_; ++c) {
    T mean, var;
    if (mode == Mode::kTrain) {
      double s = 0;
      for (int b = 0; b < n; ++b) {
        const T* p = x.data() + (static_cast<size_t>(b) * channels_ + c) * inner;
        for (size_t i = 0; i < inner; ++i) s += p[i];
      }
      mean = static_cast<T>(s / static_cast<double>(count));
      double ss = 0;
      for (int b = 0; b < n; ++b) {
        const T* p = x.data() + (static_cast<size_t>(b) * channels_ + c) * inner;
        for (size_t i = 0; i < inner; ++i) {
          const double d = p[i] - mean;
          ss += d * d;
        }
      }
      var = static_cast<T>(ss / static_cast<double>(count));
      const T unbiased = static_cast<T>(ss / static_cast<double>(count - 1));
      running_mean_.value[c] = (T(1) - momentum_) * running_mean_.value[c] + momentum_ * mean;
      running_var_.value[c] = (T(1) - momentum_) * running_var_.value[c] + momentum_ * unbiased;
    } else {
      mean = running_mean_.value[c];
      var = running_var_.value[c];
    }
    const T inv = T(1) / std::sqrt(var + eps_);
    inv_std_[c] = inv;
    const T g = gamma_.value[c], bt = beta_.value[c];
    for (int b = 0; b < n; ++b) {
      const size_t off = (static_cast<size_t>(b) * channels_ + c) * inner;
      for (size_t i = 0; i < inner; ++i) {
        const T h = (x[off + i] - mean) * inv;
        xhat_[off + i] = h;
        y[off + i] = g * h + bt;
      }
    }
  }
  return y;
}

template <typename T>
Tensor<T> BatchNorm<T>::Backward(const Tensor<T>& dy) {
  ExpectShape(dy.shape(), xhat_.shape(), name_ + " backward");
  const int n = dy.dim(0);
  const size_t inner = dy.size() / (static_cast<size_t>(n) * channels_);
  const T count = static_cast<T>(static_cast<size_t>(n) * inner);
  Tensor<T> dx(dy.shape());
  for (int c = 0; c < channels_; ++c) {
    T sum_dy = 0, sum_dy_xhat = 0;
    for (int b = 0; b < n; ++b) {
      const size_t off = (static_cast<size_t>(b) * channels_ + c) * inner;
      for (size_t i = 0; i < inner; ++i) {
        sum_dy += dy[off + i];
        sum_dy_xhat += dy[off + i] * xhat_[off + i];
      }
    }
    gamma_.grad[c] += sum_dy_xhat;
    beta_.grad[c] += sum_dy;
    const T scale = gamma_.value[c] * inv_std_[c];
    const T mean_dy = sum_dy / count, mean_dy_xhat = sum_dy_xhat / count;
    for (int b = 0; b < n; ++b) {
      const size_t off = (static_cast<size_t>(b) * channels_ + c) * inner;
      for (size_t i = 0; i < inner; ++i) {
        dx[off + i] = mode_ == Mode::kTrain
                          ? scale * (dy[off + i] - mean_dy - xhat_[off + i] * mean_dy_xhat)
                          : scale * dy[off + i];
      }
    }
  }
  return dx;
}

template <typename T>
void BatchNorm<T>::CollectParams(ParamList<T>* out) {
  out->push_back(&gamma_);
  out->push_back(&beta_);
  out->push_back(&running_mean_);
  out->push_back(&running_var_);
}

template class BatchNorm<float>;
template class BatchNorm<double>;

}  // namespace vaed::nn
