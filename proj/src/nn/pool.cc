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

#include "vaed/nn/pool.h"

#include "vaed/common/error.h"

namespace vaed::nn {

template <typename T>
MaxPool2d<T>::MaxPool2d(std::string name, int kernel_h, int kernel_w, bool ceil_mode)
    : name_(std::move(name)), kh_(kernel_h), kw_(kernel_w), ceil_(ceil_mode) {
  if (kh_ < 1 || kw_ < 1) throw DimensionError(name_ + ": pooling kernel must be >= 1");
}

template <typename T>
int MaxPool2d<T>::OutputSize(int in, int kernel, bool ceil_mode) {
  return ceil_mode ? (in + kernel - 1) / kernel : in / kernel;
}

template <typename T>
Tensor<T> MaxPool2d<T>::Forward(const Tensor<T>& x, Mode) {
  if (x.ndim() != 4) throw DimensionError(name_ + ": expected [N, C, H, W]");
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const int oh = OutputSize(h, kh_, ceil_), ow = OutputSize(w, kw_, ceil_);
  if (oh < 1 || ow < 1) throw DimensionError(name_ + ": input smaller than pooling window");
  input_shape_ = x.shape();
  Tensor<T> y({n, c, oh, ow});
  argmax_.assign(y.size(), 0);
  size_t out = 0;
  for (int plane = 0; plane < n * c; ++plane) {
    const size_t base = static_cast<size_t>(plane) * h * w;
    for (int oy = 0; oy < oh; ++oy) {
      const int y0 = oy * kh_, y1 = std::min(h, y0 + kh_);
      for (int ox = 0; ox < ow; ++ox, ++out) {
        const int x0 = ox * kw_, x1 = std::min(w, x0 + kw_);
        size_t best = base + static_cast<size_t>(y0) * w + x0;
        for (int yy = y0; yy < y1; ++yy) {
          for (int xx = x0; xx < x1; ++xx) {
            const size_t idx = base + static_cast<size_t>(yy) * w + xx;
            if (x[idx] > x[best]) best = idx;
          }
        }
        y[out] = x[best];
        argmax_[out] = best;
      }
    }
  }
  return y;
}

template <typename T>
Tensor<T> MaxPool2d<T>::Backward(const Tensor<T>& dy) {
  if (dy.size() != argmax_.size()) throw DimensionError(name_ + ": gradient shape mismatch");
  Tensor<T> dx(input_shape_);
  for (size_t i = 0; i < argmax_.size(); ++i) dx[argmax_[i]] += dy[i];
  return dx;
}

template <typename T>
Tensor<T> LinearSoftmaxPool<T>::Forward(const Tensor<T>& x, Mode) {
  if (x.ndim() != 3) throw DimensionError(name_ + ": expected [N, T, C]");
  input_ = x;
  const int n = x.dim(0), t = x.dim(1), c = x.dim(2);
  Tensor<T> y({n, c});
  for (int b = 0; b < n; ++b) {
    for (int k = 0; k < c; ++k) {
      T s1 = 0, s2 = 0;
      for (int i = 0; i < t; ++i) {
        const T p = x[(static_cast<size_t>(b) * t + i) * c + k];
        s1 += p;
        s2 += p * p;
      }
      y[static_cast<size_t>(b) * c + k] = s1 > T(0) ? s2 / s1 : T(0);
    }
  }
  return y;
}

template <typename T>
Tensor<T> LinearSoftmaxPool<T>::Backward(const Tensor<T>& dy) {
  const int n = input_.dim(0), t = input_.dim(1), c = input_.dim(2);
  ExpectShape(dy.shape(), {n, c}, name_ + " backward");
  Tensor<T> dx(input_.shape());
  for (int b = 0; b < n; ++b) {
    for (int k = 0; k < c; ++k) {
      T s1 = 0, s2 = 0;
      for (int i = 0; i < t; ++i) {
        const T p = input_[(static_cast<size_t>(b) * t + i) * c + k];
        s1 += p;
        s2 += p * p;
      }
      if (!(s1 > T(0))) continue;
      const T g = dy[static_cast<size_t>(b) * c + k];
      // d/dp_t (S2 / S1) = (2 p_t S1 - S2) / S1^2
      for (int i = 0; i < t; ++i) {
        const size_t idx = (static_cast<size_t>(b) * t + i) * c + k;
        dx[idx] = g * (T(2) * input_[idx] * s1 - s2) / (s1 * s1);
      }
    }
  }
  return dx;
}

template <typename T>
Tensor<T> TimeMean<T>::Forward(const Tensor<T>& x, Mode) {
  if (x.ndim() != 3) throw DimensionError(name_ + ": expected [N, T, D]");
  input_shape_ = x.shape();
  const int n = x.dim(0), t = x.dim(1), d = x.dim(2);
  Tensor<T> y({n, d});
  for (int b = 0; b < n; ++b) {
    T* out = y.data() + static_cast<size_t>(b) * d;
    for (int i = 0; i < t; ++i) {
      const T* row = x.data() + (static_cast<size_t>(b) * t + i) * d;
      for (int j = 0; j < d; ++j) out[j] += row[j];
    }
    for (int j = 0; j < d; ++j) out[j] /= static_cast<T>(t);
  }
  return y;
}

template <typename T>
Tensor<T> TimeMean<T>::Backward(const Tensor<T>& dy) {
  const int n = input_shape_[0], t = input_shape_[1], d = input_shape_[2];
  ExpectShape(dy.shape(), {n, d}, name_ + " backward");
  Tensor<T> dx(input_shape_);
  const T scale = T(1) / static_cast<T>(t);
  for (int b = 0; b < n; ++b) {
    for (int i = 0; i < t; ++i) {
      T* row = dx.data() + (static_cast<size_t>(b) * t + i) * d;
      for (int j = 0; j < d; ++j) row[j] = dy[static_cast<size_t>(b) * d + j] * scale;
    }
  }
  return dx;
}

template class MaxPool2d<float>;
template class MaxPool2d<double>;
template class LinearSoftmaxPool<float>;
template class LinearSoftmaxPool<double>;
template class TimeMean<float>;
template class TimeMean<double>;

}  // namespace vaed::nn
