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

#include "vaed/nn/ops.h"

#include "vaed/common/error.h"

namespace vaed::nn {

template <typename T>
Tensor<T> FlattenToFrames<T>::Forward(const Tensor<T>& x, Mode) {
  if (x.ndim() != 4) throw DimensionError(name_ + ": expected [N, C, T, F]");
  input_shape_ = x.shape();
  const int n = x.dim(0), c = x.dim(1), t = x.dim(2), f = x.dim(3);
  Tensor<T> y({n, t, c * f});
  for (int b = 0; b < n; ++b) {
    for (int ch = 0; ch < c; ++ch) {
      for (int i = 0; i < t; ++i) {
        const T* src = x.data() + ((static_cast<size_t>(b) * c + ch) * t + i) * f;
        T* dst = y.data() + (static_cast<size_t>(b) * t + i) * c * f + static_cast<size_t>(ch) * f;
        std::copy(src, src + f, dst);
      }
    }
  }
  return y;
}

template <typename T>
Tensor<T> FlattenToFrames<T>::Backward(const Tensor<T>& dy) {
  const int n = input_shape_[0], c = input_shape_[1], t = input_shape_[2], f = input_shape_[3];
  ExpectShape(dy.shape(), {n, t, c * f}, name_ + " backward");
  Tensor<T> dx(input_shape_);
  for (int b = 0; b < n; ++b) {
    for (int ch = 0; ch < c; ++ch) {
      for (int i = 0; i < t; ++i) {
        const T* src = dy.data() + (static_cast<size_t>(b) * t + i) * c * f + static_cast<size_t>(ch) * f;
        T* dst = dx.data() + ((static_cast<size_t>(b) * c + ch) * t + i) * f;
        std::copy(src, src + f, dst);
      }
    }
  }
  return dx;
}

template <typename T>
Tensor<T> SwapLast2(const Tensor<T>& x) {
  if (x.ndim() != 3) throw DimensionError("SwapLast2: expected a rank-3 tensor");
  const int n = x.dim(0), a = x.dim(1), bdim = x.dim(2);
  Tensor<T> y({n, bdim, a});
  for (int b = 0; b < n; ++b) {
    const T* src = x.data() + static_cast<size_t>(b) * a * bdim;
    T* dst = y.data() + static_cast<size_t>(b) * a * bdim;
    for (int i = 0; i < a; ++i) {
      for (int j = 0; j < bdim; ++j) dst[static_cast<size_t>(j) * a + i] = src[static_cast<size_t>(i) * bdim + j];
    }
  }
  return y;
}

template <typename T>
Tensor<T> SwapLastAxes<T>::Forward(const Tensor<T>& x, Mode) {
  return SwapLast2(x);
}

template <typename T>
Tensor<T> SwapLastAxes<T>::Backward(const Tensor<T>& dy) {
  return SwapLast2(dy);
}

template <typename T>
Tensor<T> ConcatFeatures(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.ndim() != 3 || b.ndim() != 3 || a.dim(0) != b.dim(0) || a.dim(1) != b.dim(1)) {
    throw FusionError("cannot concatenate branch outputs " + ShapeToString(a.shape()) +
                      " and " + ShapeToString(b.shape()));
  }
  const int n = a.dim(0), t = a.dim(1), da = a.dim(2), db = b.dim(2);
  Tensor<T> y({n, t, da + db});
  for (int r = 0; r < n * t; ++r) {
    T* dst = y.data() + static_cast<size_t>(r) * (da + db);
    std::copy(a.data() + static_cast<size_t>(r) * da, a.data() + static_cast<size_t>(r + 1) * da, dst);
    std::copy(b.data() + static_cast<size_t>(r) * db, b.data() + static_cast<size_t>(r + 1) * db, dst + da);
  }
  return y;
}

template <typename T>
std::pair<Tensor<T>, Tensor<T>> SplitFeatures(const Tensor<T>& x, int left) {
  const int n = x.dim(0), t = x.dim(1), d = x.dim(2), right = d - left;
  Tensor<T> a({n, t, left}), b({n, t, right});
  for (int r = 0; r < n * t; ++r) {
    const T* src = x.data() + static_cast<size_t>(r) * d;
    std::copy(src, src + left, a.data() + static_cast<size_t>(r) * left);
    std::copy(src + left, src + d, b.data() + static_cast<size_t>(r) * right);
  }
  return {std::move(a), std::move(b)};
}

template class FlattenToFrames<float>;
template class FlattenToFrames<double>;
template class SwapLastAxes<float>;
template class SwapLastAxes<double>;
template Tensor<float> SwapLast2(const Tensor<float>&);
template Tensor<double> SwapLast2(const Tensor<double>&);
template Tensor<float> ConcatFeatures(const Tensor<float>&, const Tensor<float>&);
template Tensor<double> ConcatFeatures(const Tensor<double>&, const Tensor<double>&);
template std::pair<Tensor<float>, Tensor<float>> SplitFeatures(const Tensor<float>&, int);
template std::pair<Tensor<double>, Tensor<double>> SplitFeatures(const Tensor<double>&, int);

}  // namespace vaed::nn
