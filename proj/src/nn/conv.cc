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

#include "vaed/nn/conv.h"

#include <algorithm>
#include <vector>

#include "vaed/common/error.h"
#include "vaed/nn/gemm.h"

namespace vaed::nn {

int ConvOutputSize(int in, int kernel, int stride, int pad) {
  const int padded = in + 2 * pad;
  if (in <= 0 || padded < kernel || stride < 1) {
    throw DimensionError("convolution window " + std::to_string(kernel) +
                         " does not fit input extent " + std::to_string(in) +
                         " with padding " + std::to_string(pad));
  }
  return (padded - kernel) / stride + 1;
}

namespace {

struct Geometry {
  int c, h, w, kh, kw, sh, sw, ph, pw, oh, ow;
  int patch() const { return c * kh * kw; }
  int positions() const { return oh * ow; }
};

Geometry MakeGeometry(const Conv2dOptions& o, int h, int w) {
  return Geometry{o.in_channels,
                  h,
                  w,
                  o.kernel_h,
                  o.kernel_w,
                  o.stride_h,
                  o.stride_w,
                  o.pad_h,
                  o.pad_w,
                  ConvOutputSize(h, o.kernel_h, o.stride_h, o.pad_h),
                  ConvOutputSize(w, o.kernel_w, o.stride_w, o.pad_w)};
}

// cols[(c*kh + i)*kw + j][oy*ow + ox] = x[c][oy*sh - ph + i][ox*sw - pw + j]
template <typename T>
void Im2Col(const Geometry& g, const T* x, T* cols) {
  for (int c = 0; c < g.c; ++c) {
    for (int i = 0; i < g.kh; ++i) {
      for (int j = 0; j < g.kw; ++j) {
        T* row = cols + static_cast<size_t>((c * g.kh + i) * g.kw + j) * g.positions();
        for (int oy = 0; oy < g.oh; ++oy) {
          const int y = oy * g.sh - g.ph + i;
          T* out = row + static_cast<size_t>(oy) * g.ow;
          if (y < 0 || y >= g.h) {
            std::fill(out, out + g.ow, T(0));
            continue;
          }
          const T* src = x + (static_cast<size_t>(c) * g.h + y) * g.w;
          if (g.sw == 1) {
            // Contiguous run; only the borders need zeroing.
            const int ox_lo = std::max(0, g.pw - j);
            const int ox_hi = std::min(g.ow, g.w + g.pw - j);
            std::fill(out, out + std::max(0, std::min(ox_lo, g.ow)), T(0));
            if (ox_hi > ox_lo) {
              std::copy(src + ox_lo - g.pw + j, src + ox_hi - g.pw + j, out + ox_lo);
            }
            if (ox_hi < g.ow) std::fill(out + std::max(ox_hi, 0), out + g.ow, T(0));
          } else {
            for (int ox = 0; ox < g.ow; ++ox) {
              const int xx = ox * g.sw - g.pw + j;
              out[ox] = (xx >= 0 && xx < g.w) ? src[xx] : T(0);
            }
          }
        }
      }
    }
  }
}

template <typename T>
void Col2Im(const Geometry& g, const T* cols, T* dx) {
  for (int c = 0; c < g.c; ++c) {
    for (int i = 0; i < g.kh; ++i) {
      for (int j = 0; j < g.kw; ++j) {
        const T* row = cols + static_cast<size_t>((c * g.kh + i) * g.kw + j) * g.positions();
        for (int oy = 0; oy < g.oh; ++oy) {
          const int y = oy * g.sh - g.ph + i;
          if (y < 0 || y >= g.h) continue;
          T* dst = dx + (static_cast<size_t>(c) * g.h + y) * g.w;
          const T* in = row + static_cast<size_t>(oy) * g.ow;
          for (int ox = 0; ox < g.ow; ++ox) {
            const int xx = ox * g.sw - g.pw + j;
            if (xx >= 0 && xx < g.w) dst[xx] += in[ox];
          }
        }
      }
    }
  }
}

template <typename T>
Tensor<T> ConvForward(const Conv2dOptions& opt, const Tensor<T>& x4,
                      const Param<T>& weight, const Param<T>& bias) {
  const int n = x4.dim(0);
  const Geometry g = MakeGeometry(opt, x4.dim(2), x4.dim(3));
  const int co = opt.out_channels;
  Tensor<T> y({n, co, g.oh, g.ow});
  std::vector<T> cols(static_cast<size_t>(g.patch()) * g.positions());
  const size_t in_stride = static_cast<size_t>(g.c) * g.h * g.w;
  const size_t out_stride = static_cast<size_t>(co) * g.positions();
  for (int b = 0; b < n; ++b) {
    Im2Col(g, x4.data() + b * in_stride, cols.data());
    T* yb = y.data() + b * out_stride;
    for (int o = 0; o < co; ++o) {
      std::fill(yb + static_cast<size_t>(o) * g.positions(),
                yb + static_cast<size_t>(o + 1) * g.positions(), bias.value[o]);
    }
    Gemm<T>(false, false, co, g.positions(), g.patch(), weight.value.data(),
            cols.data(), T(1), yb);
  }
  return y;
}

template <typename T>
Tensor<T> ConvBackward(const Conv2dOptions& opt, const Tensor<T>& x4,
                       const Tensor<T>& dy, Param<T>& weight, Param<T>& bias) {
  const int n = x4.dim(0);
  const Geometry g = MakeGeometry(opt, x4.dim(2), x4.dim(3));
  const int co = opt.out_channels;
  ExpectShape(dy.shape(), {n, co, g.oh, g.ow}, "conv backward");
  Tensor<T> dx(x4.shape());
  std::vector<T> cols(static_cast<size_t>(g.patch()) * g.positions());
  std::vector<T> dcols(cols.size());
  const size_t in_stride = static_cast<size_t>(g.c) * g.h * g.w;
  const size_t out_stride = static_cast<size_t>(co) * g.positions();
  for (int b = 0; b < n; ++b) {
    const T* dyb = dy.data() + b * out_stride;
    Im2Col(g, x4.data() + b * in_stride, cols.data());
    Gemm<T>(false, true, co, g.patch(), g.positions(), dyb, cols.data(), T(1),
            weight.grad.data());
    for (int o = 0; o < co; ++o) {
      const T* row = dyb + static_cast<size_t>(o) * g.positions();
      T acc = 0;
      for (int p = 0; p < g.positions(); ++p) acc += row[p];
      bias.grad[o] += acc;
    }
    Gemm<T>(true, false, g.patch(), g.positions(), co, weight.value.data(), dyb,
            T(0), dcols.data());
    Col2Im(g, dcols.data(), dx.data() + b * in_stride);
  }
  return dx;
}

}  // namespace

template <typename T>
Conv2d<T>::Conv2d(std::string name, Conv2dOptions opt)
    : name_(std::move(name)),
      opt_(opt),
      weight_(name_ + ".weight", {opt.out_channels, opt.in_channels, opt.kernel_h, opt.kernel_w}),
      bias_(name_ + ".bias", {opt.out_channels}) {}

template <typename T>
Tensor<T> Conv2d<T>::Forward(const Tensor<T>& x, Mode) {
  if (x.ndim() != 4 || x.dim(1) != opt_.in_channels) {
    throw DimensionError(name_ + ": expected [N, " + std::to_string(opt_.in_channels) +
                         ", H, W], got " + ShapeToString(x.shape()));
  }
  input_ = x;
  return ConvForward(opt_, x, weight_, bias_);
}

template <typename T>
Tensor<T> Conv2d<T>::Backward(const Tensor<T>& dy) {
  return ConvBackward(opt_, input_, dy, weight_, bias_);
}

template <typename T>
void Conv2d<T>::CollectParams(ParamList<T>* out) {
  out->push_back(&weight_);
  out->push_back(&bias_);
}

template <typename T>
Conv1d<T>::Conv1d(std::string name, int in_channels, int out_channels, int kernel,
                  int stride, int pad)
    : name_(std::move(name)),
      opt_{in_channels, out_channels, 1, kernel, 1, stride, 0, pad},
      weight_(name_ + ".weight", {out_channels, in_channels, kernel}),
      bias_(name_ + ".bias", {out_channels}) {}

template <typename T>
Tensor<T> Conv1d<T>::Forward(const Tensor<T>& x, Mode) {
  if (x.ndim() != 3 || x.dim(1) != opt_.in_channels) {
    throw DimensionError(name_ + ": expected [N, " + std::to_string(opt_.in_channels) +
                         ", T], got " + ShapeToString(x.shape()));
  }
  input_ = x.Reshaped({x.dim(0), x.dim(1), 1, x.dim(2)});
  Tensor<T> y = ConvForward(opt_, input_, weight_, bias_);
  y.Reshape({y.dim(0), y.dim(1), y.dim(3)});
  return y;
}

template <typename T>
Tensor<T> Conv1d<T>::Backward(const Tensor<T>& dy) {
  Tensor<T> dy4 = dy.Reshaped({dy.dim(0), dy.dim(1), 1, dy.dim(2)});
  Tensor<T> dx = ConvBackward(opt_, input_, dy4, weight_, bias_);
  dx.Reshape({dx.dim(0), dx.dim(1), dx.dim(3)});
  return dx;
}

template <typename T>
void Conv1d<T>::CollectParams(ParamList<T>* out) {
  out->push_back(&weight_);
  out->push_back(&bias_);
}

template class Conv2d<float>;
template class Conv2d<double>;
template class Conv1d<float>;
template class Conv1d<double>;

}  // namespace vaed::nn
