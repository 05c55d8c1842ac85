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

#ifndef VAED_TESTS_ORACLES_ORACLES_H_
#define VAED_TESTS_ORACLES_ORACLES_H_

// Direct reference implementations used only by tests. Each one follows the
// textbook definition with nested loops and shares no code with the library
// kernels it checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "vaed/common/tensor.h"

namespace vaed::testing {

// x: [N, C, H, W], w: [Co, C, kh, kw], b: [Co].
template <typename T>
Tensor<T> DirectConv2d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b,
                       int sh, int sw, int ph, int pw) {
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const int co = w.dim(0), kh = w.dim(2), kw = w.dim(3);
  const int oh = (h + 2 * ph - kh) / sh + 1, ow = (wd + 2 * pw - kw) / sw + 1;
  Tensor<T> y({n, co, oh, ow});
  for (int bi = 0; bi < n; ++bi)
    for (int o = 0; o < co; ++o)
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
          double acc = b.at({o});
          for (int ci = 0; ci < c; ++ci)
            for (int i = 0; i < kh; ++i)
              for (int j = 0; j < kw; ++j) {
                const int yy = oy * sh - ph + i, xx = ox * sw - pw + j;
                if (yy < 0 || yy >= h || xx < 0 || xx >= wd) continue;
                acc += static_cast<double>(x.at({bi, ci, yy, xx})) * w.at({o, ci, i, j});
              }
          y.at({bi, o, oy, ox}) = static_cast<T>(acc);
        }
  return y;
}

// x: [N, C, T], w: [Co, C, k], b: [Co].
template <typename T>
Tensor<T> DirectConv1d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b,
                       int stride, int pad) {
  const int n = x.dim(0), c = x.dim(1), t = x.dim(2);
  const int co = w.dim(0), k = w.dim(2);
  const int ot = (t + 2 * pad - k) / stride + 1;
  Tensor<T> y({n, co, ot});
  for (int bi = 0; bi < n; ++bi)
    for (int o = 0; o < co; ++o)
      for (int s = 0; s < ot; ++s) {
        double acc = b.at({o});
        for (int ci = 0; ci < c; ++ci)
          for (int j = 0; j < k; ++j) {
            const int tt = s * stride - pad + j;
            if (tt < 0 || tt >= t) continue;
            acc += static_cast<double>(x.at({bi, ci, tt})) * w.at({o, ci, j});
          }
        y.at({bi, o, s}) = static_cast<T>(acc);
      }
  return y;
}

// Exhaustive window maximum with stride == kernel, ceil or floor extent.
template <typename T>
Tensor<T> WindowMax(const Tensor<T>& x, int kh, int kw, bool ceil_mode) {
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const int oh = ceil_mode ? static_cast<int>(std::ceil(static_cast<double>(h) / kh)) : h / kh;
  const int ow = ceil_mode ? static_cast<int>(std::ceil(static_cast<double>(w) / kw)) : w / kw;
  Tensor<T> y({n, c, oh, ow});
  for (int bi = 0; bi < n; ++bi)
    for (int ci = 0; ci < c; ++ci)
      for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox) {
          std::vector<T> window;
          for (int i = oy * kh; i < std::min(h, oy * kh + kh); ++i)
            for (int j = ox * kw; j < std::min(w, ox * kw + kw); ++j) window.push_back(x.at({bi, ci, i, j}));
          y.at({bi, ci, oy, ox}) = *std::max_element(window.begin(), window.end());
        }
  return y;
}

// |DFT|^2 of a real frame, bins 0..n/2.
inline std::vector<double> DirectPowerSpectrum(const std::vector<double>& frame) {
  const size_t n = frame.size();
  std::vector<double> out(n / 2 + 1);
  for (size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc = 0;
    for (size_t t = 0; t < n; ++t) {
      acc += frame[t] * std::polar(1.0, -2.0 * M_PI * static_cast<double>(k * t) / static_cast<double>(n));
    }
    out[k] = std::norm(acc);
  }
  return out;
}

// Normalized autocorrelation pitch estimate over one analysis window: the
// first lag (from 2 samples up) whose normalized autocorrelation reaches
// `threshold` of the zero-lag energy. Returns 0 for an unvoiced window.
inline double AutocorrelationPitch(const float* x, int len, int sample_rate,
                                   double threshold = 0.75) {
  double energy = 0;
  for (int i = 0; i < len; ++i) energy += static_cast<double>(x[i]) * x[i];
  if (energy <= 1e-9) return 0.0;
  const int max_lag = len / 2;
  std::vector<double> acf(static_cast<size_t>(max_lag) + 1);
  for (int lag = 1; lag <= max_lag; ++lag) {
    double s = 0, e1 = 0, e2 = 0;
    for (int i = 0; i + lag < len; ++i) {
      s += static_cast<double>(x[i]) * x[i + lag];
      e1 += static_cast<double>(x[i]) * x[i];
      e2 += static_cast<double>(x[i + lag]) * x[i + lag];
    }
    acf[static_cast<size_t>(lag)] = s / std::sqrt(e1 * e2 + 1e-12);
  }
  // First local maximum above threshold after the ACF has dipped below it.
  int lag = 2;
  while (lag < max_lag && acf[static_cast<size_t>(lag)] > threshold) ++lag;
  for (; lag < max_lag; ++lag) {
    const double v = acf[static_cast<size_t>(lag)];
    if (v >= threshold && v >= acf[static_cast<size_t>(lag) - 1] && v >= acf[static_cast<size_t>(lag) + 1]) {
      return static_cast<double>(sample_rate) / lag;
    }
  }
  return 0.0;
}

}  // namespace vaed::testing

#endif  // VAED_TESTS_ORACLES_ORACLES_H_
