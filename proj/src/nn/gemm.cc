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

#include "vaed/nn/gemm.h"

#include <Eigen/Core>

namespace vaed::nn {

template <typename T>
void Gemm(bool trans_a, bool trans_b, int m, int n, int k, const T* a,
          const T* b, T beta, T* c) {
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using ConstMap = Eigen::Map<const Mat>;
  Eigen::Map<Mat> cm(c, m, n);
  if (beta == T(0)) {
    cm.setZero();
  } else if (beta != T(1)) {
    cm *= beta;
  }
  if (m == 0 || n == 0 || k == 0) return;
  if (!trans_a && !trans_b) {
    cm.noalias() += ConstMap(a, m, k) * ConstMap(b, k, n);
  } else if (trans_a && !trans_b) {
    cm.noalias() += ConstMap(a, k, m).transpose() * ConstMap(b, k, n);
  } else if (!trans_a && trans_b) {
    cm.noalias() += ConstMap(a, m, k) * ConstMap(b, n, k).transpose();
  } else {
    cm.noalias() += ConstMap(a, k, m).transpose() * ConstMap(b, n, k).transpose();
  }
}

template void Gemm<float>(bool, bool, int, int, int, const float*, const float*,
                          float, float*);
template void Gemm<double>(bool, bool, int, int, int, const double*,
                           const double*, double, double*);

}  // namespace vaed::nn
