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

#ifndef VAED_NN_GEMM_H_
#define VAED_NN_GEMM_H_

namespace vaed::nn {

// Row-major C[m,n] = beta * C + op(A) * op(B), where op(A) is [m,k] and op(B)
// is [k,n]. With trans_a the stored A is [k,m]; with trans_b the stored B is
// [n,k]. Backed by Eigen's single-threaded product kernels.
template <typename T>
void Gemm(bool trans_a, bool trans_b, int m, int n, int k, const T* a,
          const T* b, T beta, T* c);

}  // namespace vaed::nn

#endif  // VAED_NN_GEMM_H_
