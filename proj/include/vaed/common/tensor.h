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

#ifndef VAED_COMMON_TENSOR_H_
#define VAED_COMMON_TENSOR_H_

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vaed/common/error.h"

namespace vaed {

using Shape = std::vector<int>;

inline size_t NumElements(const Shape& shape) {
  size_t n = 1;
  for (int d : shape) n *= static_cast<size_t>(d);
  return n;
}

std::string ShapeToString(const Shape& shape);

// Dense row-major n-dimensional array. float is the working precision;
// double is used by the gradient checker.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  explicit Tensor(Shape shape, T fill = T(0))
      : shape_(std::move(shape)), data_(NumElements(shape_), fill) {
    CheckShape();
  }
  Tensor(Shape shape, std::vector<T> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    CheckShape();
    if (data_.size() != NumElements(shape_)) {
      throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                           " does not match shape " + ShapeToString(shape_));
    }
  }

  const Shape& shape() const { return shape_; }
  int ndim() const { return static_cast<int>(shape_.size()); }
  // Negative axes count from the end.
  int dim(int axis) const {
    if (axis < 0) axis += ndim();
    if (axis < 0 || axis >= ndim()) {
      throw DimensionError("axis out of range for shape " + ShapeToString(shape_));
    }
    return shape_[static_cast<size_t>(axis)];
  }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  T& operator[](size_t i) { return data_[i]; }
  const T& operator[](size_t i) const { return data_[i]; }

  T& at(std::initializer_list<int> index) { return data_[Offset(index)]; }
  const T& at(std::initializer_list<int> index) const {
    return data_[Offset(index)];
  }

  void Reshape(Shape shape) {
    if (NumElements(shape) != data_.size()) {
      throw DimensionError("cannot reshape " + ShapeToString(shape_) + " to " +
                           ShapeToString(shape));
    }
    shape_ = std::move(shape);
  }
  Tensor Reshaped(Shape shape) const {
    Tensor out = *this;
    out.Reshape(std::move(shape));
    return out;
  }

  void Fill(T v) { std::fill(data_.begin(), data_.end(), v); }
  void SetZero() { Fill(T(0)); }

  template <typename U>
  Tensor<U> Cast() const {
    std::vector<U> out(data_.begin(), data_.end());
    return Tensor<U>(shape_, std::move(out));
  }

  bool AllFinite() const {
    for (const T& v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  T Sum() const { return std::accumulate(data_.begin(), data_.end(), T(0)); }

  bool SameShape(const Tensor& other) const { return shape_ == other.shape_; }

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  void CheckShape() const {
    for (int d : shape_) {
      if (d < 0) throw DimensionError("negative dimension in " + ShapeToString(shape_));
    }
  }
  size_t Offset(std::initializer_list<int> index) const {
    if (index.size() != shape_.size()) {
      throw DimensionError("index rank mismatch for shape " + ShapeToString(shape_));
    }
    size_t off = 0;
    size_t k = 0;
    for (int i : index) {
      off = off * static_cast<size_t>(shape_[k]) + static_cast<size_t>(i);
      ++k;
    }
    return off;
  }

  Shape shape_;
  std::vector<T> data_;
};

using TensorF = Tensor<float>;
using TensorD = Tensor<double>;

// Throws DimensionError with `context` if shapes differ.
void ExpectShape(const Shape& actual, const Shape& expected, const std::string& context);

}  // namespace vaed

#endif  // VAED_COMMON_TENSOR_H_
