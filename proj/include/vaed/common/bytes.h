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

#ifndef VAED_COMMON_BYTES_H_
#define VAED_COMMON_BYTES_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "vaed/common/error.h"

namespace vaed {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

class ByteWriter {
 public:
  void PutBytes(std::string_view b) { out_.append(b); }
  template <typename T>
  void Put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void PutFloats(const float* data, size_t n) {
    out_.append(reinterpret_cast<const char*>(data), n * sizeof(float));
  }
  std::string& str() { return out_; }

 private:
  std::string out_;
};

class ByteReader {
 public:
  ByteReader(std::string_view bytes, std::string source)
      : bytes_(bytes), source_(std::move(source)) {}

  std::string_view Take(size_t n) {
    if (n > bytes_.size() - pos_) {
      throw FormatError(source_ + ": truncated (needed " + std::to_string(n) +
                        " bytes at offset " + std::to_string(pos_) + ")");
    }
    std::string_view v = bytes_.substr(pos_, n);
    pos_ += n;
    return v;
  }
  template <typename T>
  T Get() {
    std::string_view v = Take(sizeof(T));
    T out;
    std::memcpy(&out, v.data(), sizeof(T));
    return out;
  }
  void GetFloats(float* dst, size_t n) {
    std::string_view v = Take(n * sizeof(float));
    std::memcpy(dst, v.data(), v.size());
  }
  size_t remaining() const { return bytes_.size() - pos_; }
  const std::string& source() const { return source_; }

 private:
  std::string_view bytes_;
  std::string source_;
  size_t pos_ = 0;
};

}  // namespace vaed

#endif  // VAED_COMMON_BYTES_H_
