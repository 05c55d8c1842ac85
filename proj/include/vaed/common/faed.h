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

#ifndef VAED_COMMON_FAED_H_
#define VAED_COMMON_FAED_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vaed {

// Array container used for feature caches, embeddings and normalization
// statistics:
//   "FAED" | version u32 | ndim u32 | dims u32[ndim] | dtype u8 | payload
// All integers and the f32 payload are little-endian, row-major.
inline constexpr char kFaedMagic[4] = {'F', 'A', 'E', 'D'};
inline constexpr uint32_t kFaedVersion = 1;
inline constexpr uint8_t kFaedDtypeF32 = 0;

struct FaedArray {
  std::vector<int> dims;
  std::vector<float> values;
};

std::string EncodeFaed(std::span<const int> dims, std::span<const float> values);
// `source` names the origin in error messages.
FaedArray DecodeFaed(std::string_view bytes, const std::string& source);

void WriteFaed(const std::filesystem::path& path, std::span<const int> dims,
               std::span<const float> values);
FaedArray ReadFaed(const std::filesystem::path& path);

// Whole-file helpers shared by the binary formats.
std::string ReadFileBytes(const std::filesystem::path& path);
// Writes through a temporary file and renames, so readers never observe a
// partially written file.
void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes);

}  // namespace vaed

#endif  // VAED_COMMON_FAED_H_
