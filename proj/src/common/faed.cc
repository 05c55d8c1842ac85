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

#include "vaed/common/faed.h"

#include <fstream>
#include <sstream>

#include "vaed/common/bytes.h"
#include "vaed/common/error.h"

namespace vaed {

namespace {
constexpr uint32_t kMaxDims = 8;
}

std::string EncodeFaed(std::span<const int> dims, std::span<const float> values) {
  size_t count = 1;
  for (int d : dims) {
    if (d < 0) throw DimensionError("negative dimension in FAED array");
    count *= static_cast<size_t>(d);
  }
  if (count != values.size()) {
    throw DimensionError("FAED payload size does not match its dims");
  }
  ByteWriter w;
  w.PutBytes(std::string_view(kFaedMagic, 4));
  w.Put<uint32_t>(kFaedVersion);
  w.Put<uint32_t>(static_cast<uint32_t>(dims.size()));
  for (int d : dims) w.Put<uint32_t>(static_cast<uint32_t>(d));
  w.Put<uint8_t>(kFaedDtypeF32);
  w.PutFloats(values.data(), values.size());
  return std::move(w.str());
}

FaedArray DecodeFaed(std::string_view bytes, const std::string& source) {
  ByteReader r(bytes, source);
  if (bytes.size() < 4 || r.Take(4) != std::string_view(kFaedMagic, 4)) {
    throw FormatError(source + ": bad magic, not a FAED file");
  }
  uint32_t version = r.Get<uint32_t>();
  if (version != kFaedVersion) {
    throw FormatError(source + ": unsupported FAED version " +
                      std::to_string(version));
  }
  uint32_t ndim = r.Get<uint32_t>();
  if (ndim > kMaxDims) {
    throw FormatError(source + ": implausible ndim " + std::to_string(ndim));
  }
  FaedArray out;
  size_t count = 1;
  for (uint32_t i = 0; i < ndim; ++i) {
    uint32_t d = r.Get<uint32_t>();
    out.dims.push_back(static_cast<int>(d));
    count *= d;
  }
  uint8_t dtype = r.Get<uint8_t>();
  if (dtype != kFaedDtypeF32) {
    throw FormatError(source + ": unsupported dtype code " +
                      std::to_string(dtype));
  }
  if (r.remaining() != count * sizeof(float)) {
    throw FormatError(source + ": payload is " + std::to_string(r.remaining()) +
                      " bytes, header declares " +
                      std::to_string(count * sizeof(float)));
  }
  out.values.resize(count);
  r.GetFloats(out.values.data(), count);
  return out;
}

void WriteFaed(const std::filesystem::path& path, std::span<const int> dims,
               std::span<const float> values) {
  WriteFileBytes(path, EncodeFaed(dims, values));
}

FaedArray ReadFaed(const std::filesystem::path& path) {
  return DecodeFaed(ReadFileBytes(path), path.string());
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace vaed
