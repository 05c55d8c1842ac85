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

#ifndef VAED_COMMON_RANDOM_H_
#define VAED_COMMON_RANDOM_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace vaed {

using Rng = std::mt19937_64;

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view bytes, uint64_t seed = 0xcbf29ce484222325ULL);

uint64_t SplitMix64(uint64_t x);

// Independent stream for one record, derived from the run seed and a stable
// record key (clip id, parameter name, ...).
uint64_t DeriveSeed(uint64_t seed, std::string_view key);

inline Rng MakeRng(uint64_t seed, std::string_view key) {
  return Rng(DeriveSeed(seed, key));
}

std::string SerializeRng(const Rng& rng);
Rng DeserializeRng(const std::string& state);

// Uniform double in [lo, hi). Implemented on raw engine output so streams are
// identical across standard library implementations.
double UniformReal(Rng& rng, double lo, double hi);
// Uniform integer in [lo, hi].
int64_t UniformInt(Rng& rng, int64_t lo, int64_t hi);
double StandardNormal(Rng& rng);
// Marsaglia-Tsang gamma sampler, shape > 0, unit scale.
double Gamma(Rng& rng, double shape);
double Beta(Rng& rng, double a, double b);

}  // namespace vaed

#endif  // VAED_COMMON_RANDOM_H_
