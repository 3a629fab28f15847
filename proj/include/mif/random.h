// Copyright 2026 The mifstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MIF_RANDOM_H_
#define MIF_RANDOM_H_

#include <cstdint>
#include <random>

#include "mif/stream.h"

namespace mif {

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used both for seed derivation and as the keyed hash
// behind sketch tables.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent child seed for a named sub-stream of `seed`.
constexpr std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t tag) {
  return Mix64(Mix64(seed) ^ Mix64(tag * 0xd6e8feb86659fd93ULL + 1));
}

inline ItemId UniformItem(std::int64_t n, Rng& rng) {
  return ItemId(std::uniform_int_distribution<std::int64_t>(1, n)(rng));
}

}  // namespace mif

#endif  // MIF_RANDOM_H_
