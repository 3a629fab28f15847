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

#ifndef MIF_BIT_COST_H_
#define MIF_BIT_COST_H_

#include <cstdint>

namespace mif {

// Space accounting in bits. Random bits are the ones an algorithm has to keep
// around (random-start accounting); fresh per-turn draws are reported by the
// algorithm as its per-query random cost.
struct BitCost {
  std::uint64_t random_bits = 0;
  std::uint64_t state_bits = 0;

  std::uint64_t total_bits() const { return random_bits + state_bits; }

  BitCost& operator+=(const BitCost& o) {
    random_bits += o.random_bits;
    state_bits += o.state_bits;
    return *this;
  }
  friend bool operator==(const BitCost&, const BitCost&) = default;
};

// ceil(log2(x)) for x >= 1; 0 for x <= 1.
constexpr std::uint64_t CeilLog2(std::uint64_t x) {
  std::uint64_t bits = 0;
  while (bits < 64 && (std::uint64_t{1} << bits) < x) ++bits;
  return bits;
}

}  // namespace mif

#endif  // MIF_BIT_COST_H_
