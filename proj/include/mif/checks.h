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

// Exhaustive small-universe checks and the sampler fidelity battery.

#ifndef MIF_CHECKS_H_
#define MIF_CHECKS_H_

#include <cstdint>
#include <vector>

namespace mif {

// Every stream over [n] of length ell < n, n <= max_n, ell <= max_ell:
// the L_p mass on unseen items is at least the mass on repeated items, so a
// perfect L_p sampler lands on a missing item with probability >= 1/2.
struct NegativeMassReport {
  std::int64_t streams = 0;
  double min_fraction = 1.0;        // smallest unseen-item share over all (stream, p)
  bool mass_inequality_holds = true;
  bool passed() const { return mass_inequality_holds && min_fraction >= 0.5; }
};
NegativeMassReport CheckNegativeMass(std::int64_t max_n, std::int64_t max_ell,
                                     const std::vector<double>& ps);

// Every count vector over [n] summing to n + k with at least one zero count:
// the exact L1 sampler returns a negative coordinate w.p. >= 1/(k + 2).
struct LongRegimeReport {
  std::int64_t cases = 0;
  double min_margin = 1.0;  // min over cases of rate - 1/(k + 2)
  bool passed() const { return cases > 0 && min_margin >= -1e-12; }
};
LongRegimeReport CheckLongRegimeRate(std::int64_t max_n, std::int64_t max_k);

// Deterministic algorithm with horizon h <= max_h against every stream of
// length <= h - 1 over [h + 1]: never FAIL, never a seen item.
struct PigeonholeReport {
  std::int64_t queries = 0;
  std::int64_t violations = 0;
  bool passed() const { return queries > 0 && violations == 0; }
};
PigeonholeReport CheckPigeonhole(std::int64_t max_h);

// Random vectors over [n] with entries in [-3, 3]; empirical distributions
// of both samplers compared with |f_i| / ||f||_1 in total variation.
struct SamplerTvReport {
  std::int64_t vectors = 0;
  double max_exact_tv = 0.0;
  double max_sketch_tv = 0.0;       // conditional on non-FAIL
  double max_sketch_fail_rate = 0.0;
  std::int64_t exact_draws = 0;
  std::int64_t sketch_draws = 0;
};
SamplerTvReport RunSamplerTvBattery(std::int64_t vectors, std::int64_t n,
                                    std::int64_t exact_draws, std::int64_t sketch_draws,
                                    std::uint64_t seed);

}  // namespace mif

#endif  // MIF_CHECKS_H_
