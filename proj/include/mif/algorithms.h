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

// Missing-item-finding (MIF) streaming algorithms. After every stream item
// from [n] the algorithm is queried and must name an item that has not
// appeared so far, or report FAIL.
//
// All algorithms implement MifAlgorithm:
//
//   StaticMif         m parallel L1 samplers over f = counts - 1; reports the
//                     first sample with a negative estimate. Also used for
//                     the long regime (stream length n + k).
//   DeterministicMif  bitmap of the first h = min(ell + 1, n) items.
//   OnTheFlyMif       fresh uniform guess every turn, nothing stored.
//   IntervalMif       random-start tracking of beta random blocks of alpha
//                     consecutive items; zero-error.

#ifndef MIF_ALGORITHMS_H_
#define MIF_ALGORITHMS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mif/bit_cost.h"
#include "mif/random.h"
#include "mif/sampler.h"
#include "mif/stream.h"

namespace mif {

class MifAlgorithm {
 public:
  virtual ~MifAlgorithm() = default;

  virtual std::int64_t n() const = 0;
  // Throws std::out_of_range for items outside [1, n].
  virtual void Update(ItemId item) = 0;
  virtual QueryResult Query(Rng& rng) = 0;
  virtual BitCost Cost() const = 0;
  // True when every non-FAIL output is guaranteed to be missing.
  virtual bool zero_error() const = 0;
};

// ---------------------------------------------------------------------------

// Copies needed so that (3/4)^m <= delta / 2.
int StaticCopies(double delta);
// Copies needed so that (1 - 1/(k + 2))^m <= delta / 2; ceil(4 k ln(2/delta)).
int LongRegimeCopies(std::int64_t k, double delta);

class StaticMif final : public MifAlgorithm {
 public:
  // Short regime (stream length < n).
  static StaticMif Build(std::int64_t n, double delta, SamplerKind kind, std::uint64_t seed);
  // Long regime (stream length n + k).
  static StaticMif BuildLongRegime(std::int64_t n, std::int64_t k, double delta,
                                   SamplerKind kind, std::uint64_t seed);
  // Explicit copy count; every copy uses v = epsilon = delta1 = 1/4 and the
  // given delta2.
  static StaticMif WithCopies(std::int64_t n, int copies, double delta2,
                              SamplerKind kind, std::uint64_t seed);

  std::int64_t n() const override { return n_; }
  void Update(ItemId item) override;
  QueryResult Query(Rng& rng) override;
  BitCost Cost() const override;
  bool zero_error() const override { return kind_ == SamplerKind::kExact; }

  int copies() const { return static_cast<int>(copies_.size()); }
  double delta2() const { return delta2_; }
  SamplerKind kind() const { return kind_; }
  const L1Sampler& copy(int i) const { return *copies_[static_cast<std::size_t>(i)]; }

 private:
  StaticMif(std::int64_t n, SamplerKind kind, double delta2) : n_(n), kind_(kind), delta2_(delta2) {}

  std::int64_t n_;
  SamplerKind kind_;
  double delta2_;
  std::vector<std::unique_ptr<L1Sampler>> copies_;
};

// ---------------------------------------------------------------------------

class DeterministicMif final : public MifAlgorithm {
 public:
  // Remembers which of the first min(ell + 1, n) items have appeared.
  DeterministicMif(std::int64_t n, std::int64_t ell);

  std::int64_t n() const override { return n_; }
  void Update(ItemId item) override;
  // Smallest unused item of [h]; FAIL once all of [h] has appeared.
  QueryResult Query(Rng& rng) override;
  QueryResult Query();
  BitCost Cost() const override { return {.random_bits = 0, .state_bits = horizon()}; }
  bool zero_error() const override { return true; }

  std::uint64_t horizon() const { return used_.size(); }

 private:
  std::int64_t n_;
  std::vector<bool> used_;
  std::size_t first_unused_ = 0;
};

// ---------------------------------------------------------------------------

// Uniform draw from [1, n].
ItemId OnTheFlyQuery(std::int64_t n, Rng& rng);
// Union bound on the probability that any of ell turns collides.
double OnTheFlyErrorBound(std::int64_t n, std::int64_t ell);

class OnTheFlyMif final : public MifAlgorithm {
 public:
  explicit OnTheFlyMif(std::int64_t n);

  std::int64_t n() const override { return n_; }
  void Update(ItemId item) override { CheckItem(item, n_); }
  // Estimate is reported as -1 (claimed missing).
  QueryResult Query(Rng& rng) override;
  // Per-query random bits; nothing is stored between turns.
  BitCost Cost() const override { return {.random_bits = CeilLog2(n_), .state_bits = 0}; }
  bool zero_error() const override { return false; }

 private:
  std::int64_t n_;
};

// ---------------------------------------------------------------------------

struct IntervalParams {
  std::int64_t alpha = 1;  // interval length
  std::int64_t beta = 1;   // tracked intervals
  friend bool operator==(const IntervalParams&, const IntervalParams&) = default;
};

// alpha = beta = ceil(sqrt(ell)) when ell <= n^(2/3); otherwise
// alpha = ceil(n / 4 ell), beta = min(ceil(16 ell^2 / n), intervals).
IntervalParams PresetParams(std::int64_t n, std::int64_t ell);

// Intervals are I_j = [(j-1) alpha + 1, j alpha] for j = 1..ceil(n / alpha).
// When alpha does not divide n the last interval is padded; padded positions
// count as unused but are never emitted.
class IntervalMif final : public MifAlgorithm {
 public:
  // Picks beta distinct intervals uniformly at random, in random order.
  IntervalMif(std::int64_t n, std::int64_t alpha, std::int64_t beta, Rng& rng);
  // Deterministic construction from an explicit tracked list (1-based ids).
  static IntervalMif FromTracked(std::int64_t n, std::int64_t alpha,
                                 std::vector<std::int64_t> tracked);

  std::int64_t n() const override { return n_; }
  void Update(ItemId item) override;
  QueryResult Query(Rng& rng) override;
  QueryResult Query();
  BitCost Cost() const override;
  bool zero_error() const override { return true; }

  std::int64_t alpha() const { return alpha_; }
  std::int64_t beta() const { return static_cast<std::int64_t>(tracked_.size()); }
  std::int64_t intervals() const { return intervals_; }
  std::int64_t curr() const { return curr_; }
  std::span<const std::int64_t> tracked() const { return tracked_; }
  const std::vector<bool>& adopted() const { return adopted_; }  // L
  const std::vector<bool>& seen() const { return seen_; }        // X
  // First and last item of interval j (the last clipped to n).
  std::pair<std::int64_t, std::int64_t> Bounds(std::int64_t interval) const;

 private:
  IntervalMif(std::int64_t n, std::int64_t alpha);
  void SetTracked(std::vector<std::int64_t> tracked);
  void Adopt(std::size_t slot);
  std::int64_t IntervalOf(ItemId item) const { return (item.value - 1) / alpha_ + 1; }

  std::int64_t n_;
  std::int64_t alpha_;
  std::int64_t intervals_;
  std::vector<std::int64_t> tracked_;
  // (interval id, slot) sorted by id, for update-time lookup.
  std::vector<std::pair<std::int64_t, std::size_t>> slot_of_;
  std::vector<bool> adopted_;
  std::vector<bool> seen_;
  std::int64_t curr_ = 0;
};

// Closed-form accounting: random = beta * ceil(log2 N), state = ceil(log2 N)
// + beta + alpha, with N = ceil(n / alpha).
BitCost IntervalBitCost(std::int64_t n, std::int64_t alpha, std::int64_t beta);

// ---------------------------------------------------------------------------

enum class Model { kDeterministic, kStatic, kLongRegime, kOnTheFly, kIntervals };

std::string_view ToString(Model model);
Model ParseModel(std::string_view name);

// Everything needed to construct a fresh algorithm instance.
struct AlgorithmSpec {
  Model model = Model::kDeterministic;
  SamplerKind sampler = SamplerKind::kExact;
  std::int64_t n = 0;
  std::int64_t ell = 0;
  std::int64_t k = 0;                  // long regime
  double delta = 0.05;                 // static / long regime
  std::optional<int> copies;           // overrides the delta-derived copy count
  std::optional<std::int64_t> alpha;   // intervals; preset when unset
  std::optional<std::int64_t> beta;

  IntervalParams interval_params() const;
  // Copy count actually used by static / long-regime models.
  int copy_count() const;
};

// Every violated constraint, one message each; empty when `spec` is valid.
std::vector<std::string> ValidateSpec(const AlgorithmSpec& spec);

// Builds a fresh instance; all construction randomness comes from `rng`.
std::unique_ptr<MifAlgorithm> MakeAlgorithm(const AlgorithmSpec& spec, Rng& rng);

}  // namespace mif

#endif  // MIF_ALGORITHMS_H_
