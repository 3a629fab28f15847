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

#include "mif/algorithms.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace mif {

namespace {

void CheckDelta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

void CheckUniverse(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("universe size n must be >= 1");
}

SamplerParams CopyParams(double delta2) {
  return {.distortion = 0.25, .epsilon = 0.25, .delta1 = 0.25, .delta2 = delta2, .c = 2};
}

std::int64_t CeilDiv(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

std::int64_t CeilSqrt(std::int64_t x) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
  while (r * r < x) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= x) --r;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// StaticMif

int StaticCopies(double delta) {
  CheckDelta(delta);
  const double m = std::ceil(std::log(2.0 / delta) / std::log(4.0 / 3.0));
  return std::max(1, static_cast<int>(m));
}

int LongRegimeCopies(std::int64_t k, double delta) {
  CheckDelta(delta);
  if (k < 1) throw std::invalid_argument("long regime requires k >= 1");
  const double m = std::ceil(4.0 * static_cast<double>(k) * std::log(2.0 / delta));
  return std::max(1, static_cast<int>(m));
}

StaticMif StaticMif::WithCopies(std::int64_t n, int copies, double delta2,
                                SamplerKind kind, std::uint64_t seed) {
  CheckUniverse(n);
  if (copies < 1) throw std::invalid_argument("copy count must be >= 1");
  StaticMif mif(n, kind, delta2);
  const auto params = CopyParams(delta2);
  mif.copies_.reserve(static_cast<std::size_t>(copies));
  for (int i = 0; i < copies; ++i) {
    mif.copies_.push_back(MakeSampler(kind, n, params, DeriveSeed(seed, static_cast<std::uint64_t>(i)), -1));
  }
  return mif;
}

StaticMif StaticMif::Build(std::int64_t n, double delta, SamplerKind kind, std::uint64_t seed) {
  const int m = StaticCopies(delta);
  return WithCopies(n, m, delta / (2.0 * m), kind, seed);
}

StaticMif StaticMif::BuildLongRegime(std::int64_t n, std::int64_t k, double delta,
                                     SamplerKind kind, std::uint64_t seed) {
  CheckUniverse(n);
  if (k < 1 || k > n) throw std::invalid_argument("long regime requires 1 <= k <= n");
  const int m = LongRegimeCopies(k, delta);
  return WithCopies(n, m, delta / (2.0 * m), kind, seed);
}

void StaticMif::Update(ItemId item) {
  CheckItem(item, n_);
  for (auto& copy : copies_) copy->Ingest({item, +1});
}

QueryResult StaticMif::Query(Rng& rng) {
  for (const auto& copy : copies_) {
    auto r = copy->Sample(rng);
    if (!r.failed() && r.estimate() < 0) return r;
  }
  return QueryResult::Failed();
}

BitCost StaticMif::Cost() const {
  BitCost total;
  for (const auto& copy : copies_) total += copy->Cost();
  return total;
}

// ---------------------------------------------------------------------------
// DeterministicMif

DeterministicMif::DeterministicMif(std::int64_t n, std::int64_t ell) : n_(n) {
  CheckUniverse(n);
  if (ell < 0) throw std::invalid_argument("stream length must be >= 0");
  used_.assign(static_cast<std::size_t>(std::min(ell + 1, n)), false);
}

void DeterministicMif::Update(ItemId item) {
  CheckItem(item, n_);
  if (item.index() < used_.size()) used_[item.index()] = true;
}

QueryResult DeterministicMif::Query() {
  while (first_unused_ < used_.size() && used_[first_unused_]) ++first_unused_;
  if (first_unused_ == used_.size()) return QueryResult::Failed();
  return QueryResult::Of(ItemId::FromIndex(first_unused_), -1);
}

QueryResult DeterministicMif::Query(Rng& /*rng*/) { return Query(); }

// ---------------------------------------------------------------------------
// OnTheFlyMif

ItemId OnTheFlyQuery(std::int64_t n, Rng& rng) {
  CheckUniverse(n);
  return UniformItem(n, rng);
}

double OnTheFlyErrorBound(std::int64_t n, std::int64_t ell) {
  const auto l = static_cast<double>(ell);
  return (l * l + l) / (2.0 * static_cast<double>(n));
}

OnTheFlyMif::OnTheFlyMif(std::int64_t n) : n_(n) { CheckUniverse(n); }

QueryResult OnTheFlyMif::Query(Rng& rng) { return QueryResult::Of(OnTheFlyQuery(n_, rng), -1); }

// ---------------------------------------------------------------------------
// IntervalMif

IntervalParams PresetParams(std::int64_t n, std::int64_t ell) {
  if (ell < 1 || ell > n) throw std::invalid_argument("preset requires 1 <= ell <= n");
  IntervalParams p;
  const auto l = static_cast<unsigned __int128>(ell);
  const auto nn = static_cast<unsigned __int128>(n);
  if (l * l * l <= nn * nn) {  // ell <= n^(2/3)
    p.alpha = p.beta = CeilSqrt(ell);
  } else {
    p.alpha = std::max<std::int64_t>(1, CeilDiv(n, 4 * ell));
    const auto dense = static_cast<std::int64_t>((16 * l * l + nn - 1) / nn);
    p.beta = dense;
  }
  p.beta = std::clamp<std::int64_t>(p.beta, 1, CeilDiv(n, p.alpha));
  return p;
}

BitCost IntervalBitCost(std::int64_t n, std::int64_t alpha, std::int64_t beta) {
  const std::uint64_t id_bits = CeilLog2(static_cast<std::uint64_t>(CeilDiv(n, alpha)));
  const auto b = static_cast<std::uint64_t>(beta);
  return {.random_bits = b * id_bits,
          .state_bits = id_bits + b + static_cast<std::uint64_t>(alpha)};
}

IntervalMif::IntervalMif(std::int64_t n, std::int64_t alpha) : n_(n), alpha_(alpha) {
  CheckUniverse(n);
  if (alpha < 1) throw std::invalid_argument("alpha must be >= 1");
  intervals_ = CeilDiv(n, alpha);
  seen_.assign(static_cast<std::size_t>(alpha), false);
}

IntervalMif::IntervalMif(std::int64_t n, std::int64_t alpha, std::int64_t beta, Rng& rng)
    : IntervalMif(n, alpha) {
  if (beta < 1 || beta > intervals_) {
    throw std::invalid_argument("beta must lie in [1, ceil(n / alpha)] = [1, " +
                                std::to_string(intervals_) + "]");
  }
  // Floyd's subset sampling, then a shuffle for a uniformly random order.
  std::unordered_set<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(beta) * 2);
  for (std::int64_t j = intervals_ - beta + 1; j <= intervals_; ++j) {
    const auto t = std::uniform_int_distribution<std::int64_t>(1, j)(rng);
    chosen.insert(chosen.contains(t) ? j : t);
  }
  std::vector<std::int64_t> tracked(chosen.begin(), chosen.end());
  std::sort(tracked.begin(), tracked.end());
  std::shuffle(tracked.begin(), tracked.end(), rng);
  SetTracked(std::move(tracked));
}

IntervalMif IntervalMif::FromTracked(std::int64_t n, std::int64_t alpha,
                                     std::vector<std::int64_t> tracked) {
  IntervalMif mif(n, alpha);
  if (tracked.empty() || static_cast<std::int64_t>(tracked.size()) > mif.intervals_) {
    throw std::invalid_argument("tracked list must hold 1..ceil(n / alpha) intervals");
  }
  auto sorted = tracked;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() ||
      sorted.front() < 1 || sorted.back() > mif.intervals_) {
    throw std::invalid_argument("tracked intervals must be distinct ids in range");
  }
  mif.SetTracked(std::move(tracked));
  return mif;
}

void IntervalMif::SetTracked(std::vector<std::int64_t> tracked) {
  tracked_ = std::move(tracked);
  slot_of_.clear();
  for (std::size_t s = 0; s < tracked_.size(); ++s) slot_of_.emplace_back(tracked_[s], s);
  std::sort(slot_of_.begin(), slot_of_.end());
  adopted_.assign(tracked_.size(), false);
  curr_ = tracked_.front();
  adopted_[0] = true;
}

std::pair<std::int64_t, std::int64_t> IntervalMif::Bounds(std::int64_t interval) const {
  const std::int64_t first = (interval - 1) * alpha_ + 1;
  return {first, std::min(first + alpha_ - 1, n_)};
}

void IntervalMif::Adopt(std::size_t slot) {
  curr_ = tracked_[slot];
  adopted_[slot] = true;
  std::fill(seen_.begin(), seen_.end(), false);
}

void IntervalMif::Update(ItemId item) {
  CheckItem(item, n_);
  const std::int64_t interval = IntervalOf(item);
  const auto offset = static_cast<std::size_t>((item.value - 1) % alpha_);
  if (interval == curr_) {
    seen_[offset] = true;
    return;
  }
  auto it = std::lower_bound(slot_of_.begin(), slot_of_.end(),
                             std::pair<std::int64_t, std::size_t>{interval, 0});
  if (it != slot_of_.end() && it->first == interval && !adopted_[it->second]) {
    Adopt(it->second);
    seen_[offset] = true;
  }
}

QueryResult IntervalMif::Query() {
  const auto [first, last] = Bounds(curr_);
  for (std::int64_t item = first; item <= last; ++item) {
    if (!seen_[static_cast<std::size_t>(item - first)]) return QueryResult::Of(ItemId(item), -1);
  }
  for (std::size_t slot = 0; slot < adopted_.size(); ++slot) {
    if (!adopted_[slot]) {
      Adopt(slot);
      seen_[0] = true;
      return QueryResult::Of(ItemId(Bounds(curr_).first), -1);
    }
  }
  return QueryResult::Failed();
}

QueryResult IntervalMif::Query(Rng& /*rng*/) { return Query(); }

BitCost IntervalMif::Cost() const { return IntervalBitCost(n_, alpha_, beta()); }

// ---------------------------------------------------------------------------
// Factory

std::string_view ToString(Model model) {
  switch (model) {
    case Model::kDeterministic: return "deterministic";
    case Model::kStatic: return "static";
    case Model::kLongRegime: return "long_regime";
    case Model::kOnTheFly: return "on_the_fly";
    case Model::kIntervals: return "intervals";
  }
  return "?";
}

Model ParseModel(std::string_view name) {
  for (auto m : {Model::kDeterministic, Model::kStatic, Model::kLongRegime,
                 Model::kOnTheFly, Model::kIntervals}) {
    if (ToString(m) == name) return m;
  }
  throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

IntervalParams AlgorithmSpec::interval_params() const {
  IntervalParams p;
  if (!alpha || !beta) p = PresetParams(n, std::clamp<std::int64_t>(ell, 1, n));
  if (alpha) p.alpha = *alpha;
  if (beta) p.beta = *beta;
  return p;
}

int AlgorithmSpec::copy_count() const {
  if (copies) return *copies;
  return model == Model::kLongRegime ? LongRegimeCopies(k, delta) : StaticCopies(delta);
}

std::vector<std::string> ValidateSpec(const AlgorithmSpec& spec) {
  std::vector<std::string> problems;
  const bool sampled = spec.model == Model::kStatic || spec.model == Model::kLongRegime;
  const std::string model(ToString(spec.model));
  if (spec.n < 1) problems.push_back("n must be >= 1");
  if (spec.ell < 0) problems.push_back("ell must be >= 0");
  if (spec.model == Model::kStatic && spec.n >= 1 && spec.ell >= spec.n) {
    problems.push_back("static model requires ell < n (use long_regime for ell >= n)");
  }
  if (spec.model == Model::kLongRegime) {
    if (spec.ell < spec.n) problems.push_back("long regime requires ell >= n");
    if (spec.k < 1 || spec.k > spec.n) problems.push_back("long regime requires 1 <= k <= n");
    if (spec.ell >= spec.n && spec.k >= 1 && spec.ell != spec.n + spec.k) {
      problems.push_back("long regime requires ell = n + k");
    }
  } else if (spec.k != 0) {
    problems.push_back("k is only valid with model=long_regime");
  }
  if (sampled && !(spec.delta > 0.0 && spec.delta < 1.0)) {
    problems.push_back("delta must lie in (0, 1)");
  }
  if (spec.copies && !sampled) problems.push_back("copies is only valid with static or long_regime");
  if (spec.copies && *spec.copies < 1) problems.push_back("copies must be >= 1");
  if (spec.model == Model::kIntervals) {
    if (spec.alpha && *spec.alpha < 1) problems.push_back("alpha must be >= 1");
    if ((!spec.alpha || !spec.beta) && spec.n >= 1 && (spec.ell < 1 || spec.ell > spec.n)) {
      problems.push_back("interval presets require 1 <= ell <= n; pass alpha and beta explicitly");
    }
    if (spec.n >= 1 && (!spec.alpha || *spec.alpha >= 1) &&
        (spec.alpha || (spec.ell >= 1 && spec.ell <= spec.n))) {
      const auto p = spec.interval_params();
      const std::int64_t intervals = CeilDiv(spec.n, p.alpha);
      if (p.beta < 1 || p.beta > intervals) {
        problems.push_back("beta must lie in [1, ceil(n / alpha)] = [1, " +
                           std::to_string(intervals) + "]");
      }
    }
  } else if (spec.alpha || spec.beta) {
    problems.push_back("alpha/beta are only valid with model=intervals");
  }
  return problems;
}

std::unique_ptr<MifAlgorithm> MakeAlgorithm(const AlgorithmSpec& spec, Rng& rng) {
  switch (spec.model) {
    case Model::kDeterministic:
      return std::make_unique<DeterministicMif>(spec.n, spec.ell);
    case Model::kOnTheFly:
      return std::make_unique<OnTheFlyMif>(spec.n);
    case Model::kIntervals: {
      const auto p = spec.interval_params();
      return std::make_unique<IntervalMif>(spec.n, p.alpha, p.beta, rng);
    }
    case Model::kStatic:
    case Model::kLongRegime: {
      const int m = spec.copy_count();
      const std::uint64_t seed = rng();
      return std::make_unique<StaticMif>(
          StaticMif::WithCopies(spec.n, m, spec.delta / (2.0 * m), spec.sampler, seed));
    }
  }
  throw std::invalid_argument("unknown model");
}

}  // namespace mif
