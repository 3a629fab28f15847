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

#include "mif/sampler.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace mif {

void SamplerParams::Validate() const {
  auto open_unit = [](double x) { return x > 0.0 && x < 1.0; };
  if (!(distortion >= 0.0 && distortion < 1.0)) {
    throw std::invalid_argument("sampler distortion must lie in [0, 1)");
  }
  if (!open_unit(epsilon)) throw std::invalid_argument("sampler epsilon must lie in (0, 1)");
  if (!open_unit(delta1)) throw std::invalid_argument("sampler delta1 must lie in (0, 1)");
  if (!open_unit(delta2)) throw std::invalid_argument("sampler delta2 must lie in (0, 1)");
  if (c < 1) throw std::invalid_argument("sampler c must be >= 1");
}

std::string_view ToString(SamplerKind kind) {
  return kind == SamplerKind::kExact ? "exact" : "sketch";
}

SamplerKind ParseSamplerKind(std::string_view name) {
  if (name == "exact") return SamplerKind::kExact;
  if (name == "sketch") return SamplerKind::kSketch;
  throw std::invalid_argument("unknown sampler '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// ExactL1Sampler

ExactL1Sampler::ExactL1Sampler(std::int64_t n, std::int64_t initial)
    : ExactL1Sampler(FrequencyVector(n, initial)) {}

ExactL1Sampler::ExactL1Sampler(const FrequencyVector& fv)
    : f_(fv), tree_(static_cast<std::size_t>(fv.n()) + 1, 0) {
  // Linear-time Fenwick build.
  for (std::size_t i = 1; i < tree_.size(); ++i) {
    tree_[i] += std::abs(f_.counts()[i - 1]);
    const std::size_t parent = i + (i & (~i + 1));
    if (parent < tree_.size()) tree_[parent] += tree_[i];
  }
  total_ = f_.L1Norm();
}

void ExactL1Sampler::AddWeight(std::size_t index, std::int64_t delta) {
  for (std::size_t i = index + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  total_ += delta;
}

// Smallest 0-based index whose inclusive prefix weight exceeds `target`.
std::size_t ExactL1Sampler::FindByPrefix(std::int64_t target) const {
  std::size_t pos = 0;
  std::size_t step = 1;
  while (step * 2 < tree_.size()) step *= 2;
  for (; step > 0; step /= 2) {
    const std::size_t next = pos + step;
    if (next < tree_.size() && tree_[next] <= target) {
      pos = next;
      target -= tree_[next];
    }
  }
  return pos;
}

void ExactL1Sampler::Ingest(const Update& u) {
  CheckItem(u.item, n());
  const std::int64_t before = std::abs(f_[u.item]);
  f_.Apply(u);
  const std::int64_t after = std::abs(f_[u.item]);
  if (after != before) AddWeight(u.item.index(), after - before);
}

QueryResult ExactL1Sampler::Sample(Rng& rng) const {
  if (total_ == 0) return QueryResult::Failed();
  const auto target = std::uniform_int_distribution<std::int64_t>(0, total_ - 1)(rng);
  const auto item = ItemId::FromIndex(FindByPrefix(target));
  return QueryResult::Of(item, f_[item]);
}

BitCost ExactL1Sampler::Cost() const {
  return {.random_bits = 0, .state_bits = 64 * 2 * static_cast<std::uint64_t>(n())};
}

QueryResult ExactSample(const FrequencyVector& fv, Rng& rng) {
  const std::int64_t total = fv.L1Norm();
  if (total == 0) return QueryResult::Failed();
  auto target = std::uniform_int_distribution<std::int64_t>(0, total - 1)(rng);
  const auto counts = fv.counts();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::int64_t w = std::abs(counts[i]);
    if (target < w) return QueryResult::Of(ItemId::FromIndex(i), counts[i]);
    target -= w;
  }
  return QueryResult::Failed();  // unreachable
}

std::vector<double> LpDistribution(const FrequencyVector& fv, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  std::vector<double> weights;
  weights.reserve(fv.counts().size());
  double total = 0.0;
  for (auto x : fv.counts()) {
    const double w = x == 0 ? 0.0 : std::pow(static_cast<double>(std::abs(x)), p);
    weights.push_back(w);
    total += w;
  }
  if (total > 0.0) {
    for (auto& w : weights) w /= total;
  }
  return weights;
}

QueryResult ExactSampleLp(const FrequencyVector& fv, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (p == 1.0) return ExactSample(fv, rng);
  const auto dist = LpDistribution(fv, p);
  if (std::all_of(dist.begin(), dist.end(), [](double w) { return w == 0.0; })) {
    return QueryResult::Failed();
  }
  std::discrete_distribution<std::size_t> pick(dist.begin(), dist.end());
  const std::size_t i = pick(rng);
  return QueryResult::Of(ItemId::FromIndex(i), fv.counts()[i]);
}

// ---------------------------------------------------------------------------
// SketchL1Sampler

namespace {

constexpr int kMaxRows = 63;
constexpr double kScaleUnit = 1048576.0;         // 2^20
constexpr std::uint64_t kMaxScale = 1ULL << 40;  // caps 1/t for tiny t

std::uint64_t Hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return Mix64(seed ^ Mix64(a ^ Mix64(b ^ Mix64(c))));
}

int OddAtLeast(int x) { return x % 2 == 0 ? x + 1 : x; }

}  // namespace

SketchL1Sampler::Shape SketchL1Sampler::ShapeFor(std::int64_t n, const SamplerParams& params) {
  params.Validate();
  Shape s;
  s.reps = std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / params.delta1))));
  const int log_n = static_cast<int>(CeilLog2(static_cast<std::uint64_t>(std::max<std::int64_t>(n, 2))));
  const int log_d2 = static_cast<int>(std::ceil(std::log2(1.0 / params.delta2)));
  s.rows = std::min(kMaxRows, OddAtLeast(std::max(5, log_n + log_d2)));
  const double precision = std::min(params.epsilon, std::max(params.distortion, 0.05));
  s.cols = static_cast<int>(std::ceil(2.0 / (precision * precision)));
  return s;
}

SketchL1Sampler::SketchL1Sampler(std::int64_t n, const SamplerParams& params,
                                 std::uint64_t seed, std::int64_t initial)
    : n_(n), params_(params), seed_(seed), shape_(ShapeFor(n, params)) {
  if (n < 1) throw std::invalid_argument("sketch universe must be >= 1");
  cells_.assign(static_cast<std::size_t>(shape_.reps) * shape_.rows * shape_.cols, 0);
  if (initial == 0) return;
  // Fold the constant offset straight into the tables.
  for (int rep = 0; rep < shape_.reps; ++rep) {
    for (std::size_t i = 0; i < static_cast<std::size_t>(n_); ++i) {
      const std::uint64_t w = Scale(rep, i) * static_cast<std::uint64_t>(initial);
      for (int row = 0; row < shape_.rows; ++row) {
        bool negative = false;
        const auto b = Bucket(rep, row, i, &negative);
        auto& cell = cells_[Cell(rep, row, b)];
        cell = negative ? cell - w : cell + w;
      }
    }
  }
}

std::uint64_t SketchL1Sampler::Scale(int rep, std::size_t index) const {
  const std::uint64_t h = Hash(seed_, 0x5ca1e, static_cast<std::uint64_t>(rep), index);
  const double u = (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
  const double t = -std::log(u);
  const double w = std::floor(kScaleUnit / t);
  if (w >= static_cast<double>(kMaxScale)) return kMaxScale;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(w));
}

std::size_t SketchL1Sampler::Bucket(int rep, int row, std::size_t index, bool* negative) const {
  const std::uint64_t h = Hash(seed_, static_cast<std::uint64_t>(rep) + 1,
                               static_cast<std::uint64_t>(row), index);
  *negative = (h >> 63) != 0;
  return static_cast<std::size_t>((h & 0xffffffffULL) % static_cast<std::uint64_t>(shape_.cols));
}

void SketchL1Sampler::Ingest(const Update& u) {
  CheckItem(u.item, n_);
  const std::size_t i = u.item.index();
  for (int rep = 0; rep < shape_.reps; ++rep) {
    const std::uint64_t w = Scale(rep, i) * static_cast<std::uint64_t>(u.delta);
    for (int row = 0; row < shape_.rows; ++row) {
      bool negative = false;
      const auto b = Bucket(rep, row, i, &negative);
      auto& cell = cells_[Cell(rep, row, b)];
      cell = negative ? cell - w : cell + w;
    }
  }
}

// Median over rows of the signed bucket values for one item. `spread`
// receives the median absolute deviation of the row values from it.
double SketchL1Sampler::Estimate(int rep, std::size_t index, double* spread) const {
  std::array<double, kMaxRows> vals{};
  for (int row = 0; row < shape_.rows; ++row) {
    bool negative = false;
    const auto b = Bucket(rep, row, index, &negative);
    const auto v = static_cast<double>(static_cast<std::int64_t>(cells_[Cell(rep, row, b)]));
    vals[row] = negative ? -v : v;
  }
  const int mid = shape_.rows / 2;
  std::nth_element(vals.begin(), vals.begin() + mid, vals.begin() + shape_.rows);
  const double median = vals[mid];
  if (spread != nullptr) {
    for (int row = 0; row < shape_.rows; ++row) vals[row] = std::abs(vals[row] - median);
    std::nth_element(vals.begin(), vals.begin() + mid, vals.begin() + shape_.rows);
    *spread = vals[mid];
  }
  return median;
}

QueryResult SketchL1Sampler::Recover(int rep) const {
  double best = 0.0;
  double runner_up = 0.0;
  double best_value = 0.0;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(n_); ++i) {
    const double z = Estimate(rep, i, nullptr);
    const double mag = std::abs(z);
    if (mag > best) {  // strict: smallest id wins ties
      runner_up = best;
      best = mag;
      best_value = z;
      best_index = i;
    } else if (mag > runner_up) {
      runner_up = mag;
    }
  }
  if (best == 0.0) return QueryResult::Failed();

  double spread = 0.0;
  Estimate(rep, best_index, &spread);
  // Reject when the winner is not separated from the runner-up by more than
  // the disagreement among its own rows.
  if (best - runner_up <= 2.0 * spread) return QueryResult::Failed();

  const double f = best_value / static_cast<double>(Scale(rep, best_index));
  const auto magnitude = std::max<std::int64_t>(1, std::llround(std::abs(f)));
  return QueryResult::Of(ItemId::FromIndex(best_index), f < 0 ? -magnitude : magnitude);
}

QueryResult SketchL1Sampler::Sample() const {
  for (int rep = 0; rep < shape_.reps; ++rep) {
    auto r = Recover(rep);
    if (!r.failed()) return r;
  }
  return QueryResult::Failed();
}

QueryResult SketchL1Sampler::Sample(Rng& /*rng*/) const { return Sample(); }

BitCost SketchL1Sampler::Cost() const {
  return {.random_bits = 64, .state_bits = 64 * static_cast<std::uint64_t>(cells_.size())};
}

std::unique_ptr<L1Sampler> MakeSampler(SamplerKind kind, std::int64_t n,
                                       const SamplerParams& params,
                                       std::uint64_t seed, std::int64_t initial) {
  if (kind == SamplerKind::kExact) return std::make_unique<ExactL1Sampler>(n, initial);
  return std::make_unique<SketchL1Sampler>(n, params, seed, initial);
}

}  // namespace mif
