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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "mif/random.h"
#include "mif/stream.h"

namespace mif {
namespace {

using ::testing::TestWithParam;

std::vector<bool> Bits(std::initializer_list<int> b) {
  std::vector<bool> out;
  for (int x : b) out.push_back(x != 0);
  return out;
}

// ---------------------------------------------------------------------------
// Copy counts.

TEST(StaticCopiesTest, DeltaFivePercent) {
  EXPECT_EQ(StaticCopies(0.05), 13);
  // Oracle: smallest m with (3/4)^m <= delta / 2.
  int m = 1;
  while (std::pow(0.75, m) > 0.025) ++m;
  EXPECT_EQ(m, 13);
}

TEST(StaticCopiesTest, DeltaNearOneKeepsFormula) {
  EXPECT_EQ(StaticCopies(0.999), 3);
  EXPECT_GE(StaticCopies(0.999999), 1);
  EXPECT_THROW(StaticCopies(0.0), std::invalid_argument);
  EXPECT_THROW(StaticCopies(1.0), std::invalid_argument);
}

TEST(StaticCopiesTest, SplitsDeltaEvenly) {
  const auto mif = StaticMif::Build(10, 0.05, SamplerKind::kExact, 1);
  EXPECT_EQ(mif.copies(), 13);
  EXPECT_DOUBLE_EQ(mif.delta2(), 0.05 / 26.0);
  EXPECT_NEAR(mif.delta2(), 1.923e-3, 1e-6);
}

TEST(LongRegimeCopiesTest, Example) {
  EXPECT_EQ(LongRegimeCopies(10, 0.1), 120);
  EXPECT_EQ(StaticMif::BuildLongRegime(100, 10, 0.1, SamplerKind::kExact, 1).copies(), 120);
  EXPECT_THROW(StaticMif::BuildLongRegime(5, 6, 0.1, SamplerKind::kExact, 1),
               std::invalid_argument);
  EXPECT_THROW(LongRegimeCopies(0, 0.1), std::invalid_argument);
}

TEST(LongRegimeCopiesTest, KOneIsALargerStaticBuild) {
  EXPECT_GT(LongRegimeCopies(1, 0.05), StaticCopies(0.05) / 2);
  // (1 - 1/(k + 2))^m <= delta / 2 at the chosen m.
  for (std::int64_t k = 1; k <= 50; ++k) {
    const int m = LongRegimeCopies(k, 0.1);
    EXPECT_LE(std::pow(1.0 - 1.0 / static_cast<double>(k + 2), m), 0.05);
  }
}

// ---------------------------------------------------------------------------
// Static algorithm.

const ExactL1Sampler& ExactCopy(const StaticMif& mif, int i) {
  return dynamic_cast<const ExactL1Sampler&>(mif.copy(i));
}

TEST(StaticMifTest, CopiesTrackTheOffsetVector) {
  auto mif = StaticMif::WithCopies(4, 3, 0.01, SamplerKind::kExact, 1);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(ExactCopy(mif, i).frequencies(), FrequencyVector({-1, -1, -1, -1}));
  }
  for (auto v : {1, 2, 2}) mif.Update(ItemId(v));
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(ExactCopy(mif, i).frequencies(), FrequencyVector({0, 1, -1, -1}));
  }
  auto dup = StaticMif::WithCopies(4, 1, 0.01, SamplerKind::kExact, 1);
  for (auto v : {3, 3, 3}) dup.Update(ItemId(v));
  EXPECT_EQ(ExactCopy(dup, 0).frequencies(), FrequencyVector({-1, -1, 2, -1}));
  EXPECT_THROW(dup.Update(ItemId(5)), std::out_of_range);
}

TEST(StaticMifTest, SingleCopyDistributionAfterOneTwoTwo) {
  auto mif = StaticMif::WithCopies(4, 1, 0.01, SamplerKind::kExact, 1);
  for (auto v : {1, 2, 2}) mif.Update(ItemId(v));
  Rng rng(2);
  std::vector<double> hits(5, 0.0);
  const int draws = 100000;
  for (int d = 0; d < draws; ++d) {
    const auto r = mif.Query(rng);
    hits[r.failed() ? 0 : static_cast<std::size_t>(r.item().value)] += 1;
  }
  EXPECT_NEAR(hits[0] / draws, 1.0 / 3.0, 0.02);  // sampled item 2
  EXPECT_EQ(hits[1], 0.0);
  EXPECT_EQ(hits[2], 0.0);
  EXPECT_NEAR(hits[3] / draws, 1.0 / 3.0, 0.02);
  EXPECT_NEAR(hits[4] / draws, 1.0 / 3.0, 0.02);
}

TEST(StaticMifTest, FullCoverageAlwaysFails) {
  auto mif = StaticMif::Build(4, 0.05, SamplerKind::kExact, 3);
  for (auto v : {1, 2, 3, 4}) mif.Update(ItemId(v));
  Rng rng(3);
  for (int d = 0; d < 100; ++d) EXPECT_TRUE(mif.Query(rng).failed());
}

TEST(StaticMifTest, EmptyStreamIsUniformNeverFail) {
  auto mif = StaticMif::WithCopies(4, 1, 0.01, SamplerKind::kExact, 4);
  Rng rng(4);
  std::vector<double> hits(4, 0.0);
  for (int d = 0; d < 40000; ++d) {
    const auto r = mif.Query(rng);
    ASSERT_FALSE(r.failed());
    hits[r.item().index()] += 1;
  }
  for (double h : hits) EXPECT_NEAR(h / 40000, 0.25, 0.02);
}

// Random streams with n <= 64 and length < n: every exact-sampler output is
// missing according to an independent std::set oracle.
TEST(StaticMifTest, ExactSamplerIsZeroError) {
  Rng gen(5);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto n = std::uniform_int_distribution<std::int64_t>(2, 64)(gen);
    const auto len = std::uniform_int_distribution<std::int64_t>(0, n - 1)(gen);
    auto mif = StaticMif::WithCopies(n, 2, 0.01, SamplerKind::kExact, gen());
    std::set<std::int64_t> seen;
    for (std::int64_t t = 0; t < len; ++t) {
      const auto item = UniformItem(n, gen);
      seen.insert(item.value);
      mif.Update(item);
    }
    const auto r = mif.Query(gen);
    if (!r.failed()) {
      ASSERT_EQ(seen.count(r.item().value), 0u) << "n=" << n << " len=" << len;
      EXPECT_EQ(r.estimate(), -1);
    }
  }
}

// One copy on a fixed short stream returns a missing item at least half the
// time (empirical threshold 0.48 over 10^4 draws).
TEST(StaticMifTest, SingleCopySuccessAtLeastHalf) {
  Rng gen(6);
  for (int stream_id = 0; stream_id < 20; ++stream_id) {
    const auto n = std::uniform_int_distribution<std::int64_t>(2, 32)(gen);
    const auto len = std::uniform_int_distribution<std::int64_t>(0, n - 1)(gen);
    auto mif = StaticMif::WithCopies(n, 1, 0.01, SamplerKind::kExact, 0);
    std::set<std::int64_t> seen;
    for (std::int64_t t = 0; t < len; ++t) {
      const auto item = UniformItem(n, gen);
      seen.insert(item.value);
      mif.Update(item);
    }
    int ok = 0;
    for (int d = 0; d < 10000; ++d) {
      const auto r = mif.Query(gen);
      if (!r.failed() && !seen.count(r.item().value)) ++ok;
    }
    EXPECT_GE(ok / 10000.0, 0.48) << "n=" << n << " len=" << len;
  }
}

// Failure probability with m exact copies on the worst short stream
// (length n - 1, one item repeated) is at most (1/2)^m and decreases in m.
TEST(StaticMifTest, AmplificationDecreasesFailure) {
  const std::int64_t n = 20;
  double previous = 1.0;
  for (int m : {1, 2, 4, 8}) {
    auto mif = StaticMif::WithCopies(n, m, 0.01, SamplerKind::kExact, 0);
    for (std::int64_t i = 1; i < n - 1; ++i) mif.Update(ItemId(i));
    mif.Update(ItemId(1));
    Rng rng(static_cast<std::uint64_t>(m));
    int fails = 0;
    const int draws = 20000;
    for (int d = 0; d < draws; ++d) fails += mif.Query(rng).failed();
    const double rate = static_cast<double>(fails) / draws;
    const double bound = std::pow(0.5, m);
    EXPECT_LE(rate, bound + 3 * std::sqrt(bound * (1 - bound) / draws)) << "m=" << m;
    EXPECT_LE(rate, previous);
    previous = rate;
  }
}

TEST(StaticMifTest, SketchCopiesReportCost) {
  auto mif = StaticMif::Build(64, 0.05, SamplerKind::kSketch, 7);
  EXPECT_FALSE(mif.zero_error());
  const auto per_copy = mif.copy(0).Cost();
  EXPECT_EQ(mif.Cost().total_bits(), 13 * per_copy.total_bits());
  EXPECT_TRUE(StaticMif::Build(64, 0.05, SamplerKind::kExact, 7).zero_error());
}

TEST(StaticMifTest, SketchCopiesFindMissingItems) {
  // Stream 1..n/2 over n = 64: half the universe missing.
  int wrong = 0, fails = 0;
  const int trials = 300;
  for (int trial = 0; trial < trials; ++trial) {
    auto mif = StaticMif::Build(64, 0.05, SamplerKind::kSketch, DeriveSeed(8, trial));
    for (std::int64_t i = 1; i <= 32; ++i) mif.Update(ItemId(i));
    Rng rng(trial);
    const auto r = mif.Query(rng);
    if (r.failed()) {
      ++fails;
    } else if (r.item().value <= 32) {
      ++wrong;
    }
  }
  EXPECT_LE(static_cast<double>(wrong + fails) / trials, 0.05 + 3 * std::sqrt(0.05 * 0.95 / trials));
}

// ---------------------------------------------------------------------------
// Deterministic algorithm.

DeterministicMif AfterStream(std::int64_t n, std::int64_t ell, std::initializer_list<int> s) {
  DeterministicMif mif(n, ell);
  for (int v : s) mif.Update(ItemId(v));
  return mif;
}

TEST(DeterministicMifTest, Examples) {
  // h = min(ell + 1, n) = 4.
  EXPECT_EQ(AfterStream(10, 3, {2, 4, 4}).Query(), QueryResult::Of(ItemId(1), -1));
  EXPECT_EQ(AfterStream(10, 3, {1, 2, 3}).Query(), QueryResult::Of(ItemId(4), -1));
  EXPECT_EQ(AfterStream(10, 3, {}).Query(), QueryResult::Of(ItemId(1), -1));
  EXPECT_TRUE(AfterStream(4, 10, {1, 2, 3, 4}).Query().failed());
}

TEST(DeterministicMifTest, BitCostIsHorizon) {
  const DeterministicMif mif(10, 3);
  EXPECT_EQ(mif.horizon(), 4u);
  EXPECT_EQ(mif.Cost().total_bits(), 4u);
  EXPECT_EQ(DeterministicMif(3, 100).horizon(), 3u);
}

TEST(DeterministicMifTest, NeverFailsBeforeHorizonOnRandomStreams) {
  Rng gen(9);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto n = std::uniform_int_distribution<std::int64_t>(1, 100)(gen);
    const auto ell = std::uniform_int_distribution<std::int64_t>(0, n - 1)(gen);
    DeterministicMif mif(n, ell);
    std::set<std::int64_t> seen;
    for (std::int64_t t = 0; t < ell; ++t) {
      const auto item = UniformItem(n, gen);
      seen.insert(item.value);
      mif.Update(item);
      const auto r = mif.Query();
      ASSERT_FALSE(r.failed());
      ASSERT_EQ(seen.count(r.item().value), 0u);
      // Smallest unused of [h].
      std::int64_t expect = 1;
      while (seen.count(expect)) ++expect;
      ASSERT_EQ(r.item().value, expect);
    }
  }
}

// Exhaustive: every stream of length <= h - 1 over [h + 1], h <= 6, queried
// after each prefix.
TEST(DeterministicMifTest, PigeonholeExhaustive) {
  for (std::int64_t h = 1; h <= 6; ++h) {
    const std::int64_t n = h + 1, len = h - 1;
    std::int64_t total = 1;
    for (std::int64_t t = 0; t < len; ++t) total *= n;
    for (std::int64_t code = 0; code < total; ++code) {
      DeterministicMif mif(n, h - 1);
      std::set<std::int64_t> seen;
      std::int64_t c = code;
      for (std::int64_t t = 0; t < len; ++t) {
        const ItemId item(c % n + 1);
        c /= n;
        seen.insert(item.value);
        mif.Update(item);
        const auto r = mif.Query();
        ASSERT_FALSE(r.failed());
        ASSERT_EQ(seen.count(r.item().value), 0u);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// On-the-fly algorithm.

TEST(OnTheFlyTest, SingletonUniverse) {
  Rng rng(10);
  for (int d = 0; d < 50; ++d) EXPECT_EQ(OnTheFlyQuery(1, rng), ItemId(1));
}

TEST(OnTheFlyTest, Bound) {
  EXPECT_DOUBLE_EQ(OnTheFlyErrorBound(10, 3), 0.6);
  EXPECT_DOUBLE_EQ(OnTheFlyErrorBound(10000, 50), 0.1275);
}

TEST(OnTheFlyTest, UniformAndStateless) {
  OnTheFlyMif mif(8);
  EXPECT_EQ(mif.Cost().state_bits, 0u);
  EXPECT_EQ(mif.Cost().random_bits, 3u);
  Rng rng(11);
  std::vector<double> hits(8, 0.0);
  for (int d = 0; d < 80000; ++d) hits[mif.Query(rng).item().index()] += 1;
  for (double h : hits) EXPECT_NEAR(h / 80000, 0.125, 0.01);
}

// n = 10, ell = 3 against a fixed stream: collision frequency within the bound.
TEST(OnTheFlyTest, GameFailureWithinBound) {
  Rng rng(12);
  int failures = 0;
  const int games = 20000;
  for (int g = 0; g < games; ++g) {
    OnTheFlyMif mif(10);
    std::set<std::int64_t> seen;
    bool failed = false;
    for (std::int64_t t = 1; t <= 3; ++t) {
      mif.Update(ItemId(t));
      seen.insert(t);
      failed |= seen.count(mif.Query(rng).item().value) > 0;
    }
    failures += failed;
  }
  EXPECT_LE(static_cast<double>(failures) / games, 0.6);
}

// ---------------------------------------------------------------------------
// Interval algorithm: hand simulations.

TEST(IntervalMifTest, InitFromTracked) {
  const auto mif = IntervalMif::FromTracked(8, 2, {1, 3});
  EXPECT_EQ(std::vector<std::int64_t>(mif.tracked().begin(), mif.tracked().end()),
            (std::vector<std::int64_t>{1, 3}));
  EXPECT_EQ(mif.curr(), 1);
  EXPECT_EQ(mif.adopted(), Bits({1, 0}));
  EXPECT_EQ(mif.seen(), Bits({0, 0}));
  EXPECT_EQ(mif.Cost(), (BitCost{.random_bits = 4, .state_bits = 6}));
  EXPECT_EQ(mif.Cost().total_bits(), 10u);
}

TEST(IntervalMifTest, UpdateAdoptsThenQueryExhausts) {
  auto mif = IntervalMif::FromTracked(8, 2, {1, 3});
  mif.Update(ItemId(5));
  EXPECT_EQ(mif.curr(), 3);
  EXPECT_EQ(mif.adopted(), Bits({1, 1}));
  EXPECT_EQ(mif.seen(), Bits({1, 0}));
  EXPECT_EQ(mif.Query(), QueryResult::Of(ItemId(6), -1));
  mif.Update(ItemId(6));
  EXPECT_EQ(mif.seen(), Bits({1, 1}));
  EXPECT_TRUE(mif.Query().failed());
}

TEST(IntervalMifTest, QueryAdoptsNextTrackedInterval) {
  auto mif = IntervalMif::FromTracked(8, 2, {1, 3});
  mif.Update(ItemId(1));
  mif.Update(ItemId(2));
  EXPECT_EQ(mif.seen(), Bits({1, 1}));
  EXPECT_EQ(mif.Query(), QueryResult::Of(ItemId(5), -1));
  EXPECT_EQ(mif.curr(), 3);
  EXPECT_EQ(mif.seen(), Bits({1, 0}));
  EXPECT_EQ(mif.adopted(), Bits({1, 1}));
}

TEST(IntervalMifTest, UntrackedItemsAreIgnored) {
  auto mif = IntervalMif::FromTracked(8, 2, {1, 3});
  mif.Update(ItemId(3));
  mif.Update(ItemId(8));
  EXPECT_EQ(mif.curr(), 1);
  EXPECT_EQ(mif.seen(), Bits({0, 0}));
  EXPECT_EQ(mif.adopted(), Bits({1, 0}));
}

TEST(IntervalMifTest, FullSelectionIsAPermutation) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const IntervalMif mif(8, 2, 4, rng);
    std::vector<std::int64_t> t(mif.tracked().begin(), mif.tracked().end());
    std::sort(t.begin(), t.end());
    EXPECT_EQ(t, (std::vector<std::int64_t>{1, 2, 3, 4}));
    EXPECT_EQ(mif.curr(), mif.tracked().front());
  }
}

TEST(IntervalMifTest, SelectionIsUniform) {
  // n = 10, alpha = 2: 5 intervals, beta = 2; each interval tracked w.p. 2/5
  // and first in order w.p. 1/5.
  std::vector<double> tracked(6, 0.0), first(6, 0.0);
  const int draws = 50000;
  for (int d = 0; d < draws; ++d) {
    Rng rng(static_cast<std::uint64_t>(d));
    const IntervalMif mif(10, 2, 2, rng);
    for (auto j : mif.tracked()) tracked[static_cast<std::size_t>(j)] += 1;
    first[static_cast<std::size_t>(mif.tracked().front())] += 1;
  }
  for (int j = 1; j <= 5; ++j) {
    EXPECT_NEAR(tracked[j] / draws, 0.4, 0.015);
    EXPECT_NEAR(first[j] / draws, 0.2, 0.015);
  }
}

TEST(IntervalMifTest, ParameterErrors) {
  Rng rng(13);
  EXPECT_THROW(IntervalMif(8, 2, 5, rng), std::invalid_argument);
  EXPECT_THROW(IntervalMif(8, 2, 0, rng), std::invalid_argument);
  EXPECT_THROW(IntervalMif(8, 0, 1, rng), std::invalid_argument);
  EXPECT_THROW(IntervalMif::FromTracked(8, 2, {1, 1}), std::invalid_argument);
  EXPECT_THROW(IntervalMif::FromTracked(8, 2, {5}), std::invalid_argument);
  auto mif = IntervalMif::FromTracked(8, 2, {1});
  EXPECT_THROW(mif.Update(ItemId(9)), std::out_of_range);
}

TEST(IntervalMifTest, PaddedItemsAreNeverEmitted) {
  // n = 7, alpha = 3: intervals {1,2,3}, {4,5,6}, {7 + two padded slots}.
  auto mif = IntervalMif::FromTracked(7, 3, {3, 1});
  EXPECT_EQ(mif.Bounds(3), (std::pair<std::int64_t, std::int64_t>{7, 7}));
  EXPECT_EQ(mif.Query(), QueryResult::Of(ItemId(7), -1));
  mif.Update(ItemId(7));
  EXPECT_EQ(mif.Query(), QueryResult::Of(ItemId(1), -1));  // adopts interval 1, pre-marks slot 0
  EXPECT_EQ(mif.Query(), QueryResult::Of(ItemId(2), -1));
}

// Reference model of the interval algorithm written against sets. Returns
// the output sequence for a stream (0 encodes FAIL).
std::vector<std::int64_t> ReferenceIntervals(std::int64_t n, std::int64_t alpha,
                                             const std::vector<std::int64_t>& tracked,
                                             const std::vector<std::int64_t>& stream) {
  std::set<std::int64_t> used_intervals{tracked[0]};
  std::int64_t curr = tracked[0];
  std::set<std::int64_t> marked;  // items of the current interval considered used
  auto block = [alpha](std::int64_t item) { return (item - 1) / alpha + 1; };
  auto adopt = [&](std::int64_t j) {
    curr = j;
    used_intervals.insert(j);
    marked.clear();
  };
  std::vector<std::int64_t> outputs;
  for (auto e : stream) {
    if (block(e) == curr) {
      marked.insert(e);
    } else if (std::find(tracked.begin(), tracked.end(), block(e)) != tracked.end() &&
               !used_intervals.count(block(e))) {
      adopt(block(e));
      marked.insert(e);
    }
    std::int64_t out = 0;
    for (std::int64_t x = (curr - 1) * alpha + 1; x <= std::min(curr * alpha, n); ++x) {
      if (!marked.count(x)) {
        out = x;
        break;
      }
    }
    if (out == 0) {
      for (auto j : tracked) {
        if (!used_intervals.count(j)) {
          adopt(j);
          out = (j - 1) * alpha + 1;
          marked.insert(out);
          break;
        }
      }
    }
    outputs.push_back(out);
  }
  return outputs;
}

TEST(IntervalMifTest, MatchesReferenceModelOnRandomStreams) {
  Rng gen(14);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto n = std::uniform_int_distribution<std::int64_t>(1, 40)(gen);
    const auto alpha = std::uniform_int_distribution<std::int64_t>(1, n)(gen);
    const std::int64_t intervals = (n + alpha - 1) / alpha;
    const auto beta = std::uniform_int_distribution<std::int64_t>(1, intervals)(gen);
    Rng init(gen());
    IntervalMif mif(n, alpha, beta, init);
    const std::vector<std::int64_t> tracked(mif.tracked().begin(), mif.tracked().end());
    // Streams biased toward tracked intervals so adoption paths get exercised.
    std::vector<std::int64_t> stream;
    for (int t = 0; t < 2 * n; ++t) {
      if (gen() % 2) {
        const auto j = tracked[gen() % tracked.size()];
        stream.push_back(std::min(n, (j - 1) * alpha + 1 + static_cast<std::int64_t>(gen() % alpha)));
      } else {
        stream.push_back(UniformItem(n, gen).value);
      }
    }
    const auto expected = ReferenceIntervals(n, alpha, tracked, stream);
    for (std::size_t t = 0; t < stream.size(); ++t) {
      mif.Update(ItemId(stream[t]));
      const auto r = mif.Query();
      ASSERT_EQ(r.failed() ? 0 : r.item().value, expected[t])
          << "trial " << trial << " turn " << t;
    }
  }
}

// Zero error and output locality over random adaptive play: each turn the
// next item is either the last output (echo), a fresh item from its block, or
// uniform.
TEST(IntervalMifTest, ZeroErrorAndLocalityUnderAdaptivePlay) {
  Rng gen(15);
  std::int64_t turns = 0;
  while (turns < 100000) {
    const auto n = std::uniform_int_distribution<std::int64_t>(2, 200)(gen);
    const auto alpha = std::uniform_int_distribution<std::int64_t>(1, 12)(gen);
    const std::int64_t intervals = (n + alpha - 1) / alpha;
    const auto beta = std::uniform_int_distribution<std::int64_t>(1, intervals)(gen);
    Rng init(gen());
    IntervalMif mif(n, alpha, beta, init);
    std::set<std::int64_t> seen;
    std::int64_t last = 0;
    for (std::int64_t t = 0; t < n; ++t, ++turns) {
      std::int64_t e;
      const auto mode = gen() % 3;
      if (mode == 0 && last != 0) {
        e = last;
      } else if (mode == 1 && last != 0) {
        e = std::min(n, (last - 1) / alpha * alpha + 1 + static_cast<std::int64_t>(gen() % alpha));
      } else {
        e = UniformItem(n, gen).value;
      }
      seen.insert(e);
      mif.Update(ItemId(e));
      const auto r = mif.Query();
      if (r.failed()) {
        last = 0;
        continue;
      }
      last = r.item().value;
      ASSERT_EQ(seen.count(last), 0u);
      const auto [lo, hi] = mif.Bounds(mif.curr());
      ASSERT_GE(last, lo);
      ASSERT_LE(last, hi);
    }
  }
}

// ---------------------------------------------------------------------------
// Presets and bit cost.

TEST(PresetParamsTest, Examples) {
  EXPECT_EQ(PresetParams(1 << 20, 256), (IntervalParams{16, 16}));
  EXPECT_EQ(PresetParams(1000000, 100000), (IntervalParams{3, 160000}));
  EXPECT_EQ(PresetParams(10, 1), (IntervalParams{1, 1}));
}

TEST(PresetParamsTest, BetaIsCappedAtIntervalCount) {
  // Dense regime with 16 ell^2 / n above n / alpha.
  const auto p = PresetParams(100, 90);
  EXPECT_EQ(p.alpha, 1);
  EXPECT_EQ(p.beta, 100);
  EXPECT_THROW(PresetParams(10, 11), std::invalid_argument);
}

TEST(PresetParamsTest, AlwaysFeasibleAndWithinBudget) {
  Rng gen(16);
  for (int trial = 0; trial < 5000; ++trial) {
    const auto n = std::uniform_int_distribution<std::int64_t>(1, 1 << 24)(gen);
    const auto ell = std::uniform_int_distribution<std::int64_t>(1, n)(gen);
    const auto p = PresetParams(n, ell);
    ASSERT_GE(p.alpha, 1);
    ASSERT_GE(p.beta, 1);
    ASSERT_LE(p.beta, (n + p.alpha - 1) / p.alpha);
  }
}

TEST(IntervalBitCostTest, ClosedForm) {
  Rng gen(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = std::uniform_int_distribution<std::int64_t>(1, 1 << 30)(gen);
    const auto alpha = std::uniform_int_distribution<std::int64_t>(1, n)(gen);
    const std::int64_t intervals = (n + alpha - 1) / alpha;
    const auto beta = std::uniform_int_distribution<std::int64_t>(1, std::min<std::int64_t>(intervals, 4096))(gen);
    // ceil(log2(intervals)) by repeated doubling.
    std::uint64_t id_bits = 0;
    while ((std::int64_t{1} << id_bits) < intervals) ++id_bits;
    const auto cost = IntervalBitCost(n, alpha, beta);
    ASSERT_EQ(cost.random_bits, static_cast<std::uint64_t>(beta) * id_bits);
    ASSERT_EQ(cost.state_bits, id_bits + static_cast<std::uint64_t>(beta + alpha));
  }
}

// ---------------------------------------------------------------------------
// Specs and the factory.

AlgorithmSpec Spec(Model model, std::int64_t n, std::int64_t ell) {
  AlgorithmSpec s;
  s.model = model;
  s.n = n;
  s.ell = ell;
  return s;
}

TEST(ModelTest, NamesRoundTrip) {
  for (auto m : {Model::kDeterministic, Model::kStatic, Model::kLongRegime, Model::kOnTheFly,
                 Model::kIntervals}) {
    EXPECT_EQ(ParseModel(ToString(m)), m);
  }
  EXPECT_THROW(ParseModel("oracle"), std::invalid_argument);
}

TEST(ValidateSpecTest, AcceptsValidSpecs) {
  EXPECT_TRUE(ValidateSpec(Spec(Model::kStatic, 1000, 999)).empty());
  EXPECT_TRUE(ValidateSpec(Spec(Model::kIntervals, 1 << 20, 256)).empty());
  auto lr = Spec(Model::kLongRegime, 100, 110);
  lr.k = 10;
  EXPECT_TRUE(ValidateSpec(lr).empty());
}

TEST(ValidateSpecTest, ReportsEveryProblem) {
  auto s = Spec(Model::kDeterministic, 10, 5);
  s.k = 2;
  s.copies = 3;
  s.alpha = 2;
  EXPECT_EQ(ValidateSpec(s).size(), 3u);
  EXPECT_FALSE(ValidateSpec(Spec(Model::kLongRegime, 100, 50)).empty());
  EXPECT_FALSE(ValidateSpec(Spec(Model::kStatic, 10, 10)).empty());
  auto big_beta = Spec(Model::kIntervals, 8, 4);
  big_beta.alpha = 2;
  big_beta.beta = 5;
  EXPECT_EQ(ValidateSpec(big_beta).size(), 1u);
}

TEST(MakeAlgorithmTest, IntervalsUsePresetWhenUnset) {
  Rng rng(18);
  const auto alg = MakeAlgorithm(Spec(Model::kIntervals, 1 << 20, 256), rng);
  const auto& mif = dynamic_cast<const IntervalMif&>(*alg);
  EXPECT_EQ(mif.alpha(), 16);
  EXPECT_EQ(mif.beta(), 16);
  EXPECT_TRUE(alg->zero_error());
}

TEST(MakeAlgorithmTest, BuildsEveryModel) {
  Rng rng(19);
  auto lr = Spec(Model::kLongRegime, 20, 22);
  lr.k = 2;
  EXPECT_EQ(dynamic_cast<const StaticMif&>(*MakeAlgorithm(lr, rng)).copies(),
            LongRegimeCopies(2, 0.05));
  auto st = Spec(Model::kStatic, 20, 10);
  st.copies = 4;
  EXPECT_EQ(dynamic_cast<const StaticMif&>(*MakeAlgorithm(st, rng)).copies(), 4);
  EXPECT_FALSE(MakeAlgorithm(Spec(Model::kOnTheFly, 20, 10), rng)->zero_error());
  EXPECT_TRUE(MakeAlgorithm(Spec(Model::kDeterministic, 20, 10), rng)->zero_error());
}

}  // namespace
}  // namespace mif
