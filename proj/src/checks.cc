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

#include "mif/checks.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mif/algorithms.h"
#include "mif/random.h"
#include "mif/sampler.h"
#include "mif/stream.h"

namespace mif {

namespace {

// Calls visit(stream) for every sequence of the given length over [n].
void ForEachStream(std::int64_t n, std::int64_t length,
                   const std::function<void(const std::vector<ItemId>&)>& visit) {
  std::vector<ItemId> stream(static_cast<std::size_t>(length), ItemId(1));
  for (;;) {
    visit(stream);
    std::int64_t pos = length - 1;
    while (pos >= 0 && stream[static_cast<std::size_t>(pos)].value == n) {
      stream[static_cast<std::size_t>(pos)] = ItemId(1);
      --pos;
    }
    if (pos < 0) return;
    ++stream[static_cast<std::size_t>(pos)].value;
  }
}

double TotalVariation(const std::vector<double>& counts, double total,
                      const std::vector<double>& expected) {
  double tv = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    tv += std::abs((total > 0 ? counts[i] / total : 0.0) - expected[i]);
  }
  return tv / 2.0;
}

}  // namespace

NegativeMassReport CheckNegativeMass(std::int64_t max_n, std::int64_t max_ell,
                                     const std::vector<double>& ps) {
  NegativeMassReport report;
  for (std::int64_t n = 1; n <= max_n; ++n) {
    for (std::int64_t ell = 0; ell <= std::min(max_ell, n - 1); ++ell) {
      ForEachStream(n, ell, [&](const std::vector<ItemId>& stream) {
        ++report.streams;
        const auto fv = OffsetFrequencies(n, stream);
        for (double p : ps) {
          const auto dist = LpDistribution(fv, p);
          double unseen = 0.0, repeated = 0.0, unseen_share = 0.0;
          for (std::size_t i = 0; i < dist.size(); ++i) {
            const auto f = fv.counts()[i];
            const double w = f == 0 ? 0.0 : std::pow(static_cast<double>(std::abs(f)), p);
            if (f < 0) {
              unseen += w;
              unseen_share += dist[i];
            } else if (f > 0) {
              repeated += w;
            }
          }
          if (unseen + 1e-9 < repeated) report.mass_inequality_holds = false;
          report.min_fraction = std::min(report.min_fraction, unseen_share);
        }
      });
    }
  }
  return report;
}

LongRegimeReport CheckLongRegimeRate(std::int64_t max_n, std::int64_t max_k) {
  LongRegimeReport report;
  for (std::int64_t n = 1; n <= max_n; ++n) {
    for (std::int64_t k = 1; k <= std::min(max_k, n); ++k) {
      const std::int64_t total = n + k;
      // Enumerate compositions of `total` into n nonnegative counts.
      std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
      std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
        if (i + 1 == counts.size()) {
          counts[i] = left;
          if (std::find(counts.begin(), counts.end(), 0) == counts.end()) return;
          std::vector<std::int64_t> f(counts);
          for (auto& x : f) x -= 1;
          const FrequencyVector fv(std::move(f));
          const auto dist = LpDistribution(fv, 1.0);
          double negative = 0.0;
          for (std::size_t j = 0; j < dist.size(); ++j) {
            if (fv.counts()[j] < 0) negative += dist[j];
          }
          ++report.cases;
          report.min_margin = std::min(report.min_margin,
                                       negative - 1.0 / static_cast<double>(k + 2));
          return;
        }
        for (std::int64_t c = 0; c <= left; ++c) {
          counts[i] = c;
          rec(i + 1, left - c);
        }
      };
      rec(0, total);
    }
  }
  return report;
}

PigeonholeReport CheckPigeonhole(std::int64_t max_h) {
  PigeonholeReport report;
  for (std::int64_t h = 1; h <= max_h; ++h) {
    const std::int64_t n = h + 1;
    const std::int64_t ell = h - 1;  // horizon min(ell + 1, n) = h
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::function<void(const DeterministicMif&, std::int64_t)> rec =
        [&](const DeterministicMif& state, std::int64_t depth) {
          if (depth == ell) return;
          for (std::int64_t v = 1; v <= n; ++v) {
            DeterministicMif next = state;
            next.Update(ItemId(v));
            const bool was_seen = seen[static_cast<std::size_t>(v - 1)];
            seen[static_cast<std::size_t>(v - 1)] = true;
            const auto out = next.Query();
            ++report.queries;
            if (out.failed() || seen[out.item().index()]) ++report.violations;
            rec(next, depth + 1);
            seen[static_cast<std::size_t>(v - 1)] = was_seen;
          }
        };
    const DeterministicMif initial(n, ell);
    rec(initial, 0);
  }
  return report;
}

SamplerTvReport RunSamplerTvBattery(std::int64_t vectors, std::int64_t n,
                                    std::int64_t exact_draws, std::int64_t sketch_draws,
                                    std::uint64_t seed) {
  SamplerTvReport report;
  report.exact_draws = exact_draws;
  report.sketch_draws = sketch_draws;
  Rng rng(seed);
  std::uniform_int_distribution<std::int64_t> entry(-3, 3);
  const SamplerParams params;  // v = epsilon = delta1 = delta2 = 1/4
  for (std::int64_t v = 0; v < vectors; ++v) {
    std::vector<std::int64_t> f(static_cast<std::size_t>(n));
    do {
      for (auto& x : f) x = entry(rng);
    } while (std::all_of(f.begin(), f.end(), [](std::int64_t x) { return x == 0; }));
    const FrequencyVector fv(f);
    const auto expected = LpDistribution(fv, 1.0);
    ++report.vectors;

    const ExactL1Sampler exact(fv);
    std::vector<double> counts(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t d = 0; d < exact_draws; ++d) counts[exact.Sample(rng).item().index()] += 1;
    report.max_exact_tv = std::max(
        report.max_exact_tv, TotalVariation(counts, static_cast<double>(exact_draws), expected));

    std::fill(counts.begin(), counts.end(), 0.0);
    std::int64_t fails = 0;
    for (std::int64_t d = 0; d < sketch_draws; ++d) {
      SketchL1Sampler sketch(n, params, DeriveSeed(seed, static_cast<std::uint64_t>(v * sketch_draws + d)));
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] != 0) sketch.Ingest({ItemId::FromIndex(i), f[i]});
      }
      const auto r = sketch.Sample();
      if (r.failed()) {
        ++fails;
      } else {
        counts[r.item().index()] += 1;
      }
    }
    const auto accepted = static_cast<double>(sketch_draws - fails);
    report.max_sketch_tv = std::max(report.max_sketch_tv, TotalVariation(counts, accepted, expected));
    report.max_sketch_fail_rate =
        std::max(report.max_sketch_fail_rate,
                 static_cast<double>(fails) / static_cast<double>(std::max<std::int64_t>(sketch_draws, 1)));
  }
  return report;
}

}  // namespace mif
