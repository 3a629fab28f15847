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

// L1 samplers over turnstile streams.
//
// A sampler returns item i with probability (approximately) |f_i| / ||f||_1
// together with an estimate of f_i, or FAIL. Two implementations share the
// L1Sampler interface:
//
//   ExactL1Sampler   stores f densely (Fenwick tree over |f_i|); zero
//                    distortion, exact estimates, fails only on f = 0.
//   SketchL1Sampler  precision sampling: every coordinate is scaled by the
//                    reciprocal of a hashed Exp(1) variate and the largest
//                    scaled coordinate is recovered from a count-sketch.
//                    Space is O(reps * rows * cols) words independent of n
//                    apart from the O(log n) row count.

#ifndef MIF_SAMPLER_H_
#define MIF_SAMPLER_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "mif/bit_cost.h"
#include "mif/random.h"
#include "mif/stream.h"

namespace mif {

struct SamplerParams {
  double distortion = 0.25;  // v: relative sampling distortion
  double epsilon = 0.25;     // relative estimation error
  double delta1 = 0.25;      // FAIL probability bound
  double delta2 = 0.25;      // estimation failure probability
  int c = 2;                 // additive O(n^-c) slack exponent

  // Throws std::invalid_argument if a field is outside its domain.
  void Validate() const;
};

enum class SamplerKind { kExact, kSketch };

std::string_view ToString(SamplerKind kind);
SamplerKind ParseSamplerKind(std::string_view name);

class L1Sampler {
 public:
  virtual ~L1Sampler() = default;

  virtual std::int64_t n() const = 0;
  // Throws std::out_of_range if the item is outside [1, n].
  virtual void Ingest(const Update& u) = 0;
  virtual QueryResult Sample(Rng& rng) const = 0;
  virtual BitCost Cost() const = 0;
};

class ExactL1Sampler final : public L1Sampler {
 public:
  // `initial` is added to every coordinate up front (-1 for the MIF offset).
  explicit ExactL1Sampler(std::int64_t n, std::int64_t initial = 0);
  explicit ExactL1Sampler(const FrequencyVector& fv);

  std::int64_t n() const override { return f_.n(); }
  void Ingest(const Update& u) override;
  QueryResult Sample(Rng& rng) const override;
  // Dense storage: one 64-bit word per coordinate plus the Fenwick tree.
  BitCost Cost() const override;

  const FrequencyVector& frequencies() const { return f_; }

 private:
  void AddWeight(std::size_t index, std::int64_t delta);
  std::size_t FindByPrefix(std::int64_t target) const;

  FrequencyVector f_;
  std::vector<std::int64_t> tree_;  // 1-based Fenwick tree over |f_i|
  std::int64_t total_ = 0;
};

// Exact sampling directly from a frequency vector by linear scan. Consumes
// the rng exactly like ExactL1Sampler::Sample, so both agree draw for draw.
QueryResult ExactSample(const FrequencyVector& fv, Rng& rng);

// Sampling distribution of a perfect L_p sampler: |f_i|^p / sum_j |f_j|^p
// with 0^0 = 0. All zeros when f = 0. Throws on p outside [0, 1].
std::vector<double> LpDistribution(const FrequencyVector& fv, double p);

// Perfect L_p sample, p in [0, 1]. p == 1 delegates to ExactSample.
QueryResult ExactSampleLp(const FrequencyVector& fv, double p, Rng& rng);

class SketchL1Sampler final : public L1Sampler {
 public:
  struct Shape {
    int reps = 0;   // independent precision-sampling repetitions
    int rows = 0;   // count-sketch rows (odd)
    int cols = 0;   // count-sketch buckets per row
  };

  // `initial` is an offset applied to every coordinate at construction
  // without streaming n updates; the resulting tables are bit-identical to
  // ingesting (i, initial) for all i.
  SketchL1Sampler(std::int64_t n, const SamplerParams& params, std::uint64_t seed,
                  std::int64_t initial = 0);

  static Shape ShapeFor(std::int64_t n, const SamplerParams& params);

  std::int64_t n() const override { return n_; }
  void Ingest(const Update& u) override;
  // Deterministic given the sketch; the rng argument is unused because all
  // randomness is fixed by the seed at construction.
  QueryResult Sample(Rng& rng) const override;
  QueryResult Sample() const;
  BitCost Cost() const override;

  const Shape& shape() const { return shape_; }
  std::span<const std::uint64_t> cells() const { return cells_; }
  const SamplerParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::size_t Cell(int rep, int row, std::size_t bucket) const {
    return (static_cast<std::size_t>(rep) * shape_.rows + row) * shape_.cols + bucket;
  }
  // Quantized reciprocal of the item's Exp(1) variate in repetition `rep`.
  std::uint64_t Scale(int rep, std::size_t index) const;
  std::size_t Bucket(int rep, int row, std::size_t index, bool* negative) const;
  double Estimate(int rep, std::size_t index, double* spread) const;
  QueryResult Recover(int rep) const;

  std::int64_t n_;
  SamplerParams params_;
  std::uint64_t seed_;
  Shape shape_;
  // Wrapping 64-bit arithmetic keeps the tables an exact linear function of
  // the updates regardless of order.
  std::vector<std::uint64_t> cells_;
};

std::unique_ptr<L1Sampler> MakeSampler(SamplerKind kind, std::int64_t n,
                                       const SamplerParams& params,
                                       std::uint64_t seed, std::int64_t initial = 0);

}  // namespace mif

#endif  // MIF_SAMPLER_H_
