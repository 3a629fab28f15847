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

// Adaptive-adversary game loop. Each turn the adversary picks the next stream
// item after seeing every previous output; the algorithm ingests it and is
// queried. A game fails on the first turn that produces an already-seen item,
// or FAIL while some item is still missing.

#ifndef MIF_HARNESS_H_
#define MIF_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mif/algorithms.h"
#include "mif/bit_cost.h"
#include "mif/random.h"
#include "mif/stream.h"

namespace mif {

struct Turn {
  ItemId adversary_item;
  QueryResult output;
};

using Transcript = std::vector<Turn>;

struct GameResult {
  std::int64_t turns_played = 0;
  // Non-FAIL outputs that had already appeared while a missing item existed.
  std::int64_t wrong_outputs = 0;
  // FAIL outputs while a missing item existed.
  std::int64_t fail_outputs = 0;
  std::optional<std::int64_t> first_failure_turn;  // 1-based
  BitCost bit_cost;
  Transcript transcript;

  bool failed() const { return first_failure_turn.has_value(); }
};

// Set of items played so far; dense bitmap or hash set depending on how many
// items the game can touch.
class SeenSet {
 public:
  SeenSet(std::int64_t n, std::int64_t expected);

  // Returns true if the item was new.
  bool Insert(ItemId item);
  bool Contains(ItemId item) const;
  std::int64_t size() const { return size_; }

 private:
  bool dense_;
  std::vector<bool> bits_;
  std::unordered_set<std::int64_t> sparse_;
  std::int64_t size_ = 0;
};

// ---------------------------------------------------------------------------
// Adversaries

class Adversary {
 public:
  virtual ~Adversary() = default;
  // Next stream item in [1, n], or nullopt when the adversary has nothing
  // left to play (replay streams only).
  virtual std::optional<ItemId> Next(const Transcript& transcript, Rng& rng) = 0;
};

// Plays a stream fixed before the game starts.
class ReplayAdversary final : public Adversary {
 public:
  explicit ReplayAdversary(std::vector<ItemId> stream) : stream_(std::move(stream)) {}
  std::optional<ItemId> Next(const Transcript& transcript, Rng& rng) override;

 private:
  std::vector<ItemId> stream_;
  std::size_t pos_ = 0;
};

// Fresh uniform item every turn.
class UniformAdversary final : public Adversary {
 public:
  explicit UniformAdversary(std::int64_t n) : n_(n) {}
  std::optional<ItemId> Next(const Transcript& transcript, Rng& rng) override;

 private:
  std::int64_t n_;
};

// Replays the algorithm's latest output; uniform when there is none or it
// was FAIL.
class EchoAdversary final : public Adversary {
 public:
  explicit EchoAdversary(std::int64_t n) : n_(n) {}
  std::optional<ItemId> Next(const Transcript& transcript, Rng& rng) override;

 private:
  std::int64_t n_;
};

// Plays without replacement. Once an output reveals a block of alpha_guess
// consecutive items it plays that block's unplayed items in order; otherwise
// it guesses uniformly among unplayed items.
class IntervalHunterAdversary final : public Adversary {
 public:
  IntervalHunterAdversary(std::int64_t n, std::int64_t alpha_guess, std::int64_t ell);
  std::optional<ItemId> Next(const Transcript& transcript, Rng& rng) override;

 private:
  ItemId UniformUnplayed(Rng& rng);

  std::int64_t n_;
  std::int64_t alpha_;
  SeenSet played_;
};

enum class AdversaryKind { kStaticRandom, kReplay, kEcho, kIntervalHunter, kUniform };

std::string_view ToString(AdversaryKind kind);
AdversaryKind ParseAdversaryKind(std::string_view name);

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::kStaticRandom;
  std::filesystem::path replay_path;              // kReplay
  std::shared_ptr<const std::vector<ItemId>> replay_stream;  // kReplay, loaded
  std::optional<std::int64_t> alpha_guess;        // kIntervalHunter
  // kStaticRandom: when set, the stream leaves exactly this many items
  // missing (requires ell >= n - missing).
  std::optional<std::int64_t> missing;

  // Canonical label used in reports, e.g. "echo" or "replay:path".
  std::string Label() const;
};

// Uniform stream of length ell over [n].
std::vector<ItemId> UniformStream(std::int64_t n, std::int64_t ell, Rng& rng);
// Length-ell stream over [n] in which exactly `missing` uniformly chosen
// items never appear and every other item appears at least once.
std::vector<ItemId> CoverageStream(std::int64_t n, std::int64_t ell, std::int64_t missing, Rng& rng);

// `defender_alpha` is the hunter's default guess.
std::unique_ptr<Adversary> MakeAdversary(const AdversarySpec& spec, std::int64_t n,
                                         std::int64_t ell, std::int64_t defender_alpha,
                                         Rng& rng);

// ---------------------------------------------------------------------------
// Games

// Plays up to `ell` turns. Throws std::logic_error if the adversary emits an
// item outside [1, n].
GameResult PlayGame(MifAlgorithm& algorithm, Adversary& adversary, std::int64_t ell,
                     Rng& algorithm_rng, Rng& adversary_rng);

struct TrialConfig {
  AlgorithmSpec algorithm;
  AdversarySpec adversary;
  std::int64_t trials = 0;
  std::uint64_t base_seed = 0;

  // Throws std::invalid_argument listing every problem.
  void Validate() const;
};

struct TrialStats {
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  std::int64_t wrong_outputs = 0;
  std::int64_t fail_outputs = 0;
  std::int64_t turns = 0;
  double mean_bits = 0.0;
  std::uint64_t max_bits = 0;
  double wall_seconds = 0.0;

  double failure_rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(trials);
  }
};

// Game t uses seed base_seed + t; algorithm and adversary draw from
// independent streams derived from it.
TrialStats RunTrials(const TrialConfig& config);

// Seeds for one game.
Rng AlgorithmRng(std::uint64_t trial_seed);
Rng AdversaryRng(std::uint64_t trial_seed);

// ---------------------------------------------------------------------------
// Card guessing

// The guesser names the MIF query output (1 on FAIL) before each card is
// revealed, then ingests the revealed card. Returns the number of correct
// guesses. Throws std::invalid_argument unless `deck` is a permutation of
// [guesser.n()].
std::int64_t CardGuessingGame(MifAlgorithm& guesser, std::span<const ItemId> deck, Rng& rng);

// H_n = sum_{t=1..n} 1/t.
double HarmonicNumber(std::int64_t n);

}  // namespace mif

#endif  // MIF_HARNESS_H_
