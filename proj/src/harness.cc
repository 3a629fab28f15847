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

#include "mif/harness.h"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace mif {

SeenSet::SeenSet(std::int64_t n, std::int64_t expected)
    : dense_(expected * 32 >= n) {
  if (dense_) {
    bits_.assign(static_cast<std::size_t>(n), false);
  } else {
    sparse_.reserve(static_cast<std::size_t>(expected) * 2);
  }
}

bool SeenSet::Insert(ItemId item) {
  bool fresh;
  if (dense_) {
    fresh = !bits_[item.index()];
    bits_[item.index()] = true;
  } else {
    fresh = sparse_.insert(item.value).second;
  }
  if (fresh) ++size_;
  return fresh;
}

bool SeenSet::Contains(ItemId item) const {
  return dense_ ? bits_[item.index()] : sparse_.contains(item.value);
}

// ---------------------------------------------------------------------------
// Adversaries

std::optional<ItemId> ReplayAdversary::Next(const Transcript&, Rng&) {
  if (pos_ >= stream_.size()) return std::nullopt;
  return stream_[pos_++];
}

std::optional<ItemId> UniformAdversary::Next(const Transcript&, Rng& rng) {
  return UniformItem(n_, rng);
}

std::optional<ItemId> EchoAdversary::Next(const Transcript& transcript, Rng& rng) {
  if (!transcript.empty() && !transcript.back().output.failed()) {
    return transcript.back().output.item();
  }
  return UniformItem(n_, rng);
}

IntervalHunterAdversary::IntervalHunterAdversary(std::int64_t n, std::int64_t alpha_guess,
                                                 std::int64_t ell)
    : n_(n), alpha_(alpha_guess), played_(n, ell) {
  if (alpha_guess < 1) throw std::invalid_argument("interval hunter needs alpha_guess >= 1");
}

ItemId IntervalHunterAdversary::UniformUnplayed(Rng& rng) {
  if (played_.size() >= n_) return UniformItem(n_, rng);  // universe exhausted
  if (played_.size() * 2 < n_) {
    for (;;) {
      const auto item = UniformItem(n_, rng);
      if (!played_.Contains(item)) return item;
    }
  }
  std::vector<ItemId> unplayed;
  for (std::int64_t v = 1; v <= n_; ++v) {
    if (!played_.Contains(ItemId(v))) unplayed.push_back(ItemId(v));
  }
  return unplayed[std::uniform_int_distribution<std::size_t>(0, unplayed.size() - 1)(rng)];
}

std::optional<ItemId> IntervalHunterAdversary::Next(const Transcript& transcript, Rng& rng) {
  std::optional<ItemId> pick;
  auto latest = std::find_if(transcript.rbegin(), transcript.rend(),
                             [](const Turn& t) { return !t.output.failed(); });
  if (latest != transcript.rend()) {
    const std::int64_t block = (latest->output.item().value - 1) / alpha_;
    const std::int64_t first = block * alpha_ + 1;
    const std::int64_t last = std::min(first + alpha_ - 1, n_);
    for (std::int64_t v = first; v <= last; ++v) {
      if (!played_.Contains(ItemId(v))) {
        pick = ItemId(v);
        break;
      }
    }
  }
  if (!pick) pick = UniformUnplayed(rng);
  played_.Insert(*pick);
  return pick;
}

std::string_view ToString(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::kStaticRandom: return "static_random";
    case AdversaryKind::kReplay: return "replay";
    case AdversaryKind::kEcho: return "echo";
    case AdversaryKind::kIntervalHunter: return "interval_hunter";
    case AdversaryKind::kUniform: return "uniform";
  }
  return "?";
}

AdversaryKind ParseAdversaryKind(std::string_view name) {
  for (auto k : {AdversaryKind::kStaticRandom, AdversaryKind::kReplay, AdversaryKind::kEcho,
                 AdversaryKind::kIntervalHunter, AdversaryKind::kUniform}) {
    if (ToString(k) == name) return k;
  }
  throw std::invalid_argument("unknown adversary '" + std::string(name) + "'");
}

std::string AdversarySpec::Label() const {
  std::string label(ToString(kind));
  if (kind == AdversaryKind::kReplay) label += ":" + replay_path.string();
  if (kind == AdversaryKind::kStaticRandom && missing) {
    label += "(missing=" + std::to_string(*missing) + ")";
  }
  if (kind == AdversaryKind::kIntervalHunter && alpha_guess) {
    label += "(alpha_guess=" + std::to_string(*alpha_guess) + ")";
  }
  return label;
}

std::vector<ItemId> UniformStream(std::int64_t n, std::int64_t ell, Rng& rng) {
  std::vector<ItemId> stream;
  stream.reserve(static_cast<std::size_t>(ell));
  for (std::int64_t t = 0; t < ell; ++t) stream.push_back(UniformItem(n, rng));
  return stream;
}

std::vector<ItemId> CoverageStream(std::int64_t n, std::int64_t ell, std::int64_t missing, Rng& rng) {
  if (missing < 0 || missing > n) throw std::invalid_argument("missing must lie in [0, n]");
  const std::int64_t present = n - missing;
  if (ell < present || (present == 0 && ell > 0)) {
    throw std::invalid_argument("stream too short to cover all but `missing` items");
  }
  std::vector<ItemId> universe(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < universe.size(); ++i) universe[i] = ItemId::FromIndex(i);
  std::shuffle(universe.begin(), universe.end(), rng);
  universe.resize(static_cast<std::size_t>(present));  // the items that appear

  std::vector<ItemId> stream = universe;
  std::uniform_int_distribution<std::size_t> pick(0, universe.empty() ? 0 : universe.size() - 1);
  while (static_cast<std::int64_t>(stream.size()) < ell) stream.push_back(universe[pick(rng)]);
  std::shuffle(stream.begin(), stream.end(), rng);
  return stream;
}

std::unique_ptr<Adversary> MakeAdversary(const AdversarySpec& spec, std::int64_t n,
                                         std::int64_t ell, std::int64_t defender_alpha,
                                         Rng& rng) {
  switch (spec.kind) {
    case AdversaryKind::kStaticRandom:
      return std::make_unique<ReplayAdversary>(
          spec.missing ? CoverageStream(n, ell, *spec.missing, rng) : UniformStream(n, ell, rng));
    case AdversaryKind::kReplay: {
      if (spec.replay_stream) return std::make_unique<ReplayAdversary>(*spec.replay_stream);
      return std::make_unique<ReplayAdversary>(ReadStreamFile(spec.replay_path).items);
    }
    case AdversaryKind::kEcho:
      return std::make_unique<EchoAdversary>(n);
    case AdversaryKind::kIntervalHunter:
      return std::make_unique<IntervalHunterAdversary>(n, spec.alpha_guess.value_or(defender_alpha), ell);
    case AdversaryKind::kUniform:
      return std::make_unique<UniformAdversary>(n);
  }
  throw std::invalid_argument("unknown adversary");
}

// ---------------------------------------------------------------------------
// Games

GameResult PlayGame(MifAlgorithm& algorithm, Adversary& adversary, std::int64_t ell,
                     Rng& algorithm_rng, Rng& adversary_rng) {
  const std::int64_t n = algorithm.n();
  GameResult result;
  result.transcript.reserve(static_cast<std::size_t>(std::max<std::int64_t>(ell, 0)));
  SeenSet seen(n, ell);
  for (std::int64_t t = 1; t <= ell; ++t) {
    const auto item = adversary.Next(result.transcript, adversary_rng);
    if (!item) break;
    if (item->value < 1 || item->value > n) {
      throw std::logic_error("adversary emitted item " + std::to_string(item->value) +
                             " outside [1, " + std::to_string(n) + "]");
    }
    algorithm.Update(*item);
    seen.Insert(*item);
    const auto output = algorithm.Query(algorithm_rng);
    result.transcript.push_back({*item, output});
    ++result.turns_played;

    if (seen.size() == n) continue;  // nothing missing: any output is accepted
    bool failed = false;
    if (output.failed()) {
      ++result.fail_outputs;
      failed = true;
    } else if (output.item().value < 1 || output.item().value > n || seen.Contains(output.item())) {
      ++result.wrong_outputs;
      failed = true;
    }
    if (failed && !result.first_failure_turn) result.first_failure_turn = t;
  }
  result.bit_cost = algorithm.Cost();
  return result;
}

void TrialConfig::Validate() const {
  auto problems = ValidateSpec(algorithm);
  if (trials < 0) problems.push_back("trials must be >= 0");
  if (adversary.kind == AdversaryKind::kReplay && !adversary.replay_stream &&
      adversary.replay_path.empty()) {
    problems.push_back("replay adversary needs a stream file");
  }
  if (adversary.alpha_guess && adversary.kind != AdversaryKind::kIntervalHunter) {
    problems.push_back("alpha_guess is only valid with adversary=interval_hunter");
  }
  if (adversary.alpha_guess && *adversary.alpha_guess < 1) {
    problems.push_back("alpha_guess must be >= 1");
  }
  if (adversary.missing) {
    if (adversary.kind != AdversaryKind::kStaticRandom) {
      problems.push_back("missing is only valid with adversary=static_random");
    } else if (*adversary.missing < 0 || *adversary.missing > algorithm.n ||
               algorithm.ell < algorithm.n - *adversary.missing ||
               (*adversary.missing == algorithm.n && algorithm.ell > 0)) {
      problems.push_back("missing must satisfy n - missing <= ell and leave some item to play");
    }
  }
  if (problems.empty()) return;
  std::string message = "invalid trial configuration:";
  for (const auto& p : problems) message += "\n  " + p;
  throw std::invalid_argument(message);
}

Rng AlgorithmRng(std::uint64_t trial_seed) { return Rng(DeriveSeed(trial_seed, 0xa160)); }
Rng AdversaryRng(std::uint64_t trial_seed) { return Rng(DeriveSeed(trial_seed, 0xad5e)); }

TrialStats RunTrials(const TrialConfig& config) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  TrialStats stats;
  std::uint64_t bits_sum = 0;
  // Load a replay file once for all trials.
  AdversarySpec adversary = config.adversary;
  if (adversary.kind == AdversaryKind::kReplay && !adversary.replay_stream) {
    auto file = ReadStreamFile(adversary.replay_path);
    for (auto item : file.items) CheckItem(item, config.algorithm.n);
    adversary.replay_stream = std::make_shared<const std::vector<ItemId>>(std::move(file.items));
  }
  const std::int64_t defender_alpha = config.algorithm.model == Model::kIntervals
                                          ? config.algorithm.interval_params().alpha
                                          : 1;
  for (std::int64_t t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(t);
    Rng alg_rng = AlgorithmRng(seed);
    Rng adv_rng = AdversaryRng(seed);
    auto algorithm = MakeAlgorithm(config.algorithm, alg_rng);
    auto opponent = MakeAdversary(adversary, config.algorithm.n, config.algorithm.ell,
                                  defender_alpha, adv_rng);
    const auto game = PlayGame(*algorithm, *opponent, config.algorithm.ell, alg_rng, adv_rng);
    ++stats.trials;
    stats.turns += game.turns_played;
    stats.wrong_outputs += game.wrong_outputs;
    stats.fail_outputs += game.fail_outputs;
    if (game.failed()) ++stats.failures;
    const auto bits = game.bit_cost.total_bits();
    bits_sum += bits;
    stats.max_bits = std::max(stats.max_bits, bits);
  }
  if (stats.trials > 0) {
    stats.mean_bits = static_cast<double>(bits_sum) / static_cast<double>(stats.trials);
  }
  stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

// ---------------------------------------------------------------------------
// Card guessing

std::int64_t CardGuessingGame(MifAlgorithm& guesser, std::span<const ItemId> deck, Rng& rng) {
  const std::int64_t n = guesser.n();
  if (static_cast<std::int64_t>(deck.size()) != n) {
    throw std::invalid_argument("deck must hold exactly n cards");
  }
  std::vector<bool> present(static_cast<std::size_t>(n), false);
  for (auto card : deck) {
    if (card.value < 1 || card.value > n || present[card.index()]) {
      throw std::invalid_argument("deck is not a permutation of [n]");
    }
    present[card.index()] = true;
  }
  std::int64_t score = 0;
  for (auto card : deck) {
    const auto guess = guesser.Query(rng);
    const ItemId named = guess.failed() ? ItemId(1) : guess.item();
    if (named == card) ++score;
    guesser.Update(card);
  }
  return score;
}

double HarmonicNumber(std::int64_t n) {
  double h = 0.0;
  for (std::int64_t t = n; t >= 1; --t) h += 1.0 / static_cast<double>(t);
  return h;
}

}  // namespace mif
