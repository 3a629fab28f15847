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

#include "mif/experiment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "CLI11.hpp"
#include "json.hpp"

namespace mif {

namespace {

constexpr std::uint64_t kRowSeedStride = 1000000;

std::string JoinProblems(const std::vector<std::string>& problems) {
  std::string message = "invalid configuration:";
  for (const auto& p : problems) message += "\n  " + p;
  return message;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::invalid_argument(JoinProblems(problems)), problems_(std::move(problems)) {}

std::string_view ToString(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kCopies: return "m";
    case SweepAxis::kBeta: return "beta";
    case SweepAxis::kEll: return "ell";
    case SweepAxis::kDelta: return "delta";
  }
  return "?";
}

SweepAxis ParseSweepAxis(std::string_view name) {
  if (name == "m" || name == "copies") return SweepAxis::kCopies;
  if (name == "beta") return SweepAxis::kBeta;
  if (name == "ell") return SweepAxis::kEll;
  if (name == "delta") return SweepAxis::kDelta;
  throw std::invalid_argument("unknown sweep axis '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Sweep points

namespace {

AlgorithmSpec SweepPoint(const AlgorithmSpec& base, SweepAxis axis, double value) {
  AlgorithmSpec spec = base;
  switch (axis) {
    case SweepAxis::kCopies: spec.copies = static_cast<int>(value); break;
    case SweepAxis::kBeta: spec.beta = static_cast<std::int64_t>(value); break;
    case SweepAxis::kEll: spec.ell = static_cast<std::int64_t>(value); break;
    case SweepAxis::kDelta: spec.delta = value; break;
  }
  return spec;
}

bool IsZeroError(const AlgorithmSpec& spec) {
  switch (spec.model) {
    case Model::kDeterministic:
    case Model::kIntervals:
      return true;
    case Model::kStatic:
    case Model::kLongRegime:
      return spec.sampler == SamplerKind::kExact;
    case Model::kOnTheFly:
      return false;
  }
  return false;
}

}  // namespace

std::vector<std::string> Validate(const ExperimentConfig& config) {
  std::vector<std::string> problems;
  auto check = [&](const AlgorithmSpec& spec, const std::string& where) {
    for (auto& p : ValidateSpec(spec)) problems.push_back(where + p);
  };
  if (config.sweep) {
    const auto& sweep = *config.sweep;
    if (sweep.values.empty()) problems.push_back("sweep needs at least one value");
    const bool sampled = config.algorithm.model == Model::kStatic ||
                         config.algorithm.model == Model::kLongRegime;
    if (sweep.axis == SweepAxis::kCopies && !sampled) {
      problems.push_back("sweep over m requires model=static or long_regime");
    }
    if (sweep.axis == SweepAxis::kBeta && config.algorithm.model != Model::kIntervals) {
      problems.push_back("sweep over beta requires model=intervals");
    }
    if (sweep.axis == SweepAxis::kDelta && !sampled) {
      problems.push_back("sweep over delta requires model=static or long_regime");
    }
    for (double v : sweep.values) {
      if (sweep.axis != SweepAxis::kDelta && v != std::floor(v)) {
        problems.push_back("sweep value " + FormatNumber(v) + " must be an integer");
        continue;
      }
      check(SweepPoint(config.algorithm, sweep.axis, v),
            std::string(ToString(sweep.axis)) + "=" + FormatNumber(v) + ": ");
    }
  } else {
    check(config.algorithm, "");
  }
  if (config.trials < 0) problems.push_back("trials must be >= 0");
  const auto& adv = config.adversary;
  if (adv.kind == AdversaryKind::kReplay) {
    if (adv.replay_path.empty() && !adv.replay_stream) {
      problems.push_back("replay adversary needs a file: --adversary replay:<path>");
    } else if (!adv.replay_stream && !std::filesystem::exists(adv.replay_path)) {
      problems.push_back("replay file not found: " + adv.replay_path.string());
    }
  }
  if (adv.alpha_guess) {
    if (adv.kind != AdversaryKind::kIntervalHunter) {
      problems.push_back("alpha-guess is only valid with adversary=interval_hunter");
    } else if (*adv.alpha_guess < 1) {
      problems.push_back("alpha-guess must be >= 1");
    }
  }
  if (adv.missing) {
    const auto& a = config.algorithm;
    if (adv.kind != AdversaryKind::kStaticRandom) {
      problems.push_back("missing is only valid with adversary=static_random");
    } else if (*adv.missing < 0 || *adv.missing > a.n || a.ell < a.n - *adv.missing) {
      problems.push_back("missing must satisfy 0 <= missing <= n and ell >= n - missing");
    }
  }
  return problems;
}

// ---------------------------------------------------------------------------
// Argument parsing

ExperimentConfig ParseConfig(const std::vector<std::string>& args, bool with_sweep) {
  CLI::App app{"mif experiment"};
  std::string model, sampler = "exact", adversary = "static_random", format = "csv";
  std::int64_t n = 0, k = 0, trials = 1000;
  std::optional<std::int64_t> ell, alpha, beta, missing, alpha_guess;
  std::optional<int> copies;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::vector<std::string> axes;
  std::vector<double> values;

  app.set_config("--config", "", "INI/TOML file with the same keys as the flags");
  app.add_option("--model", model, "deterministic|static|long_regime|on_the_fly|intervals")
      ->required();
  app.add_option("--sampler", sampler, "exact|sketch (static and long_regime)");
  app.add_option("--n", n, "universe size")->required();
  app.add_option("--ell", ell, "stream length (defaults to the replay length)");
  app.add_option("--k", k, "long regime excess: ell = n + k");
  app.add_option("--delta", delta, "target error for static / long_regime");
  app.add_option("--copies,-m", copies, "override the number of parallel sampler copies");
  app.add_option("--alpha", alpha, "interval length (intervals)");
  app.add_option("--beta", beta, "tracked intervals (intervals)");
  app.add_option("--adversary", adversary,
                 "static_random|replay:<path>|echo|interval_hunter|uniform");
  app.add_option("--missing", missing, "static_random: leave exactly this many items unseen");
  app.add_option("--alpha-guess", alpha_guess, "interval_hunter block size (default: alpha)");
  app.add_option("--trials", trials, "independent games per row");
  app.add_option("--seed", seed, "base seed")->envname("MIF_SEED");
  app.add_option("--format", format, "csv|json");
  if (with_sweep) {
    app.add_option("--axis", axes, "m|beta|ell|delta (exactly one)")->required();
    app.add_option("--values", values, "comma-separated sweep values")
        ->delimiter(',')
        ->required();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigError({e.what()});
  }

  std::vector<std::string> problems;
  ExperimentConfig config;
  try {
    config.algorithm.model = ParseModel(model);
  } catch (const std::invalid_argument& e) {
    problems.push_back(e.what());
  }
  try {
    config.algorithm.sampler = ParseSamplerKind(sampler);
  } catch (const std::invalid_argument& e) {
    problems.push_back(e.what());
  }
  const auto colon = adversary.find(':');
  try {
    config.adversary.kind = ParseAdversaryKind(adversary.substr(0, colon));
    if (colon != std::string::npos) {
      if (config.adversary.kind != AdversaryKind::kReplay) {
        problems.push_back("only the replay adversary takes a ':<path>' argument");
      }
      config.adversary.replay_path = adversary.substr(colon + 1);
    }
  } catch (const std::invalid_argument& e) {
    problems.push_back(e.what());
  }
  if (format == "csv") {
    config.format = OutputFormat::kCsv;
  } else if (format == "json") {
    config.format = OutputFormat::kJson;
  } else {
    problems.push_back("unknown format '" + format + "' (csv|json)");
  }
  if (with_sweep) {
    if (axes.size() != 1) {
      problems.push_back("a sweep varies exactly one axis, got " + std::to_string(axes.size()));
    } else {
      try {
        config.sweep = Sweep{ParseSweepAxis(axes.front()), values};
      } catch (const std::invalid_argument& e) {
        problems.push_back(e.what());
      }
    }
  }

  auto& spec = config.algorithm;
  spec.n = n;
  spec.k = k;
  spec.delta = delta;
  spec.copies = copies;
  spec.alpha = alpha;
  spec.beta = beta;
  config.adversary.missing = missing;
  config.adversary.alpha_guess = alpha_guess;
  config.trials = trials;
  config.seed = seed;

  if (ell) {
    spec.ell = *ell;
  } else if (config.adversary.kind == AdversaryKind::kReplay &&
             !config.adversary.replay_path.empty()) {
    try {
      auto file = ReadStreamFile(config.adversary.replay_path);
      if (file.n && *file.n != n) {
        problems.push_back("replay file header n=" + std::to_string(*file.n) +
                           " does not match --n " + std::to_string(n));
      }
      spec.ell = static_cast<std::int64_t>(file.items.size());
    } catch (const std::exception& e) {
      problems.push_back(std::string("missing or unreadable replay file: ") + e.what());
    }
  } else if (!with_sweep || !config.sweep || config.sweep->axis != SweepAxis::kEll) {
    problems.push_back("--ell is required");
  }
  if (spec.model == Model::kLongRegime && k == 0 && spec.ell > spec.n) spec.k = spec.ell - spec.n;

  if (problems.empty()) problems = Validate(config);
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return config;
}

// ---------------------------------------------------------------------------
// Execution

std::string CanonicalParams(const AlgorithmSpec& spec) {
  switch (spec.model) {
    case Model::kDeterministic:
      return "h=" + std::to_string(std::min(spec.ell + 1, spec.n));
    case Model::kOnTheFly:
      return "bits_per_turn=" + std::to_string(CeilLog2(static_cast<std::uint64_t>(spec.n)));
    case Model::kIntervals: {
      const auto p = spec.interval_params();
      return "alpha=" + std::to_string(p.alpha) + ";beta=" + std::to_string(p.beta);
    }
    case Model::kStatic:
    case Model::kLongRegime: {
      std::string s = "sampler=" + std::string(ToString(spec.sampler));
      if (spec.model == Model::kLongRegime) s += ";k=" + std::to_string(spec.k);
      if (!spec.copies) s += ";delta=" + FormatNumber(spec.delta);
      s += ";m=" + std::to_string(spec.copy_count());
      return s;
    }
  }
  return "";
}

std::optional<double> AnalyticBound(const AlgorithmSpec& spec) {
  switch (spec.model) {
    case Model::kOnTheFly:
      return OnTheFlyErrorBound(spec.n, spec.ell);
    case Model::kStatic:
    case Model::kLongRegime:
      if (spec.copies) return std::nullopt;  // bound is tied to the delta-derived m
      return spec.delta;
    default:
      return std::nullopt;
  }
}

ReportRow ExecuteRow(const ExperimentConfig& config, std::int64_t row_index) {
  TrialConfig trial{config.algorithm, config.adversary, config.trials,
                    config.seed + kRowSeedStride * static_cast<std::uint64_t>(row_index)};
  const auto stats = RunTrials(trial);
  ReportRow row;
  row.model = std::string(ToString(config.algorithm.model));
  row.n = config.algorithm.n;
  row.ell = config.algorithm.ell;
  row.params = CanonicalParams(config.algorithm);
  row.adversary = config.adversary.Label();
  row.trials = stats.trials;
  row.failures = stats.failures;
  row.wrong_outputs = stats.wrong_outputs;
  row.fail_outputs = stats.fail_outputs;
  row.bound = AnalyticBound(config.algorithm);
  row.mean_bits = stats.mean_bits;
  row.max_bits = stats.max_bits;
  row.seed = trial.base_seed;
  row.zero_error = IsZeroError(config.algorithm);
  return row;
}

std::vector<ReportRow> RunSweep(const ExperimentConfig& config) {
  if (!config.sweep) throw std::invalid_argument("RunSweep needs a sweep axis");
  if (auto problems = Validate(config); !problems.empty()) throw ConfigError(problems);
  std::vector<ReportRow> rows;
  std::int64_t index = 0;
  for (double v : config.sweep->values) {
    ExperimentConfig point = config;
    point.sweep.reset();
    point.algorithm = SweepPoint(config.algorithm, config.sweep->axis, v);
    rows.push_back(ExecuteRow(point, index++));
  }
  return rows;
}

std::vector<ReportRow> Execute(const ExperimentConfig& config) {
  if (config.sweep) return RunSweep(config);
  if (auto problems = Validate(config); !problems.empty()) throw ConfigError(problems);
  return {ExecuteRow(config, 0)};
}

bool HasZeroErrorViolation(const std::vector<ReportRow>& rows) {
  return std::any_of(rows.begin(), rows.end(),
                     [](const ReportRow& r) { return r.zero_error && r.wrong_outputs > 0; });
}

// ---------------------------------------------------------------------------
// Reports

bool operator==(const ReportRow& a, const ReportRow& b) {
  return a.model == b.model && a.n == b.n && a.ell == b.ell && a.params == b.params &&
         a.adversary == b.adversary && a.trials == b.trials && a.failures == b.failures &&
         a.wrong_outputs == b.wrong_outputs && a.fail_outputs == b.fail_outputs &&
         a.bound == b.bound && a.mean_bits == b.mean_bits && a.max_bits == b.max_bits &&
         a.seed == b.seed;
}

std::string FormatNumber(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string FormatRate(double rate) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", rate);
  return buf;
}

namespace {

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string JsonString(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

std::string EmitReport(const std::vector<ReportRow>& rows, OutputFormat format) {
  std::string out;
  if (format == OutputFormat::kCsv) {
    out += kCsvHeader;
    out += '\n';
    for (const auto& r : rows) {
      out += CsvField(r.model) + ',' + std::to_string(r.n) + ',' + std::to_string(r.ell) + ',' +
             CsvField(r.params) + ',' + CsvField(r.adversary) + ',' + std::to_string(r.trials) +
             ',' + std::to_string(r.failures) + ',' + std::to_string(r.wrong_outputs) + ',' +
             std::to_string(r.fail_outputs) + ',' + FormatRate(r.failure_rate()) + ',' +
             (r.bound ? FormatNumber(*r.bound) : "") + ',' + FormatNumber(r.mean_bits) + ',' +
             std::to_string(r.max_bits) + ',' + std::to_string(r.seed) + '\n';
    }
    return out;
  }
  out += "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out += i == 0 ? "\n  {" : ",\n  {";
    out += "\"model\": " + JsonString(r.model);
    out += ", \"n\": " + std::to_string(r.n);
    out += ", \"ell\": " + std::to_string(r.ell);
    out += ", \"params\": " + JsonString(r.params);
    out += ", \"adversary\": " + JsonString(r.adversary);
    out += ", \"trials\": " + std::to_string(r.trials);
    out += ", \"failures\": " + std::to_string(r.failures);
    out += ", \"wrong_outputs\": " + std::to_string(r.wrong_outputs);
    out += ", \"fail_outputs\": " + std::to_string(r.fail_outputs);
    out += ", \"failure_rate\": " + FormatRate(r.failure_rate());
    out += ", \"bound\": " + (r.bound ? FormatNumber(*r.bound) : std::string("null"));
    out += ", \"mean_bits\": " + FormatNumber(r.mean_bits);
    out += ", \"max_bits\": " + std::to_string(r.max_bits);
    out += ", \"seed\": " + std::to_string(r.seed);
    out += "}";
  }
  out += rows.empty() ? "]\n" : "\n]\n";
  return out;
}

std::vector<ReportRow> ParseJsonReport(const std::string& text) {
  const auto doc = nlohmann::json::parse(text);
  if (!doc.is_array()) throw std::invalid_argument("report must be a JSON array");
  std::vector<ReportRow> rows;
  for (const auto& obj : doc) {
    ReportRow r;
    r.model = obj.at("model").get<std::string>();
    r.n = obj.at("n").get<std::int64_t>();
    r.ell = obj.at("ell").get<std::int64_t>();
    r.params = obj.at("params").get<std::string>();
    r.adversary = obj.at("adversary").get<std::string>();
    r.trials = obj.at("trials").get<std::int64_t>();
    r.failures = obj.at("failures").get<std::int64_t>();
    r.wrong_outputs = obj.at("wrong_outputs").get<std::int64_t>();
    r.fail_outputs = obj.at("fail_outputs").get<std::int64_t>();
    if (!obj.at("bound").is_null()) r.bound = obj.at("bound").get<double>();
    r.mean_bits = obj.at("mean_bits").get<double>();
    r.max_bits = obj.at("max_bits").get<std::uint64_t>();
    r.seed = obj.at("seed").get<std::uint64_t>();
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace mif
