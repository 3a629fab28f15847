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

// Experiment configuration, trial-matrix execution and CSV / JSON reports.

#ifndef MIF_EXPERIMENT_H_
#define MIF_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mif/algorithms.h"
#include "mif/harness.h"

namespace mif {

enum class OutputFormat { kCsv, kJson };

enum class SweepAxis { kCopies, kBeta, kEll, kDelta };

std::string_view ToString(SweepAxis axis);
SweepAxis ParseSweepAxis(std::string_view name);

struct Sweep {
  SweepAxis axis = SweepAxis::kBeta;
  std::vector<double> values;
};

struct ExperimentConfig {
  AlgorithmSpec algorithm;
  AdversarySpec adversary;
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::kCsv;
  std::optional<Sweep> sweep;
};

// Carries every violation found, not just the first.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// All violations of `config`; empty when it is runnable.
std::vector<std::string> Validate(const ExperimentConfig& config);

// Parses `run` / `sweep` style arguments (without the program name or
// subcommand), e.g. {"--model", "on_the_fly", "--n", "10000"}. Accepts
// `--config <file>` with the same keys in INI/TOML form. Throws ConfigError.
ExperimentConfig ParseConfig(const std::vector<std::string>& args, bool with_sweep = false);

struct ReportRow {
  std::string model;
  std::int64_t n = 0;
  std::int64_t ell = 0;
  std::string params;
  std::string adversary;
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  std::int64_t wrong_outputs = 0;
  std::int64_t fail_outputs = 0;
  std::optional<double> bound;
  double mean_bits = 0.0;
  std::uint64_t max_bits = 0;
  std::uint64_t seed = 0;
  bool zero_error = false;  // not serialized; drives the exit code

  double failure_rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(trials);
  }
  friend bool operator==(const ReportRow& a, const ReportRow& b);
};

// Canonical `key=value;...` parameter string for an algorithm configuration.
std::string CanonicalParams(const AlgorithmSpec& spec);
// Analytic failure bound, when one exists for the configuration.
std::optional<double> AnalyticBound(const AlgorithmSpec& spec);

// Runs one row (row_index offsets the seed by 10^6 per row).
ReportRow ExecuteRow(const ExperimentConfig& config, std::int64_t row_index = 0);
// One row, or one row per sweep value when config.sweep is set.
std::vector<ReportRow> Execute(const ExperimentConfig& config);
std::vector<ReportRow> RunSweep(const ExperimentConfig& config);

// True if a zero-error configuration produced a wrong output.
bool HasZeroErrorViolation(const std::vector<ReportRow>& rows);

inline constexpr std::string_view kCsvHeader =
    "model,n,ell,params,adversary,trials,failures,wrong_outputs,fail_outputs,"
    "failure_rate,bound,mean_bits,max_bits,seed";

std::string EmitReport(const std::vector<ReportRow>& rows, OutputFormat format);
std::vector<ReportRow> ParseJsonReport(const std::string& text);

// Shortest decimal string that round-trips to the same double.
std::string FormatNumber(double value);
// Fixed six decimal places.
std::string FormatRate(double rate);

}  // namespace mif

#endif  // MIF_EXPERIMENT_H_
