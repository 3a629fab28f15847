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

// mifx: experiment runner for the missing-item-finding algorithms.
//
//   mifx run --model on_the_fly --n 10000 --ell 50 --trials 10000 --seed 7
//   mifx sweep --model intervals --n 1048576 --ell 256 --alpha 16
//        --adversary interval_hunter --axis beta --values 8,16,32,64
//   mifx sampler-tv [--vectors 20 --n 16 --draws 100000 --sketch-draws 20000]
//   mifx selftest
//
// Exit status: 0 on success, 1 on a zero-error violation or failed check,
// 2 on a configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mif/checks.h"
#include "mif/experiment.h"

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

void Usage() {
  std::cerr << "usage: mifx {run|sweep|sampler-tv|selftest} [options]\n"
               "       mifx run --help\n";
}

// Splits off `--output <path>` (or `--output=<path>`); everything else is
// forwarded to the experiment parser.
std::vector<std::string> TakeOutput(const std::vector<std::string>& args, std::string* output) {
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--output" && i + 1 < args.size()) {
      *output = args[++i];
    } else if (args[i].rfind("--output=", 0) == 0) {
      *output = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  return rest;
}

int RunExperiment(const std::vector<std::string>& args, bool sweep) {
  if (!args.empty() && (args[0] == "--help" || args[0] == "-h")) {
    std::cout << "flags: --model --sampler --n --ell --k --delta --copies/-m --alpha --beta\n"
                 "       --adversary --missing --alpha-guess --trials --seed (env MIF_SEED)\n"
                 "       --format csv|json --output <path> --config <file>"
              << (sweep ? "\n       --axis m|beta|ell|delta --values v1,v2,..." : "") << "\n";
    return kOk;
  }
  std::string output;
  const auto rest = TakeOutput(args, &output);
  mif::ExperimentConfig config;
  try {
    config = mif::ParseConfig(rest, sweep);
  } catch (const mif::ConfigError& e) {
    for (const auto& p : e.problems()) std::cerr << "error: " << p << "\n";
    return kUsage;
  }
  const auto rows = mif::Execute(config);
  const auto report = mif::EmitReport(rows, config.format);
  if (output.empty()) {
    std::cout << report;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << output << "\n";
      return kUsage;
    }
    out << report;
  }
  if (mif::HasZeroErrorViolation(rows)) {
    std::cerr << "zero-error violation: a zero-error configuration produced a wrong output\n";
    return kViolation;
  }
  return kOk;
}

int SamplerTv(const std::vector<std::string>& args) {
  CLI::App app{"mifx sampler-tv"};
  std::int64_t vectors = 20, n = 16, draws = 100000, sketch_draws = 20000;
  std::uint64_t seed = 1;
  app.add_option("--vectors", vectors, "random frequency vectors");
  app.add_option("--n", n, "universe size");
  app.add_option("--draws", draws, "exact-sampler draws per vector");
  app.add_option("--sketch-draws", sketch_draws, "independently seeded sketches per vector");
  app.add_option("--seed", seed, "seed")->envname("MIF_SEED");
  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }
  const auto r = mif::RunSamplerTvBattery(vectors, n, draws, sketch_draws, seed);
  std::printf("vectors=%lld n=%lld draws=%lld sketch_draws=%lld seed=%llu\n",
              static_cast<long long>(r.vectors), static_cast<long long>(n),
              static_cast<long long>(draws), static_cast<long long>(sketch_draws),
              static_cast<unsigned long long>(seed));
  std::printf("max_exact_tv=%.6f\nmax_sketch_tv=%.6f\nmax_sketch_fail_rate=%.6f\n",
              r.max_exact_tv, r.max_sketch_tv, r.max_sketch_fail_rate);
  return kOk;
}

int SelfTest() {
  bool ok = true;
  const auto mass = mif::CheckNegativeMass(6, 5, {0.0, 0.5, 1.0});
  std::printf("%s negative-mass n<=6 ell<=5 p in {0,0.5,1}: streams=%lld min_fraction=%.6f\n",
              mass.passed() ? "PASS" : "FAIL", static_cast<long long>(mass.streams),
              mass.min_fraction);
  ok &= mass.passed();
  const auto lr = mif::CheckLongRegimeRate(8, 3);
  std::printf("%s long-regime rate >= 1/(k+2) n<=8 k<=3: cases=%lld min_margin=%.6f\n",
              lr.passed() ? "PASS" : "FAIL", static_cast<long long>(lr.cases), lr.min_margin);
  ok &= lr.passed();
  const auto ph = mif::CheckPigeonhole(7);
  std::printf("%s deterministic horizon h<=7 all streams: queries=%lld violations=%lld\n",
              ph.passed() ? "PASS" : "FAIL", static_cast<long long>(ph.queries),
              static_cast<long long>(ph.violations));
  ok &= ph.passed();
  return ok ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    Usage();
    return kUsage;
  }
  const std::string command = argv[1];
  const std::vector<std::string> args(argv + 2, argv + argc);
  try {
    if (command == "run") return RunExperiment(args, false);
    if (command == "sweep") return RunExperiment(args, true);
    if (command == "sampler-tv") return SamplerTv(args);
    if (command == "selftest") return SelfTest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  Usage();
  return kUsage;
}
