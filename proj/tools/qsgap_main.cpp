// Copyright 2026 The qsgap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command line runner. Subcommands:
//   attack          run one attack over a level range, emit CSV rows
//   verify          run the full property suite over the fixed grid
//   bench           measure peak space of a summary on shuffled streams
//   replay-example  run the small fixed construction and emit its trace
// Exit codes: 0 ok, 1 invariant violation, 2 configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qsgap/experiment.hpp"

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qsgap::ConfigError("cannot open '" + path + "' for writing");
  out << text;
}

int cmd_attack(qsgap::ExperimentConfig cfg) {
  cfg.command = "attack";
  auto res = qsgap::run_attack_grid(cfg);
  std::cout << res.csv();
  if (!cfg.csv_path.empty()) write_file(cfg.csv_path, res.csv());
  if (!cfg.trace_path.empty()) write_file(cfg.trace_path, res.traces().dump(2) + "\n");
  if (!res.all_ok) {
    std::cerr << "violation: " << res.first_violation << "\n";
    return 1;
  }
  return 0;
}

int cmd_verify(qsgap::ExperimentConfig cfg) {
  cfg.command = "verify";
  auto rep = qsgap::run_verify(cfg);
  for (const auto& p : rep.props) {
    std::cout << (p.ok ? "[ok]   " : "[FAIL] ") << p.name;
    if (!p.ok) std::cout << "  (" << p.detail << ")";
    std::cout << "\n";
  }
  return rep.all_ok() ? 0 : 1;
}

int cmd_bench(qsgap::ExperimentConfig cfg) {
  cfg.command = "bench";
  auto rep = qsgap::run_bench(cfg);
  std::cout << rep.csv();
  if (!cfg.csv_path.empty()) write_file(cfg.csv_path, rep.csv());
  if (!rep.ratio_stable) {
    std::cerr << "violation: peak-space ratio drifted beyond 2x its first value\n";
    return 1;
  }
  return 0;
}

int cmd_replay(const qsgap::ExperimentConfig& cfg) {
  auto rep = qsgap::run_replay_example();
  std::cout << "checkpoints:";
  for (auto c : rep.checkpoints) std::cout << " " << c;
  std::cout << "\nleaves: " << rep.leaves << "  refinements: " << rep.refinements
            << "  final length: " << rep.final_len << "\n"
            << (rep.ok ? "structure ok" : "structure MISMATCH") << "\n";
  if (!cfg.trace_path.empty()) write_file(cfg.trace_path, rep.trace.dump(2) + "\n");
  return rep.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adversarial gap experiments for comparison-based quantile summaries"};
  app.require_subcommand(1);

  qsgap::ExperimentConfig cfg;
  std::string k_range = "4..10";

  auto add_common = [&](CLI::App* sub, bool with_attack) {
    sub->add_option("--eps-inv", cfg.eps_inv, "accuracy as the integer 1/eps");
    sub->add_option("--k", k_range, "level range A..B or a single level");
    sub->add_option("--summary", cfg.summary, "subject: gk | gk-greedy | offline");
    if (with_attack)
      sub->add_option("--attack", cfg.attack, "quantile | median | rank | biased");
    sub->add_option("--csv", cfg.csv_path, "also write the CSV to this file");
    sub->add_option("--trace", cfg.trace_path, "write the JSON trace to this file");
    sub->add_option("--seed", cfg.seed, "seed for randomized test streams");
    sub->add_flag("--quick", cfg.quick, "smaller grid");
    sub->add_option("--jobs", cfg.jobs, "worker threads for independent runs");
  };

  CLI::App* attack = app.add_subcommand("attack", "run one attack over a level range");
  add_common(attack, true);
  CLI::App* verify = app.add_subcommand("verify", "run the property suite");
  add_common(verify, false);
  CLI::App* bench = app.add_subcommand("bench", "peak-space trend on shuffled streams");
  add_common(bench, false);
  CLI::App* replay = app.add_subcommand("replay-example", "run the small fixed construction");
  replay->add_option("--trace", cfg.trace_path, "write the JSON trace to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.max_n = qsgap::default_max_n();
    if (attack->parsed() || bench->parsed()) {
      if (bench->parsed() && bench->count("--k") == 0) k_range = "6..14";
      qsgap::parse_k_range(k_range, cfg.k_min, cfg.k_max);
    }
    if (attack->parsed()) return cmd_attack(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (bench->parsed()) return cmd_bench(cfg);
    return cmd_replay(cfg);
  } catch (const qsgap::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qsgap::SummaryNotStreaming& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qsgap::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}
