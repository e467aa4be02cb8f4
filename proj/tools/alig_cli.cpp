// Copyright 2026 The alig Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: run, sweep, compare, gradcheck, version.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "alig/config.hpp"
#include "alig/errors.hpp"
#include "alig/harness.hpp"
#include "alig/problems.hpp"
#include "alig/version.hpp"

namespace {

using namespace alig;

void print_summary(const RunSummary& s) {
  std::printf("steps            %lld\n", static_cast<long long>(s.steps_taken));
  std::printf("final full loss  %.6e\n", s.final_full_loss);
  std::printf("best full loss   %.6e\n", s.best_full_loss);
  if (s.final_accuracy) {
    std::printf("final accuracy   %.4f\n", *s.final_accuracy);
  }
  std::printf("interp residual  %.6e\n", s.interpolation_residual_final);
  std::printf("wall time        %.3f s\n", s.wall_time_seconds);
}

// "kind=two_moons_mlp,n=200,width=32" or just "two_moons_mlp".
ProblemSpec parse_problem_argument(const std::string& text) {
  std::string config;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    start = comma == std::string::npos ? text.size() + 1 : comma + 1;
    if (item.empty()) {
      continue;
    }
    if (item.find('=') == std::string::npos) {
      config += "problem.kind = " + item + "\n";
    } else {
      config += "problem." + item + "\n";
    }
  }
  config += "rule.variant = alig\n";
  return parse_config(config).problem;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ALI-G / SPS stochastic optimization harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;

  auto* run_cmd = app.add_subcommand("run", "Run one experiment");
  run_cmd->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "Output directory (overrides run.out_dir)");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Sampling seed (overrides run.seed)");

  std::string grid_path;
  std::size_t parallelism = 1;
  std::string sort_by = "final_full_loss";
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid sweep over config fields");
  sweep_cmd->add_option("--config", config_path, "Base config file")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--grid", grid_path, "Grid file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--parallelism", parallelism, "Concurrent cells")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--sort-by", sort_by,
                        "final_full_loss | best_full_loss | final_accuracy | "
                        "interpolation_residual");
  sweep_cmd->add_option("--out", out_dir, "Output directory (overrides run.out_dir)");

  std::string rules_path;
  auto* compare_cmd = app.add_subcommand("compare", "Paired comparison of step rules");
  compare_cmd->add_option("--config", config_path, "Base config file")
      ->required()
      ->check(CLI::ExistingFile);
  compare_cmd->add_option("--rules", rules_path, "Rules file")->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("--parallelism", parallelism, "Concurrent runs")
      ->check(CLI::PositiveNumber);
  compare_cmd->add_option("--out", out_dir, "Output directory (overrides run.out_dir)");

  std::string problem;
  std::size_t trials = 100;
  double h = 1e-6;
  double tol = 1e-5;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient check");
  grad_cmd->add_option("--problem", problem, "e.g. two_moons_mlp or kind=two_moons_mlp,width=16")
      ->required();
  grad_cmd->add_option("--trials", trials, "Random (w, z) pairs");
  grad_cmd->add_option("--step", h, "Central-difference step");
  grad_cmd->add_option("--tol", tol, "Max relative error");
  grad_cmd->add_option("--seed", seed, "Seed for the random points");

  std::string dataset_out;
  auto* dataset_cmd = app.add_subcommand("dataset", "Export a generated dataset as CSV");
  dataset_cmd->add_option("--problem", problem, "Problem spec as for gradcheck")->required();
  dataset_cmd->add_option("--out", dataset_out, "CSV path (stdout if omitted)");

  auto* version_cmd = app.add_subcommand("version", "Print version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      KeyValues entries = parse_key_values(read_text_file(config_path));
      if (!out_dir.empty()) set_entry(entries, "run.out_dir", out_dir);
      if (*seed_opt) set_entry(entries, "run.seed", std::to_string(seed));
      const ExperimentConfig config = build_config(entries);
      try {
        print_summary(run(config));
      } catch (const std::exception& e) {
        std::cerr << "run aborted: " << e.what() << "\n";
        return 3;
      }
      std::cout << "outputs in " << config.out_dir.string() << "\n";
    } else if (sweep_cmd->parsed()) {
      KeyValues base = parse_key_values(read_text_file(config_path));
      if (!out_dir.empty()) set_entry(base, "run.out_dir", out_dir);
      const auto metric = parse_sweep_metric(sort_by);
      if (!metric) {
        std::cerr << "unknown --sort-by metric '" << sort_by << "'\n";
        return 2;
      }
      const auto cells = sweep(base, parse_grid(read_text_file(grid_path)), {parallelism, *metric});
      const std::string root = build_config(base).out_dir.string();
      std::cout << read_text_file(root + "/table.txt");
      std::size_t failed = 0;
      for (const auto& cell : cells) failed += cell.ok ? 0 : 1;
      std::cout << cells.size() << " cells, " << failed << " failed; tables in " << root << "\n";
    } else if (compare_cmd->parsed()) {
      KeyValues base = parse_key_values(read_text_file(config_path));
      if (!out_dir.empty()) set_entry(base, "run.out_dir", out_dir);
      const auto comparison =
          compare_rules(base, parse_rules(read_text_file(rules_path)), parallelism);
      std::string root = "out";
      for (const auto& [key, entry] : base) {
        if (key == "run.out_dir") root = entry.value;
      }
      std::cout << read_text_file(root + "/table.txt");
      std::cout << (comparison.paired ? "paired sampling verified\n"
                                      : "WARNING: sample streams differ between rules\n");
    } else if (grad_cmd->parsed()) {
      const auto objective = make_objective(parse_problem_argument(problem));
      const auto report = check_gradients(*objective, trials, h, tol, seed);
      std::printf("max relative error %.3e over %zu trials: %s\n", report.max_relative_error,
                  report.trials, report.passed ? "PASS" : "FAIL");
      for (std::size_t i = 0; i < report.failures.size() && i < 10; ++i) {
        const auto& f = report.failures[i];
        std::printf("  trial %zu sample %zu coord %lld: analytic %.6e numeric %.6e (rel %.2e)\n",
                    f.trial, f.sample, static_cast<long long>(f.coordinate), f.analytic, f.numeric,
                    f.relative_error);
      }
      return report.passed ? 0 : 1;
    } else if (dataset_cmd->parsed()) {
      const auto objective = make_objective(parse_problem_argument(problem));
      if (dataset_out.empty()) {
        write_dataset_csv(*objective, std::cout);
      } else {
        std::ofstream out(dataset_out);
        write_dataset_csv(*objective, out);
      }
    } else if (version_cmd->parsed()) {
      std::cout << "alig " << kVersion << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
