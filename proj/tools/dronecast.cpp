/*
 * Copyright 2026 The dronecast Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// dronecast: analytic evaluation, simulation, validation and sweeps of
// broadcast recovery probabilities for drone-relayed data collection.
//
// Option precedence: command-line flag, then the scenario file, then the
// DRONECAST_* environment variables, then the built-in default.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dronecast/analytic.hpp"
#include "dronecast/combin.hpp"
#include "dronecast/commands.hpp"
#include "dronecast/io.hpp"
#include "dronecast/sim.hpp"

namespace {

using namespace dronecast;

template <typename T>
std::optional<T> from_env(const char* name) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    if constexpr (std::is_floating_point_v<T>) {
      return static_cast<T>(std::stod(raw));
    } else {
      return static_cast<T>(std::stoull(raw));
    }
  } catch (const std::exception&) {
    throw io::ValidationError(std::string("environment variable ") + name + " is not a valid number");
  }
}

template <typename T>
T resolve(const std::optional<T>& flag, const std::optional<T>& file, const char* env, T fallback) {
  if (flag) return *flag;
  if (file) return *file;
  if (auto e = from_env<T>(env)) return *e;
  return fallback;
}

struct Output {
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file.open(path, std::ios::binary);
      if (!file) throw io::ValidationError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file.is_open() ? static_cast<std::ostream&>(file) : std::cout; }
  std::ofstream file;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recovery probabilities for drone-relayed broadcast with a data carousel or systematic RLNC"};
  app.require_subcommand(1);

  std::string scenario_path, sweep_path, out_path;
  std::optional<std::uint64_t> trials_flag, seed_flag, row_cap_flag;
  std::optional<double> sigmas_flag;
  unsigned workers = 0;
  double analytic_offset = 0.0;

  auto* cmd_analytic = app.add_subcommand("analytic", "Evaluate the closed-form metrics of a scenario");
  auto* cmd_simulate = app.add_subcommand("simulate", "Estimate the metrics of a scenario by Monte Carlo");
  auto* cmd_validate = app.add_subcommand("validate", "Check analytic values against simulation");
  auto* cmd_sweep = app.add_subcommand("sweep", "Evaluate a parameter grid or a minimum-n_T search");

  for (auto* sub : {cmd_analytic, cmd_simulate, cmd_validate}) {
    sub->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    sub->add_option("--out", out_path, "Output path (default stdout)");
  }
  for (auto* sub : {cmd_simulate, cmd_validate}) {
    sub->add_option("--trials", trials_flag, "Trials per n_T (env DRONECAST_TRIALS, default 50000)");
    sub->add_option("--seed", seed_flag, "RNG seed (env DRONECAST_SEED, default 1)");
    sub->add_option("--workers", workers, "Worker threads, 0 for all cores");
  }
  cmd_validate->add_option("--sigmas", sigmas_flag, "Tolerance in standard errors (env DRONECAST_SIGMAS, default 3)");
  cmd_validate->add_option("--analytic-offset", analytic_offset, "Shift analytic values (harness self-test)")
      ->group("");

  cmd_sweep->add_option("--sweep", sweep_path, "Sweep JSON file")->required();
  cmd_sweep->add_option("--out", out_path, "Output path (default stdout)");
  cmd_sweep->add_option("--row-cap", row_cap_flag, "Maximum grid points (env DRONECAST_ROW_CAP, default 100000)");
  cmd_sweep->add_option("--workers", workers, "Worker threads, 0 for all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : commands::kParseError;
  }

  try {
    if (cmd_sweep->parsed()) {
      const auto file = io::load_sweep(sweep_path);
      const auto cap = resolve<std::uint64_t>(row_cap_flag, std::nullopt, "DRONECAST_ROW_CAP",
                                              commands::kDefaultRowCap);
      const auto rows = commands::sweep(file, static_cast<std::size_t>(cap), workers);
      Output out(out_path);
      io::write_csv(out.stream(), rows, true);
      return commands::kOk;
    }

    const auto file = io::load_scenario(scenario_path);
    if (cmd_analytic->parsed()) {
      const auto rows = commands::analytic(file);
      Output out(out_path);
      io::write_csv(out.stream(), rows);
      return commands::kOk;
    }

    const auto trials = resolve<std::uint64_t>(trials_flag, file.trials, "DRONECAST_TRIALS", commands::kDefaultTrials);
    const auto seed = resolve<std::uint64_t>(seed_flag, file.seed, "DRONECAST_SEED", commands::kDefaultSeed);
    if (trials < 1) throw io::ValidationError("trials must be >= 1");

    if (cmd_simulate->parsed()) {
      const auto rows = commands::simulate(file, trials, seed, workers);
      Output out(out_path);
      io::write_csv(out.stream(), rows);
      return commands::kOk;
    }

    commands::ValidateOptions options;
    options.sigmas = resolve<double>(sigmas_flag, std::nullopt, "DRONECAST_SIGMAS", commands::kDefaultSigmas);
    options.analytic_offset = analytic_offset;
    options.workers = workers;
    const auto report = commands::validate(file, trials, seed, options);
    Output out(out_path);
    out.stream() << report.text();
    return report.all_pass() ? commands::kOk : commands::kCheckFailed;
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return commands::kParseError;
  } catch (const commands::ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return commands::kResourceCap;
  } catch (const io::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return commands::kValidationError;
  } catch (const std::invalid_argument& e) {
    // ScenarioError, AnalyticError, SimError, KernelError, FieldError.
    std::cerr << "validation error: " << e.what() << "\n";
    return commands::kValidationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return commands::kUnexpected;
  }
}
