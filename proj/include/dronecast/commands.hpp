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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dronecast/io.hpp"

namespace dronecast::commands {

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kParseError = 2,
  kValidationError = 3,
  kCheckFailed = 4,
  kResourceCap = 5,
};

inline constexpr std::uint64_t kDefaultTrials = 50000;
inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr double kDefaultSigmas = 3.0;
inline constexpr std::size_t kDefaultRowCap = 100000;

class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rows sorted by n_T, metric name, base index, then mu.
std::vector<io::ResultRow> analytic(const io::ScenarioFile& file);

/// As analytic(), with the simulation columns filled in as well.
std::vector<io::ResultRow> simulate(const io::ScenarioFile& file, std::uint64_t trials, std::uint64_t seed,
                                    unsigned workers = 0);

struct ValidateOptions {
  double sigmas = kDefaultSigmas;
  /// Added to every analytic value before comparing; lets tests prove the
  /// harness can fail.
  double analytic_offset = 0.0;
  unsigned workers = 0;
};

struct Check {
  io::ResultRow row;
  bool bound = false;
  /// Standard error used for the comparison: the larger of the simulated
  /// one and sqrt(a(1-a)/trials) at the analytic value a.
  double std_error = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<Check> checks;
  bool all_pass() const;
  /// One PASS/FAIL line per check plus a summary.
  std::string text() const;
};

/// Exact metrics need |analytic - sim| <= sigmas * se; lower-bound metrics
/// need sim + sigmas * se >= bound.
ValidationReport validate(const io::ScenarioFile& file, std::uint64_t trials, std::uint64_t seed,
                          const ValidateOptions& options = {});

/// Evaluates every grid point, in grid order. Throws ResourceCapError when
/// the grid has more than row_cap points.
std::vector<io::ResultRow> sweep(const io::SweepFile& file, std::size_t row_cap = kDefaultRowCap,
                                 unsigned workers = 0);

}  // namespace dronecast::commands
