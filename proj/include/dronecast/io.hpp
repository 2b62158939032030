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
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dronecast/scenario.hpp"

// Scenario and sweep documents (JSON) and result tables (CSV). The formats
// are described in docs/file-formats.md.

namespace dronecast::io {

/// Malformed document: bad JSON syntax, wrong value type, unknown or
/// missing key. The message names the offending line or key.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed document describing an impossible scenario or grid.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested metric. base is zero-based; nullopt means every base.
struct MetricRequest {
  Metric::Kind kind = Metric::Kind::MissionSuccess;
  std::optional<std::size_t> base;
  std::vector<unsigned> mu;

  bool operator==(const MetricRequest&) const = default;
};

struct ScenarioFile {
  /// scenario.n_T holds the first transmission count of the range.
  Scenario scenario;
  unsigned n_T_first = 0;
  unsigned n_T_last = 0;
  bool n_T_is_range = false;
  /// Empty means the default set: mission success plus full recovery per base.
  std::vector<MetricRequest> metrics;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;

  std::vector<unsigned> n_T_values() const;
  std::vector<Metric> expanded_metrics() const;
  Scenario at(unsigned n_T) const;

  bool operator==(const ScenarioFile&) const = default;
};

ScenarioFile parse_scenario(std::string_view text);
ScenarioFile load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const ScenarioFile& file);

/// One scheme entry of a sweep; an RLNC entry without q takes grid.q.
struct SweepScheme {
  bool rlnc = false;
  std::optional<unsigned> q;

  bool operator==(const SweepScheme&) const = default;
};

struct SweepFile {
  unsigned k = 1;
  unsigned clusters = 1;
  Connectivity connectivity = Connectivity::Isolated;
  std::vector<SweepScheme> schemes;

  std::vector<double> eps;
  std::vector<unsigned> drones;
  std::vector<unsigned> q;
  std::vector<unsigned> n_T;
  std::vector<unsigned> mu;

  /// Exactly one of metric / target is set.
  std::optional<Metric::Kind> metric;
  std::optional<double> target;
  unsigned n_T_cap = 1000;

  bool operator==(const SweepFile&) const = default;
};

SweepFile parse_sweep(std::string_view text);
SweepFile load_sweep(const std::filesystem::path& path);

/// One line of every output table. Empty optionals print as empty cells.
struct ResultRow {
  std::string scheme;
  std::optional<unsigned> q;
  std::string connectivity;
  unsigned k = 0;
  std::optional<unsigned> n_T;
  std::string metric;
  std::optional<unsigned> mu;
  /// One-based, empty for mission metrics.
  std::optional<std::size_t> base_index;
  std::optional<double> analytic_value;
  /// "exact", "lower_bound" or "n/a".
  std::string analytic_kind = "n/a";
  std::optional<double> sim_value;
  std::optional<double> sim_stderr;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  // Sweep tables only.
  std::optional<double> eps;
  std::optional<unsigned> drones;
};

/// Header names in column order.
const std::vector<std::string>& result_columns();
const std::vector<std::string>& sweep_columns();

/// RFC 4180 quoting: fields containing a comma, quote or line break are
/// quoted with embedded quotes doubled. Lines end with CRLF.
std::string csv_field(std::string_view value);
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool sweep = false);

/// Shortest text that reads back to the same double.
std::string format_double(double v);

}  // namespace dronecast::io
