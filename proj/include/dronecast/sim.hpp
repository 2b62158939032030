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
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dronecast/gfmat.hpp"
#include "dronecast/scenario.hpp"

namespace dronecast::sim {

class SimError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Rng = std::mt19937_64;

/// Trials are split into consecutive blocks of this many; block b draws from
/// its own engine seeded by stream_for_block(seed, b). Which worker runs a
/// block never affects what it draws.
inline constexpr std::uint64_t kTrialsPerStream = 4096;

/// mt19937_64 seeded through std::seed_seq with the 32-bit halves of seed
/// and block index: {seed_lo, seed_hi, block_lo, block_hi}.
Rng stream_for_block(std::uint64_t seed, std::uint64_t block);

/// One broadcast realization.
struct TrialOutcome {
  /// Zero-based transmission indices collected by each base's cluster.
  /// Only filled when a detailed trial is requested.
  std::vector<std::vector<unsigned>> per_base_received;
  /// RLNC coefficient rows for transmissions k..n_T-1, row-major with k
  /// columns (the first k transmissions are the unit vectors). Empty for
  /// the carousel or when not detailed.
  std::vector<gf::Element> coded_coefficients;
  /// Source packets each base recovers from its own cluster.
  std::vector<unsigned> per_base_decoded;
  std::vector<char> per_base_full;
  /// Source packets recoverable from the union of all clusters.
  unsigned union_decoded = 0;
  bool mission_success = false;
};

/// Runs trials of one scenario. Holds only read-only state; every mutable
/// buffer lives in a Workspace, one per worker.
class Simulator {
 public:
  explicit Simulator(const Scenario& scenario);

  struct Workspace {
    std::vector<char> received;  // bases x n_T
    std::vector<char> union_received;
    std::vector<gf::Element> coefficients;
    std::vector<gf::Element> scratch;
    std::vector<unsigned> missing;
  };

  void run(Rng& rng, Workspace& ws, TrialOutcome& out, bool detailed = false) const;

  const Scenario& scenario() const noexcept { return scenario_; }

 private:
  struct Decode {
    unsigned decoded = 0;
    bool full = false;
  };

  void draw_coefficients(Rng& rng, std::span<gf::Element> out) const;
  Decode decode_carousel(std::span<const char> received) const;
  Decode decode_rlnc(std::span<const char> received, Workspace& ws) const;

  Scenario scenario_;
  std::vector<std::vector<double>> erasures_;
  std::optional<gf::Field> field_;
  unsigned field_bits_ = 0;  // log2(q) when q is a power of two, else 0
};

TrialOutcome run_trial(const Scenario& scenario, Rng& rng);

struct SimEstimate {
  std::string metric;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

/// Reads a metric off a trial outcome.
bool metric_hit(const Metric& metric, const TrialOutcome& outcome);

/// workers == 0 uses the hardware concurrency. The result depends only on
/// (scenario, metrics, trials, seed).
std::vector<SimEstimate> estimate_many(const Scenario& scenario, std::span<const Metric> metrics,
                                       std::uint64_t trials, std::uint64_t seed, unsigned workers = 0);

SimEstimate estimate(const Scenario& scenario, const Metric& metric, std::uint64_t trials, std::uint64_t seed,
                     unsigned workers = 0);

}  // namespace dronecast::sim
