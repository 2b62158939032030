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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dronecast {

class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Nakagami-m link between the source and one drone. All quantities linear.
struct NakagamiLink {
  double m_shape = 1.0;
  double mean_snr = 1.0;
  double w_m = 1.0;

  bool operator==(const NakagamiLink&) const = default;
};

/// Either a direct erasure probability or a link to derive it from.
using ErasureSpec = std::variant<double, NakagamiLink>;

struct Carousel {
  bool operator==(const Carousel&) const = default;
};

struct SystematicRlnc {
  unsigned q = 2;
  bool operator==(const SystematicRlnc&) const = default;
};

using Scheme = std::variant<Carousel, SystematicRlnc>;

enum class Connectivity { Isolated, Interconnected };

std::string_view to_string(Connectivity c);
std::string scheme_name(const Scheme& s);
/// Field order for RLNC, nullopt for the carousel.
std::optional<unsigned> scheme_field(const Scheme& s);

/// A broadcast of k source packets in n_T transmissions to clusters of drones,
/// one cluster per base.
struct Scenario {
  unsigned k = 1;
  unsigned n_T = 1;
  Scheme scheme = Carousel{};
  std::vector<std::vector<ErasureSpec>> clusters;
  Connectivity connectivity = Connectivity::Isolated;

  /// Throws ScenarioError naming the first violated invariant.
  void validate() const;

  std::size_t base_count() const noexcept { return clusters.size(); }
  std::size_t drone_count() const noexcept;

  /// Per-drone erasure probabilities with Nakagami links resolved.
  std::vector<std::vector<double>> resolved_erasures() const;

  bool operator==(const Scenario&) const = default;
};

/// What is being measured. Base indices are zero-based.
struct Metric {
  enum class Kind { MissionSuccess, BaseFull, BasePartial };

  Kind kind = Kind::MissionSuccess;
  std::size_t base = 0;
  unsigned mu = 0;

  static Metric mission_success() { return {Kind::MissionSuccess, 0, 0}; }
  static Metric base_full(std::size_t base) { return {Kind::BaseFull, base, 0}; }
  static Metric base_partial(std::size_t base, unsigned mu) { return {Kind::BasePartial, base, mu}; }

  /// "mission_success", "base_full" or "base_partial".
  std::string_view name() const noexcept;
  /// Human readable label including base (one-based) and mu.
  std::string label() const;

  bool operator==(const Metric&) const = default;
};

enum class ResultKind { Exact, LowerBound, Simulated };

std::string_view to_string(ResultKind kind);

struct ProbResult {
  std::string metric;
  double value = 0.0;
  ResultKind kind = ResultKind::Exact;
  std::optional<double> std_error;
};

}  // namespace dronecast
