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

#include "dronecast/scenario.hpp"

#include "dronecast/analytic.hpp"
#include "dronecast/gfmat.hpp"

namespace dronecast {

std::string_view to_string(Connectivity c) {
  return c == Connectivity::Isolated ? "isolated" : "interconnected";
}

std::string_view to_string(ResultKind kind) {
  switch (kind) {
    case ResultKind::Exact:
      return "exact";
    case ResultKind::LowerBound:
      return "lower_bound";
    case ResultKind::Simulated:
      return "simulated";
  }
  return "exact";
}

std::string scheme_name(const Scheme& s) { return std::holds_alternative<Carousel>(s) ? "carousel" : "rlnc"; }

std::optional<unsigned> scheme_field(const Scheme& s) {
  if (const auto* rlnc = std::get_if<SystematicRlnc>(&s)) return rlnc->q;
  return std::nullopt;
}

std::size_t Scenario::drone_count() const noexcept {
  std::size_t total = 0;
  for (const auto& c : clusters) total += c.size();
  return total;
}

void Scenario::validate() const {
  if (k < 1) throw ScenarioError("k must be >= 1");
  if (n_T < k) throw ScenarioError("n_T must be >= k");
  if (const auto* rlnc = std::get_if<SystematicRlnc>(&scheme)) {
    if (!gf::prime_power(rlnc->q)) throw ScenarioError("scheme.q must be a prime power");
    if (rlnc->q > gf::Field::kDefaultMaxOrder) throw ScenarioError("scheme.q exceeds the supported field size");
  }
  if (clusters.empty()) throw ScenarioError("at least one cluster is required");
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (clusters[i].empty()) throw ScenarioError("clusters[" + std::to_string(i) + "] is empty");
    for (std::size_t j = 0; j < clusters[i].size(); ++j) {
      const std::string where = "clusters[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      if (const auto* eps = std::get_if<double>(&clusters[i][j])) {
        if (!(*eps >= 0.0 && *eps <= 1.0)) throw ScenarioError(where + ": erasure probability must lie in [0, 1]");
      } else {
        try {
          analytic::nakagami_erasure(std::get<NakagamiLink>(clusters[i][j]));
        } catch (const analytic::AnalyticError& e) {
          throw ScenarioError(where + ": " + e.what());
        }
      }
    }
  }
}

std::vector<std::vector<double>> Scenario::resolved_erasures() const {
  std::vector<std::vector<double>> out;
  out.reserve(clusters.size());
  for (const auto& cluster : clusters) {
    auto& resolved = out.emplace_back();
    resolved.reserve(cluster.size());
    for (const auto& spec : cluster) {
      if (const auto* eps = std::get_if<double>(&spec)) {
        resolved.push_back(*eps);
      } else {
        resolved.push_back(analytic::nakagami_erasure(std::get<NakagamiLink>(spec)));
      }
    }
  }
  return out;
}

std::string_view Metric::name() const noexcept {
  switch (kind) {
    case Kind::MissionSuccess:
      return "mission_success";
    case Kind::BaseFull:
      return "base_full";
    case Kind::BasePartial:
      return "base_partial";
  }
  return "mission_success";
}

std::string Metric::label() const {
  switch (kind) {
    case Kind::MissionSuccess:
      return "mission_success";
    case Kind::BaseFull:
      return "base_full(" + std::to_string(base + 1) + ")";
    case Kind::BasePartial:
      return "base_partial(" + std::to_string(base + 1) + ", mu=" + std::to_string(mu) + ")";
  }
  return {};
}

}  // namespace dronecast
