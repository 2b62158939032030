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

#include <optional>
#include <span>
#include <stdexcept>

#include "dronecast/scenario.hpp"

// Closed-form recovery and mission-success probabilities.
//
// Carousel: transmission n carries source packet ((n-1) mod k) + 1, so with
// n_T = lambda*k + rho the first rho sources go out lambda+1 times and the
// rest lambda times. RLNC: the k sources go out first, then n_T - k uniform
// random combinations over GF(q).

namespace dronecast::analytic {

class AnalyticError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// High-SNR approximation (m / snr)^m * w_m / Gamma(m), clamped to 1.
double nakagami_erasure(const NakagamiLink& link);

/// Probability that no drone of a group receives a given packet.
double equivalent_erasure(std::span<const double> drone_erasures);

/// Carousel: probability a base with erasure eps collects all k sources.
double p_dc_full(double eps, unsigned k, unsigned n_T);

/// Carousel: probability a base collects at least mu of the k sources.
double p_dc_partial(double eps, unsigned mu, unsigned k, unsigned n_T);

/// Systematic RLNC: probability a base with erasure eps decodes all k
/// sources, mixing the exact rank kernel over a binomial reception count.
double p_sr_full_mix(double eps, unsigned k, unsigned n_T, unsigned q);

/// Systematic RLNC: probability a base decodes at least mu sources. The
/// reception-count mixture covers every n >= mu, including n < k.
double p_sr_partial_mix(double eps, unsigned mu, unsigned k, unsigned n_T, unsigned q);

/// P(Binomial(n_T, 1 - eps) == n) for n = 0..n_T.
std::vector<double> reception_weights(double eps, unsigned n_T);

/// Isolated bases: exact product for the carousel; for RLNC the product of
/// per-base probabilities, a lower bound when more than one base shares the
/// coded packets.
ProbResult mission_isolated(const Scenario& scenario);

/// Interconnected bases behave as a single base fed by every drone.
ProbResult mission_interconnected(const Scenario& scenario);

/// Mission success for the scenario's connectivity.
ProbResult mission_success(const Scenario& scenario);

/// Any supported metric; per-base metrics ignore connectivity.
ProbResult evaluate(const Scenario& scenario, const Metric& metric);

struct MinTransmissions {
  /// Smallest n_T reaching the target, nullopt when the cap was hit first.
  std::optional<unsigned> n_T;
  /// Metric value at n_T (or at the cap when infeasible).
  double value = 0.0;
  ResultKind kind = ResultKind::Exact;
};

/// Linear scan of n_T from k upward; the template's n_T is ignored.
MinTransmissions min_transmissions(const Scenario& scenario_template, double target, unsigned n_T_cap = 10000);

}  // namespace dronecast::analytic
