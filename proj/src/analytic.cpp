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

#include "dronecast/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dronecast/combin.hpp"

namespace dronecast::analytic {

namespace {

void check_probability(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw AnalyticError("erasure probability must lie in [0, 1]");
}

void check_lengths(unsigned mu, unsigned k, unsigned n_T) {
  if (k == 0) throw AnalyticError("k must be at least 1");
  if (n_T < k) throw AnalyticError("n_T must be >= k");
  if (mu > k) throw AnalyticError("mu must not exceed k");
}

double binom_double(unsigned a, unsigned b) {
  if (b > a) return 0.0;
  b = std::min(b, a - b);
  double out = 1.0;
  for (unsigned i = 1; i <= b; ++i) out = out * (a - b + i) / i;
  return out;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double base_erasure(const std::vector<std::vector<double>>& erasures, std::size_t base) {
  return equivalent_erasure(erasures.at(base));
}

double all_drones_erasure(const std::vector<std::vector<double>>& erasures) {
  double eps = 1.0;
  for (const auto& cluster : erasures) eps *= equivalent_erasure(cluster);
  return eps;
}

double full_probability(const Scheme& scheme, double eps, unsigned k, unsigned n_T) {
  if (const auto* rlnc = std::get_if<SystematicRlnc>(&scheme)) return p_sr_full_mix(eps, k, n_T, rlnc->q);
  return p_dc_full(eps, k, n_T);
}

double partial_probability(const Scheme& scheme, double eps, unsigned mu, unsigned k, unsigned n_T) {
  if (const auto* rlnc = std::get_if<SystematicRlnc>(&scheme)) return p_sr_partial_mix(eps, mu, k, n_T, rlnc->q);
  return p_dc_partial(eps, mu, k, n_T);
}

}  // namespace

double nakagami_erasure(const NakagamiLink& link) {
  if (!(link.m_shape >= 0.5)) throw AnalyticError("Nakagami shape factor must be >= 0.5");
  if (!(link.mean_snr > 0.0)) throw AnalyticError("mean SNR must be positive");
  if (!(link.w_m > 0.0)) throw AnalyticError("SNR threshold w_m must be positive");
  const double value = std::pow(link.m_shape / link.mean_snr, link.m_shape) * link.w_m / std::tgamma(link.m_shape);
  return std::min(1.0, value);
}

double equivalent_erasure(std::span<const double> drone_erasures) {
  if (drone_erasures.empty()) throw AnalyticError("a cluster needs at least one drone");
  double eps = 1.0;
  for (double e : drone_erasures) {
    check_probability(e);
    eps *= e;
  }
  return eps;
}

double p_dc_full(double eps, unsigned k, unsigned n_T) {
  check_probability(eps);
  check_lengths(0, k, n_T);
  const unsigned lambda = n_T / k;
  const unsigned rho = n_T % k;
  return clamp01(std::pow(1.0 - std::pow(eps, lambda + 1), rho) * std::pow(1.0 - std::pow(eps, lambda), k - rho));
}

double p_dc_partial(double eps, unsigned mu, unsigned k, unsigned n_T) {
  check_probability(eps);
  check_lengths(mu, k, n_T);
  const unsigned lambda = n_T / k;
  const unsigned rho = n_T % k;
  // Y1 of the first rho sources (lambda+1 copies each), Y2 of the other k-rho (lambda copies).
  const double got_long = 1.0 - std::pow(eps, lambda + 1);
  const double got_short = 1.0 - std::pow(eps, lambda);
  double sum = 0.0;
  for (unsigned y = mu; y <= k; ++y) {
    const unsigned y_low = y + rho > k ? y + rho - k : 0;
    const unsigned y_hi = std::min(y, rho);
    for (unsigned y1 = y_low; y1 <= y_hi; ++y1) {
      const unsigned y2 = y - y1;
      sum += binom_double(rho, y1) * binom_double(k - rho, y2) * std::pow(got_long, y1) * std::pow(got_short, y2) *
             std::pow(eps, static_cast<double>(lambda) * (k - y) + (rho - y1));
    }
  }
  return clamp01(sum);
}

std::vector<double> reception_weights(double eps, unsigned n_T) {
  check_probability(eps);
  std::vector<double> w(n_T + 1, 0.0);
  if (eps == 0.0) {
    w[n_T] = 1.0;
    return w;
  }
  if (eps == 1.0) {
    w[0] = 1.0;
    return w;
  }
  // Anchor at the mode and walk outward with the ratio recurrence, so no
  // term underflows before its neighbours do.
  const double p = 1.0 - eps;
  const auto mode = std::min<unsigned>(n_T, static_cast<unsigned>(std::floor((n_T + 1.0) * p)));
  w[mode] = std::exp(std::lgamma(n_T + 1.0) - std::lgamma(mode + 1.0) - std::lgamma(n_T - mode + 1.0) +
                     mode * std::log(p) + (n_T - mode) * std::log(eps));
  const double odds = p / eps;
  for (unsigned n = mode; n < n_T; ++n) w[n + 1] = w[n] * (n_T - n) / (n + 1.0) * odds;
  for (unsigned n = mode; n > 0; --n) w[n - 1] = w[n] * n / (n_T - n + 1.0) / odds;
  return w;
}

double p_sr_full_mix(double eps, unsigned k, unsigned n_T, unsigned q) {
  return p_sr_partial_mix(eps, k, k, n_T, q);
}

double p_sr_partial_mix(double eps, unsigned mu, unsigned k, unsigned n_T, unsigned q) {
  check_lengths(mu, k, n_T);
  if (mu == 0) return 1.0;
  const auto weights = reception_weights(eps, n_T);
  auto& cache = combin::KernelCache::global();
  double sum = 0.0;
  for (unsigned n = mu; n <= n_T; ++n) {
    if (weights[n] == 0.0) continue;
    sum += weights[n] * cache.get_double({k, n_T, n, mu, q});
  }
  return clamp01(sum);
}

ProbResult mission_isolated(const Scenario& scenario) {
  scenario.validate();
  if (scenario.connectivity != Connectivity::Isolated) {
    throw AnalyticError("mission_isolated requires isolated connectivity");
  }
  const auto erasures = scenario.resolved_erasures();
  double product = 1.0;
  for (std::size_t i = 0; i < erasures.size(); ++i) {
    product *= full_probability(scenario.scheme, base_erasure(erasures, i), scenario.k, scenario.n_T);
  }
  // Bases decoding the same coded packets are positively correlated, so for
  // RLNC the product only bounds the joint success from below.
  const bool bound = std::holds_alternative<SystematicRlnc>(scenario.scheme) && erasures.size() > 1;
  return {"mission_success", product, bound ? ResultKind::LowerBound : ResultKind::Exact, std::nullopt};
}

ProbResult mission_interconnected(const Scenario& scenario) {
  scenario.validate();
  if (scenario.connectivity != Connectivity::Interconnected) {
    throw AnalyticError("mission_interconnected requires interconnected connectivity");
  }
  const double eps = all_drones_erasure(scenario.resolved_erasures());
  return {"mission_success", full_probability(scenario.scheme, eps, scenario.k, scenario.n_T), ResultKind::Exact,
          std::nullopt};
}

ProbResult mission_success(const Scenario& scenario) {
  return scenario.connectivity == Connectivity::Isolated ? mission_isolated(scenario)
                                                         : mission_interconnected(scenario);
}

ProbResult evaluate(const Scenario& scenario, const Metric& metric) {
  if (metric.kind == Metric::Kind::MissionSuccess) return mission_success(scenario);

  scenario.validate();
  if (metric.base >= scenario.base_count()) {
    throw AnalyticError("base index " + std::to_string(metric.base + 1) + " out of range");
  }
  const double eps = base_erasure(scenario.resolved_erasures(), metric.base);
  if (metric.kind == Metric::Kind::BaseFull) {
    return {metric.label(), full_probability(scenario.scheme, eps, scenario.k, scenario.n_T), ResultKind::Exact,
            std::nullopt};
  }
  if (metric.mu > scenario.k) throw AnalyticError("mu must not exceed k");
  return {metric.label(), partial_probability(scenario.scheme, eps, metric.mu, scenario.k, scenario.n_T),
          ResultKind::Exact, std::nullopt};
}

MinTransmissions min_transmissions(const Scenario& scenario_template, double target, unsigned n_T_cap) {
  if (!(target > 0.0 && target < 1.0)) throw AnalyticError("target probability must lie in (0, 1)");
  Scenario s = scenario_template;
  s.n_T = s.k;
  s.validate();
  if (n_T_cap < s.k) throw AnalyticError("n_T cap is below k");

  MinTransmissions out;
  for (unsigned n_T = s.k; n_T <= n_T_cap; ++n_T) {
    s.n_T = n_T;
    const ProbResult r = mission_success(s);
    out.value = r.value;
    out.kind = r.kind;
    if (r.value >= target) {
      out.n_T = n_T;
      return out;
    }
  }
  return out;
}

}  // namespace dronecast::analytic
