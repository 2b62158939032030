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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: dronecast_acceptance [SCENARIO_DIR] [criterion...]

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dronecast/analytic.hpp"
#include "dronecast/combin.hpp"
#include "dronecast/commands.hpp"
#include "dronecast/gfmat.hpp"
#include "dronecast/io.hpp"
#include "dronecast/sim.hpp"
#include "oracle.hpp"

using namespace dronecast;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << what;
      pass = false;
    }
  }
};

Scenario make(unsigned k, unsigned n_T, Scheme scheme, std::vector<std::vector<ErasureSpec>> clusters,
              Connectivity c) {
  Scenario s;
  s.k = k;
  s.n_T = n_T;
  s.scheme = scheme;
  s.clusters = std::move(clusters);
  s.connectivity = c;
  return s;
}

std::vector<std::vector<ErasureSpec>> two_cluster_layout() { return {{0.45, 0.55, 0.65}, {0.3, 0.4}}; }

void oracle_equivalence(Outcome& o) {
  std::size_t cases = 0;
  for (unsigned p : {2u, 3u}) {
    for (unsigned k = 1; k <= 3; ++k) {
      for (unsigned n_T = k; n_T <= 5; ++n_T) {
        for (unsigned n = 0; n <= n_T; ++n) {
          const auto counts = oracle::recovery_counts(k, n, n_T, p);
          for (unsigned mu = 0; mu <= k; ++mu) {
            ++cases;
            const auto expected = oracle::at_least(counts, mu);
            std::ostringstream where;
            where << "q=" << p << " k=" << k << " n_T=" << n_T << " n=" << n << " mu=" << mu;
            o.require(combin::p_sr_partial(mu, k, n, n_T, p) == expected, "p_sr_partial differs at " + where.str());
            if (mu == k) o.require(combin::p_sr_full(k, n, n_T, p) == expected, "p_sr_full differs at " + where.str());
          }
        }
      }
    }
  }
  if (o.pass) o.detail << cases << " (q, k, n_T, n, mu) cases equal as exact rationals";
}

void reduction_identities(Outcome& o) {
  std::size_t exact = 0, carousel = 0;
  double worst = 0.0;
  for (unsigned q : {2u, 4u, 8u}) {
    for (unsigned k = 1; k <= 6; ++k) {
      for (unsigned n_T = k; n_T <= 12; ++n_T) {
        for (unsigned n = 0; n <= n_T; ++n) {
          ++exact;
          o.require(combin::p_sr_partial(k, k, n, n_T, q) == combin::p_sr_full(k, n, n_T, q),
                    "p_sr_partial(mu=k) != p_sr_full");
        }
      }
    }
  }
  for (int step = 0; step <= 20; ++step) {
    const double eps = step / 20.0;
    for (unsigned k = 1; k <= 6; ++k) {
      for (unsigned n_T = k; n_T <= 12; ++n_T) {
        ++carousel;
        const double d = std::abs(analytic::p_dc_partial(eps, k, k, n_T) - analytic::p_dc_full(eps, k, n_T));
        worst = std::max(worst, d);
      }
    }
  }
  o.require(worst <= 1e-14, "p_dc_partial(mu=k) differs from p_dc_full by " + io::format_double(worst));
  if (o.pass) {
    o.detail << exact << " kernel identities exact; " << carousel << " carousel identities, max |diff| "
             << io::format_double(worst);
  }
}

void validation_run(Outcome& o, const std::filesystem::path& dir) {
  std::size_t checks = 0, failures = 0;
  std::ostringstream failed;
  for (const char* conn : {"isolated", "interconnected"}) {
    for (const char* scheme : {"carousel", "rlnc-q2", "rlnc-q8"}) {
      const auto path = dir / (std::string(conn) + "-" + scheme + ".json");
      const auto file = io::load_scenario(path);
      const auto report = commands::validate(file, 50000, 1);
      for (const auto& c : report.checks) {
        ++checks;
        if (!c.pass) {
          ++failures;
          failed << " [" << conn << " " << scheme << " n_T=" << *c.row.n_T << " " << c.row.metric;
          if (c.row.base_index) failed << " B" << *c.row.base_index;
          if (c.row.mu) failed << " mu=" << *c.row.mu;
          failed << " z=" << io::format_double((*c.row.sim_value - *c.row.analytic_value) / c.std_error) << "]";
        }
      }
    }
  }
  o.require(failures == 0, std::to_string(failures) + " of " + std::to_string(checks) + " checks outside 3 sigma:" +
                               failed.str());
  if (o.pass) o.detail << checks << " checks within 3 sigma at 50000 trials, seed 1";
}

void figure_checkpoints(Outcome& o) {
  auto value = [](Scheme scheme, unsigned n_T) {
    return analytic::mission_success(make(20, n_T, scheme, two_cluster_layout(), Connectivity::Interconnected)).value;
  };
  const double dc = value(Carousel{}, 35), q2 = value(SystematicRlnc{2}, 22), q8 = value(SystematicRlnc{8}, 21);
  o.require(std::abs(dc - 0.9) <= 0.03, "carousel n_T=35 gives " + io::format_double(dc));
  o.require(std::abs(q2 - 0.9) <= 0.03, "rlnc q=2 n_T=22 gives " + io::format_double(q2));
  o.require(std::abs(q8 - 0.9) <= 0.03, "rlnc q=8 n_T=21 gives " + io::format_double(q8));
  o.detail << (o.pass ? "" : "; ") << "carousel@35=" << io::format_double(dc) << " rlnc q=2@22=" << io::format_double(q2)
           << " rlnc q=8@21=" << io::format_double(q8);
}

void min_transmission_checkpoint(Outcome& o) {
  auto search = [](Scheme scheme, unsigned drones) {
    auto s = make(30, 30, scheme, {std::vector<ErasureSpec>(drones, 0.4)}, Connectivity::Isolated);
    return analytic::min_transmissions(s, 0.99).n_T.value_or(0);
  };
  const unsigned dc9 = search(Carousel{}, 9), q2_9 = search(SystematicRlnc{2}, 9), q4_9 = search(SystematicRlnc{4}, 9);
  const unsigned dc8 = search(Carousel{}, 8), q2_8 = search(SystematicRlnc{2}, 8);
  o.require(dc9 == 30 && q2_9 == 30 && q4_9 == 30, "L=9 does not give n_T=30 for every scheme");
  o.require(q2_8 < dc8, "L=8: rlnc q=2 is not below the carousel");
  o.detail << (o.pass ? "" : "; ") << "L=9: carousel " << dc9 << ", q=2 " << q2_9 << ", q=4 " << q4_9
           << "; L=8: carousel " << dc8 << ", q=2 " << q2_8;
}

void field_size_crossover(Outcome& o) {
  const double eps = 0.45 * 0.55 * 0.65;
  std::ostringstream values;
  for (unsigned n_T = 21; n_T <= 24; ++n_T) {
    const double q2 = analytic::p_sr_partial_mix(eps, 18, 20, n_T, 2);
    const double q8 = analytic::p_sr_partial_mix(eps, 18, 20, n_T, 8);
    o.require(q2 > q8, "q=2 not above q=8 at n_T=" + std::to_string(n_T));
    values << " " << n_T << ":" << io::format_double(q2 - q8);
  }
  o.detail << (o.pass ? "" : "; ") << "q2 - q8 at n_T" << values.str();
}

void property_suites(Outcome& o) {
  std::mt19937 rng(2024);
  std::size_t count = 0;

  // Probability range and monotonicity in n_T, eps and mu for both schemes.
  const std::vector<double> grid{0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
  for (unsigned k : {1u, 4u, 10u}) {
    for (unsigned n_T = k; n_T <= k + 10; ++n_T) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        for (unsigned q : {2u, 8u}) {
          const double sr = analytic::p_sr_full_mix(grid[i], k, n_T, q);
          const double dc = analytic::p_dc_full(grid[i], k, n_T);
          o.require(sr >= 0 && sr <= 1 && dc >= 0 && dc <= 1, "probability outside [0, 1]");
          if (i > 0) {
            o.require(sr <= analytic::p_sr_full_mix(grid[i - 1], k, n_T, q) + 1e-12, "p_sr_full_mix rises with eps");
            o.require(dc <= analytic::p_dc_full(grid[i - 1], k, n_T) + 1e-12, "p_dc_full rises with eps");
          }
          if (n_T > k) {
            o.require(sr >= analytic::p_sr_full_mix(grid[i], k, n_T - 1, q) - 1e-12, "p_sr_full_mix falls with n_T");
            o.require(dc >= analytic::p_dc_full(grid[i], k, n_T - 1) - 1e-12, "p_dc_full falls with n_T");
          }
          for (unsigned mu = 1; mu <= k; ++mu) {
            o.require(analytic::p_sr_partial_mix(grid[i], mu, k, n_T, q) <=
                          analytic::p_sr_partial_mix(grid[i], mu - 1, k, n_T, q) + 1e-12,
                      "p_sr_partial_mix rises with mu");
          }
          ++count;
        }
      }
    }
  }

  // Kernel monotonicity in mu, n and q.
  for (unsigned k = 1; k <= 5; ++k) {
    for (unsigned n_T = k; n_T <= 8; ++n_T) {
      for (unsigned n = 0; n <= n_T; ++n) {
        for (unsigned mu = 0; mu <= k; ++mu) {
          for (unsigned q : {2u, 3u, 4u}) {
            const auto v = combin::p_sr_partial(mu, k, n, n_T, q);
            if (mu > 0) o.require(v <= combin::p_sr_partial(mu - 1, k, n, n_T, q), "kernel rises with mu");
            if (n > 0) o.require(v >= combin::p_sr_partial(mu, k, n - 1, n_T, q), "kernel falls with n");
            ++count;
          }
          o.require(combin::p_sr_full(k, n, n_T, 2) <= combin::p_sr_full(k, n, n_T, 3) &&
                        combin::p_sr_full(k, n, n_T, 3) <= combin::p_sr_full(k, n, n_T, 4),
                    "p_sr_full falls with q");
        }
      }
    }
  }

  // Interconnected is never below isolated.
  std::uniform_real_distribution<double> eps(0.0, 0.95);
  std::uniform_int_distribution<unsigned> small(1, 3), kdist(1, 12), extra(0, 12);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<std::vector<ErasureSpec>> clusters(small(rng));
    for (auto& c : clusters) {
      for (unsigned d = small(rng); d > 0; --d) c.push_back(eps(rng));
    }
    const unsigned k = kdist(rng), n_T = k + extra(rng);
    for (Scheme scheme : {Scheme{Carousel{}}, Scheme{SystematicRlnc{2}}, Scheme{SystematicRlnc{8}}}) {
      const double iso = analytic::mission_success(make(k, n_T, scheme, clusters, Connectivity::Isolated)).value;
      const double inter = analytic::mission_success(make(k, n_T, scheme, clusters, Connectivity::Interconnected)).value;
      o.require(inter >= iso - 1e-12, "interconnected below isolated");
      ++count;
    }
  }

  // RREF and rank invariants, duplicate-row invariance.
  for (unsigned q : {2u, 3u, 4u, 16u, 256u}) {
    const auto field = gf::Field::of_order(q);
    std::uniform_int_distribution<unsigned> elem(0, q - 1), dim(1, 8);
    std::bernoulli_distribution zero(0.3);
    for (int iter = 0; iter < 200; ++iter) {
      const std::size_t rows = dim(rng), cols = dim(rng);
      gf::Matrix m(field, rows, cols);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) m.set(r, c, zero(rng) ? 0 : static_cast<gf::Element>(elem(rng)));
      }
      const auto r = gf::rref(m);
      const auto rk = gf::rank(m);
      o.require(gf::rref(r) == r, "rref is not idempotent");
      o.require(gf::rank(r) == rk && rk <= std::min(rows, cols), "rank invariant broken");
      auto dup = m;
      const auto row = m.row(rows - 1);
      dup.append_row(std::vector<gf::Element>(row.begin(), row.end()));
      o.require(gf::rank(dup) == rk && gf::recoverable_sources(dup) == gf::recoverable_sources(m),
                "duplicate row changed the result");
      ++count;
    }
  }

  // Simulator determinism under varying worker counts.
  const std::vector<Metric> metrics{Metric::mission_success(), Metric::base_full(0), Metric::base_partial(1, 18)};
  for (Scheme scheme : {Scheme{Carousel{}}, Scheme{SystematicRlnc{2}}, Scheme{SystematicRlnc{8}}}) {
    const auto s = make(20, 24, scheme, two_cluster_layout(), Connectivity::Isolated);
    const auto one = sim::estimate_many(s, metrics, 30000, 5, 1);
    for (unsigned workers : {2u, 4u, 7u}) {
      const auto many = sim::estimate_many(s, metrics, 30000, 5, workers);
      for (std::size_t i = 0; i < metrics.size(); ++i) {
        o.require(many[i].successes == one[i].successes, "estimate depends on the worker count");
      }
      ++count;
    }
  }
  if (o.pass) o.detail << count << " property cases";
}

void bound_gap(Outcome& o) {
  std::ostringstream summary;
  double mse[2] = {0.0, 0.0};
  const double eps_values[2] = {0.1, 0.01};
  for (int e = 0; e < 2; ++e) {
    unsigned points = 0;
    for (unsigned n_T = 20; n_T <= 30; ++n_T) {
      const auto s = make(20, n_T, SystematicRlnc{2}, std::vector<std::vector<ErasureSpec>>(6, {eps_values[e]}),
                          Connectivity::Isolated);
      const auto bound = analytic::mission_success(s);
      const auto est = sim::estimate(s, Metric::mission_success(), 1000000, 1);
      const double gap = est.estimate - bound.value;
      o.require(bound.kind == ResultKind::LowerBound, "isolated rlnc is not reported as a bound");
      o.require(gap >= -3.0 * est.std_error,
                "gap " + io::format_double(gap) + " below -3 sigma at eps=" + io::format_double(eps_values[e]) +
                    " n_T=" + std::to_string(n_T));
      mse[e] += gap * gap;
      ++points;
    }
    mse[e] /= points;
  }
  o.require(mse[1] < mse[0], "gap does not shrink as eps drops");
  o.detail << (o.pass ? "" : "; ") << "mean squared gap over n_T=20..30: eps=0.1 " << io::format_double(mse[0])
           << ", eps=0.01 " << io::format_double(mse[1]);
}

}  // namespace

int main(int argc, char** argv) {
  std::filesystem::path dir = DRONECAST_SCENARIO_DIR;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (!arg.empty() && std::isdigit(static_cast<unsigned char>(arg[0]))) {
      only.insert(std::stoi(arg));
    } else {
      dir = arg;
    }
  }

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"reduction identities", reduction_identities},
      {"validation run", [&](Outcome& o) { validation_run(o, dir); }},
      {"interconnected checkpoints", figure_checkpoints},
      {"minimum transmissions checkpoint", min_transmission_checkpoint},
      {"field size crossover", field_size_crossover},
      {"property suites", property_suites},
      {"bound gap", bound_gap},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << criteria[i].first << ": " << o.detail.str() << " ("
              << std::round(secs * 10) / 10 << "s)" << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
