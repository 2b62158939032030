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

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "dronecast/analytic.hpp"
#include "dronecast/gfmat.hpp"
#include "dronecast/sim.hpp"

using namespace dronecast;
using namespace dronecast::sim;

namespace {

Scenario make(unsigned k, unsigned n_T, Scheme scheme, std::vector<std::vector<ErasureSpec>> clusters,
              Connectivity c = Connectivity::Isolated) {
  Scenario s;
  s.k = k;
  s.n_T = n_T;
  s.scheme = scheme;
  s.clusters = std::move(clusters);
  s.connectivity = c;
  return s;
}

std::vector<std::vector<ErasureSpec>> two_cluster_layout() { return {{0.45, 0.55, 0.65}, {0.3, 0.4}}; }

bool within(double sim, double se, double exact, double sigmas = 3.0) { return std::abs(sim - exact) <= sigmas * se; }

// Full received matrix: unit rows for systematic packets, coefficient rows for coded ones.
gf::Matrix received_matrix(const gf::Field& f, unsigned k, const std::vector<unsigned>& received,
                           const std::vector<gf::Element>& coefficients) {
  gf::Matrix m(f, 0, k);
  for (unsigned n : received) {
    std::vector<gf::Element> row(k, 0);
    if (n < k) {
      row[n] = 1;
    } else {
      std::copy_n(coefficients.begin() + std::size_t{n - k} * k, k, row.begin());
    }
    m.append_row(row);
  }
  return m;
}

}  // namespace

TEST_CASE("perfect and dead links") {
  Rng rng(3);
  for (Scheme scheme : {Scheme{Carousel{}}, Scheme{SystematicRlnc{4}}}) {
    const auto perfect = run_trial(make(5, 8, scheme, {{0.0}, {0.0, 0.0}}), rng);
    CHECK(perfect.mission_success);
    CHECK(perfect.per_base_decoded == std::vector<unsigned>{5, 5});
    CHECK(perfect.union_decoded == 5);

    const auto dead = run_trial(make(5, 8, scheme, {{1.0}, {1.0, 1.0}}), rng);
    CHECK_FALSE(dead.mission_success);
    CHECK(dead.per_base_decoded == std::vector<unsigned>{0, 0});
    CHECK(dead.union_decoded == 0);
  }
  const auto one = estimate(make(4, 4, Carousel{}, {{0.0}}), Metric::mission_success(), 1, 9);
  CHECK(one.estimate == 1.0);
  CHECK(one.std_error == 0.0);
  CHECK(one.trials == 1);
}

TEST_CASE("full recovery rate for a single drone at eps 0.5") {
  const auto s = make(2, 3, SystematicRlnc{2}, {{0.5}});
  const auto e = estimate(s, Metric::base_full(0), 1000000, 1);
  CHECK(within(e.estimate, e.std_error, 0.375));
  const auto partial = estimate(s, Metric::base_partial(0, 1), 1000000, 2);
  CHECK(within(partial.estimate, partial.std_error, analytic::p_sr_partial_mix(0.5, 1, 2, 3, 2)));
}

TEST_CASE("isolated carousel mission success at n_T = 35 agrees with the closed form") {
  const auto s = make(20, 35, Carousel{}, two_cluster_layout());
  const auto e = estimate(s, Metric::mission_success(), 50000, 1);
  CHECK(within(e.estimate, e.std_error, analytic::mission_success(s).value));
}

TEST_CASE("gf(2) beats gf(8) for partial recovery at n_T = 22") {
  const auto q2 = estimate(make(20, 22, SystematicRlnc{2}, two_cluster_layout()), Metric::base_partial(0, 18), 50000, 1);
  const auto q8 = estimate(make(20, 22, SystematicRlnc{8}, two_cluster_layout()), Metric::base_partial(0, 18), 50000, 1);
  CHECK(q2.estimate > q8.estimate);
}

TEST_CASE("estimates do not depend on the worker count") {
  const std::vector<Metric> metrics{Metric::mission_success(), Metric::base_full(0), Metric::base_partial(1, 15)};
  for (Scheme scheme : {Scheme{Carousel{}}, Scheme{SystematicRlnc{2}}, Scheme{SystematicRlnc{5}}}) {
    const auto s = make(20, 26, scheme, two_cluster_layout(), Connectivity::Interconnected);
    const auto one = estimate_many(s, metrics, 20000, 77, 1);
    for (unsigned workers : {2u, 3u, 8u}) {
      const auto many = estimate_many(s, metrics, 20000, 77, workers);
      for (std::size_t i = 0; i < metrics.size(); ++i) {
        CHECK(many[i].successes == one[i].successes);
        CHECK(many[i].estimate == one[i].estimate);
        CHECK(many[i].std_error == one[i].std_error);
      }
    }
    const auto other_seed = estimate_many(s, metrics, 20000, 78, 1);
    CHECK(other_seed[0].successes != one[0].successes);
  }
}

TEST_CASE("trial invariants") {
  for (Scheme scheme : {Scheme{Carousel{}}, Scheme{SystematicRlnc{2}}, Scheme{SystematicRlnc{3}},
                        Scheme{SystematicRlnc{16}}}) {
    const auto s = make(6, 11, scheme, {{0.5, 0.6}, {0.7}, {0.4}}, Connectivity::Interconnected);
    const Simulator simulator(s);
    Simulator::Workspace ws;
    TrialOutcome out;
    Rng rng = stream_for_block(5, 0);
    for (int t = 0; t < 3000; ++t) {
      simulator.run(rng, ws, out, true);
      std::set<unsigned> union_rx;
      for (std::size_t b = 0; b < out.per_base_decoded.size(); ++b) {
        REQUIRE(out.union_decoded >= out.per_base_decoded[b]);
        REQUIRE((out.per_base_full[b] != 0) == (out.per_base_decoded[b] == s.k));
        union_rx.insert(out.per_base_received[b].begin(), out.per_base_received[b].end());
      }
      REQUIRE(out.mission_success == (out.union_decoded == s.k));

      if (std::holds_alternative<Carousel>(scheme)) {
        // Only the set of received indices matters, so duplicates never count twice.
        for (std::size_t b = 0; b < out.per_base_decoded.size(); ++b) {
          std::set<unsigned> idx;
          for (unsigned n : out.per_base_received[b]) idx.insert(n % s.k);
          REQUIRE(out.per_base_decoded[b] == idx.size());
        }
      } else {
        // The restricted elimination must agree with eliminating the whole received matrix.
        const auto field = gf::Field::of_order(std::get<SystematicRlnc>(scheme).q);
        for (std::size_t b = 0; b < out.per_base_decoded.size(); ++b) {
          const auto m = received_matrix(field, s.k, out.per_base_received[b], out.coded_coefficients);
          REQUIRE(out.per_base_decoded[b] == gf::recoverable_sources(m));
        }
        const auto joint = received_matrix(field, s.k, {union_rx.begin(), union_rx.end()}, out.coded_coefficients);
        REQUIRE(out.union_decoded == gf::recoverable_sources(joint));
        REQUIRE(out.mission_success == (gf::rank(joint) == s.k));
      }
    }
  }
}

TEST_CASE("coefficients are uniform over the field, zero included") {
  for (unsigned q : {2u, 3u, 4u, 7u, 256u}) {
    const auto s = make(8, 40, SystematicRlnc{q}, {{0.0}});
    const Simulator simulator(s);
    Simulator::Workspace ws;
    TrialOutcome out;
    Rng rng = stream_for_block(1, 0);
    std::vector<std::uint64_t> counts(q, 0);
    std::uint64_t total = 0;
    for (int t = 0; t < 2000; ++t) {
      simulator.run(rng, ws, out, true);
      for (auto c : out.coded_coefficients) {
        REQUIRE(c < q);
        ++counts[c];
        ++total;
      }
    }
    const double expected = static_cast<double>(total) / q;
    double chi2 = 0.0;
    for (auto c : counts) chi2 += (c - expected) * (c - expected) / expected;
    CAPTURE(q);
    // 99.9% chi-square quantile is below dof + 5*sqrt(2*dof) + 10 for these dof.
    CHECK(chi2 < (q - 1) + 5.0 * std::sqrt(2.0 * (q - 1)) + 10.0);
    CHECK(counts[0] > 0);
  }
}

TEST_CASE("estimate errors") {
  const auto s = make(3, 4, Carousel{}, {{0.1}});
  CHECK_THROWS_AS(estimate(s, Metric::mission_success(), 0, 1), SimError);
  CHECK_THROWS_AS(estimate(s, Metric::base_full(1), 10, 1), SimError);
  CHECK_THROWS_AS(estimate(s, Metric::base_partial(0, 4), 10, 1), SimError);
}
