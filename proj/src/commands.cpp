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

#include "dronecast/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "dronecast/analytic.hpp"
#include "dronecast/sim.hpp"

namespace dronecast::commands {

namespace {

io::ResultRow base_row(const Scenario& s, const Metric& m) {
  io::ResultRow row;
  row.scheme = scheme_name(s.scheme);
  row.q = scheme_field(s.scheme);
  row.connectivity = std::string(to_string(s.connectivity));
  row.k = s.k;
  row.n_T = s.n_T;
  row.metric = std::string(m.name());
  if (m.kind == Metric::Kind::BasePartial) row.mu = m.mu;
  if (m.kind != Metric::Kind::MissionSuccess) row.base_index = m.base + 1;
  return row;
}

void fill_analytic(io::ResultRow& row, const Scenario& s, const Metric& m) {
  const ProbResult r = analytic::evaluate(s, m);
  row.analytic_value = r.value;
  row.analytic_kind = std::string(to_string(r.kind));
}

void sort_rows(std::vector<io::ResultRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const io::ResultRow& a, const io::ResultRow& b) {
    return std::tie(a.n_T, a.metric, a.base_index, a.mu) < std::tie(b.n_T, b.metric, b.base_index, b.mu);
  });
}

// Runs task(i) for i in [0, count) on a small pool; rethrows the first failure.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            task(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::string describe(const io::ResultRow& row) {
  std::ostringstream ss;
  ss << "n_T=" << (row.n_T ? std::to_string(*row.n_T) : "-") << " " << row.metric;
  if (row.base_index) ss << "(B" << *row.base_index;
  if (row.mu) ss << ", mu=" << *row.mu;
  if (row.base_index) ss << ")";
  return ss.str();
}

}  // namespace

std::vector<io::ResultRow> analytic(const io::ScenarioFile& file) {
  std::vector<io::ResultRow> rows;
  const auto metrics = file.expanded_metrics();
  for (unsigned n_T : file.n_T_values()) {
    const Scenario s = file.at(n_T);
    for (const auto& m : metrics) {
      auto& row = rows.emplace_back(base_row(s, m));
      fill_analytic(row, s, m);
    }
  }
  sort_rows(rows);
  return rows;
}

std::vector<io::ResultRow> simulate(const io::ScenarioFile& file, std::uint64_t trials, std::uint64_t seed,
                                    unsigned workers) {
  if (trials < 1) throw io::ValidationError("trials must be >= 1");
  std::vector<io::ResultRow> rows;
  const auto metrics = file.expanded_metrics();
  for (unsigned n_T : file.n_T_values()) {
    const Scenario s = file.at(n_T);
    const auto estimates = sim::estimate_many(s, metrics, trials, seed, workers);
    for (std::size_t i = 0; i < metrics.size(); ++i) {
      auto& row = rows.emplace_back(base_row(s, metrics[i]));
      fill_analytic(row, s, metrics[i]);
      row.sim_value = estimates[i].estimate;
      row.sim_stderr = estimates[i].std_error;
      row.trials = trials;
      row.seed = seed;
    }
  }
  sort_rows(rows);
  return rows;
}

bool ValidationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string ValidationReport::text() const {
  std::ostringstream ss;
  std::size_t failures = 0;
  for (const auto& c : checks) {
    const double a = *c.row.analytic_value;
    const double s = *c.row.sim_value;
    ss << (c.pass ? "PASS " : "FAIL ") << describe(c.row) << (c.bound ? " [bound]" : " [exact]")
       << " analytic=" << io::format_double(a) << " sim=" << io::format_double(s)
       << " se=" << io::format_double(c.std_error);
    if (c.std_error > 0.0) ss << " z=" << io::format_double((s - a) / c.std_error);
    ss << "\n";
    if (!c.pass) ++failures;
  }
  ss << (failures == 0 ? "ALL PASS" : "FAILED") << ": " << checks.size() - failures << "/" << checks.size()
     << " checks passed\n";
  return ss.str();
}

ValidationReport validate(const io::ScenarioFile& file, std::uint64_t trials, std::uint64_t seed,
                          const ValidateOptions& options) {
  if (!(options.sigmas > 0.0)) throw io::ValidationError("sigmas must be positive");
  ValidationReport report;
  for (auto& row : simulate(file, trials, seed, options.workers)) {
    Check c;
    c.bound = row.analytic_kind == "lower_bound";
    const double a = *row.analytic_value + options.analytic_offset;
    row.analytic_value = a;
    const double s = *row.sim_value;
    const double a_clamped = std::clamp(a, 0.0, 1.0);
    const double null_se = std::sqrt(a_clamped * (1.0 - a_clamped) / static_cast<double>(trials));
    c.std_error = std::max(*row.sim_stderr, null_se);
    const double slack = options.sigmas * c.std_error;
    c.pass = c.bound ? s + slack >= a : std::abs(a - s) <= slack;
    c.row = std::move(row);
    report.checks.push_back(std::move(c));
  }
  return report;
}

std::vector<io::ResultRow> sweep(const io::SweepFile& file, std::size_t row_cap, unsigned workers) {
  struct Point {
    Scenario scenario;
    double eps;
    unsigned drones;
    std::optional<Metric> metric;  // nullopt for min_transmissions
  };

  std::vector<Point> points;
  std::size_t expected = 0;
  {
    std::size_t scheme_variants = 0;
    for (const auto& s : file.schemes) scheme_variants += (s.rlnc && !s.q) ? file.q.size() : 1;
    const std::size_t per_scenario =
        file.metric ? file.n_T.size() * (*file.metric == Metric::Kind::BasePartial ? file.mu.size() : 1) : 1;
    expected = scheme_variants * file.drones.size() * file.eps.size() * per_scenario;
  }
  if (expected > row_cap) {
    throw ResourceCapError("sweep grid has " + std::to_string(expected) + " points, above the row cap of " +
                           std::to_string(row_cap));
  }

  points.reserve(expected);
  for (const auto& entry : file.schemes) {
    std::vector<Scheme> variants;
    if (!entry.rlnc) {
      variants.emplace_back(Carousel{});
    } else if (entry.q) {
      variants.emplace_back(SystematicRlnc{*entry.q});
    } else {
      for (unsigned q : file.q) variants.emplace_back(SystematicRlnc{q});
    }
    for (const auto& scheme : variants) {
      for (unsigned drones : file.drones) {
        for (double eps : file.eps) {
          Scenario s;
          s.k = file.k;
          s.n_T = file.k;
          s.scheme = scheme;
          s.connectivity = file.connectivity;
          s.clusters.assign(file.clusters, std::vector<ErasureSpec>(drones, eps));
          try {
            s.validate();
          } catch (const ScenarioError& e) {
            throw io::ValidationError(e.what());
          }
          if (!file.metric) {
            points.push_back({s, eps, drones, std::nullopt});
            continue;
          }
          for (unsigned n_T : file.n_T) {
            s.n_T = n_T;
            switch (*file.metric) {
              case Metric::Kind::MissionSuccess:
                points.push_back({s, eps, drones, Metric::mission_success()});
                break;
              case Metric::Kind::BaseFull:
                points.push_back({s, eps, drones, Metric::base_full(0)});
                break;
              case Metric::Kind::BasePartial:
                for (unsigned mu : file.mu) points.push_back({s, eps, drones, Metric::base_partial(0, mu)});
                break;
            }
          }
        }
      }
    }
  }

  std::vector<io::ResultRow> rows(points.size());
  parallel_for(points.size(), workers, [&](std::size_t i) {
    const Point& p = points[i];
    io::ResultRow row;
    if (p.metric) {
      row = base_row(p.scenario, *p.metric);
      fill_analytic(row, p.scenario, *p.metric);
    } else {
      row = base_row(p.scenario, Metric::mission_success());
      row.metric = "min_transmissions";
      const auto found = analytic::min_transmissions(p.scenario, *file.target, file.n_T_cap);
      row.n_T = found.n_T;
      row.analytic_value = found.value;
      row.analytic_kind = found.n_T ? std::string(to_string(found.kind)) : "n/a";
    }
    row.eps = p.eps;
    row.drones = p.drones;
    rows[i] = std::move(row);
  });
  return rows;
}

}  // namespace dronecast::commands
