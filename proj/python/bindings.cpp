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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dronecast/analytic.hpp"
#include "dronecast/combin.hpp"
#include "dronecast/commands.hpp"
#include "dronecast/gfmat.hpp"
#include "dronecast/io.hpp"
#include "dronecast/sim.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace dronecast;

namespace {

py::object to_int(const combin::BigInt& v) { return py::int_(py::str(v.get_str())); }

py::object to_fraction(const combin::Rational& r) {
  static py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(to_int(r.get_num()), to_int(r.get_den()));
}

gf::Matrix to_matrix(const gf::Field& field, const std::vector<std::vector<unsigned>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<gf::Element> entries;
  for (const auto& r : rows) {
    if (r.size() != cols) throw gf::MatrixError("rows must all have the same length");
    for (unsigned v : r) {
      if (v >= field.order()) throw gf::MatrixError("matrix entry " + std::to_string(v) + " is not a field element");
      entries.push_back(static_cast<gf::Element>(v));
    }
  }
  return gf::Matrix(field, rows.size(), cols, std::move(entries));
}

std::vector<std::vector<unsigned>> from_matrix(const gf::Matrix& m) {
  std::vector<std::vector<unsigned>> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (gf::Element e : m.row(r)) out[r].push_back(e);
  }
  return out;
}

ErasureSpec to_erasure(const py::handle& h) {
  if (py::isinstance<py::dict>(h)) {
    const auto d = h.cast<py::dict>();
    return NakagamiLink{d["m"].cast<double>(), d["mean_snr"].cast<double>(), d["w_m"].cast<double>()};
  }
  return h.cast<double>();
}

Scenario make_scenario(unsigned k, unsigned n_T, const py::list& clusters, const std::string& scheme,
                       std::optional<unsigned> q, const std::string& connectivity) {
  Scenario s;
  s.k = k;
  s.n_T = n_T;
  if (scheme == "carousel") {
    s.scheme = Carousel{};
  } else if (scheme == "rlnc") {
    if (!q) throw ScenarioError("rlnc needs q");
    s.scheme = SystematicRlnc{*q};
  } else {
    throw ScenarioError("scheme must be 'carousel' or 'rlnc'");
  }
  if (connectivity == "isolated") {
    s.connectivity = Connectivity::Isolated;
  } else if (connectivity == "interconnected") {
    s.connectivity = Connectivity::Interconnected;
  } else {
    throw ScenarioError("connectivity must be 'isolated' or 'interconnected'");
  }
  for (const auto& c : clusters) {
    auto& cluster = s.clusters.emplace_back();
    for (const auto& e : c.cast<py::list>()) cluster.push_back(to_erasure(e));
  }
  s.validate();
  return s;
}

std::string csv(const std::vector<io::ResultRow>& rows, bool sweep) {
  std::ostringstream ss;
  io::write_csv(ss, rows, sweep);
  return ss.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Recovery probabilities for drone-relayed broadcast with a data carousel or systematic RLNC";

  py::register_exception<io::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<io::ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::class_<gf::Field>(m, "Field", "GF(p^m) with table arithmetic; elements are ints in [0, q)")
      .def(py::init<unsigned, unsigned, std::optional<std::vector<unsigned>>, unsigned>(), "p"_a, "m"_a,
           "reduction_polynomial"_a = py::none(), "max_order"_a = gf::Field::kDefaultMaxOrder)
      .def_static("of_order", &gf::Field::of_order, "q"_a)
      .def_property_readonly("order", &gf::Field::order)
      .def_property_readonly("characteristic", &gf::Field::characteristic)
      .def_property_readonly("degree", &gf::Field::degree)
      .def_property_readonly("reduction_polynomial", &gf::Field::reduction_polynomial)
      .def("add", &gf::Field::add)
      .def("sub", &gf::Field::sub)
      .def("mul", &gf::Field::mul)
      .def("inv", &gf::Field::inv)
      .def("div", &gf::Field::div)
      .def("pow", &gf::Field::pow)
      .def("__repr__", [](const gf::Field& f) { return "Field(q=" + std::to_string(f.order()) + ")"; });

  m.def("rank", [](const gf::Field& f, const std::vector<std::vector<unsigned>>& rows) {
    return gf::rank(to_matrix(f, rows));
  }, "field"_a, "rows"_a);
  m.def("rref", [](const gf::Field& f, const std::vector<std::vector<unsigned>>& rows) {
    return from_matrix(gf::rref(to_matrix(f, rows)));
  }, "field"_a, "rows"_a);
  m.def("recoverable_sources", [](const gf::Field& f, const std::vector<std::vector<unsigned>>& rows) {
    return gf::recoverable_sources(to_matrix(f, rows));
  }, "field"_a, "rows"_a);

  m.def("binom", [](long a, long b) { return to_int(combin::binom(a, b)); }, "a"_a, "b"_a);
  m.def("gauss_binom", [](long a, long b, unsigned q) { return to_int(combin::gauss_binom(a, b, q)); },
        "a"_a, "b"_a, "q"_a);
  m.def("p_sr_full", [](unsigned k, unsigned n, unsigned n_T, unsigned q) {
    return to_fraction(combin::p_sr_full(k, n, n_T, q));
  }, "k"_a, "n"_a, "n_T"_a, "q"_a, "Exact full-rank probability as a fractions.Fraction");
  m.def("p_sr_partial", [](unsigned mu, unsigned k, unsigned n, unsigned n_T, unsigned q) {
    return to_fraction(combin::p_sr_partial(mu, k, n, n_T, q));
  }, "mu"_a, "k"_a, "n"_a, "n_T"_a, "q"_a, "Exact probability of recovering at least mu sources");

  m.def("nakagami_erasure", [](double m_shape, double mean_snr, double w_m) {
    return analytic::nakagami_erasure({m_shape, mean_snr, w_m});
  }, "m"_a, "mean_snr"_a, "w_m"_a);
  m.def("equivalent_erasure", [](const std::vector<double>& eps) { return analytic::equivalent_erasure(eps); });
  m.def("p_dc_full", &analytic::p_dc_full, "eps"_a, "k"_a, "n_T"_a);
  m.def("p_dc_partial", &analytic::p_dc_partial, "eps"_a, "mu"_a, "k"_a, "n_T"_a);
  m.def("p_sr_full_mix", &analytic::p_sr_full_mix, "eps"_a, "k"_a, "n_T"_a, "q"_a);
  m.def("p_sr_partial_mix", &analytic::p_sr_partial_mix, "eps"_a, "mu"_a, "k"_a, "n_T"_a, "q"_a);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init(&make_scenario), "k"_a, "n_T"_a, "clusters"_a, "scheme"_a = "carousel", "q"_a = py::none(),
           "connectivity"_a = "isolated")
      .def_readonly("k", &Scenario::k)
      .def_readonly("n_T", &Scenario::n_T)
      .def_property_readonly("scheme", [](const Scenario& s) { return scheme_name(s.scheme); })
      .def_property_readonly("q", [](const Scenario& s) { return scheme_field(s.scheme); })
      .def_property_readonly("connectivity", [](const Scenario& s) { return std::string(to_string(s.connectivity)); })
      .def_property_readonly("erasures", &Scenario::resolved_erasures)
      .def("with_n_T", [](const Scenario& s, unsigned n_T) {
        Scenario out = s;
        out.n_T = n_T;
        out.validate();
        return out;
      });

  py::class_<Metric>(m, "Metric")
      .def_static("mission_success", &Metric::mission_success)
      .def_static("base_full", &Metric::base_full, "base"_a)
      .def_static("base_partial", &Metric::base_partial, "base"_a, "mu"_a)
      .def_property_readonly("name", [](const Metric& x) { return std::string(x.name()); })
      .def_readonly("base", &Metric::base)
      .def_readonly("mu", &Metric::mu)
      .def("__repr__", &Metric::label);

  py::class_<ProbResult>(m, "ProbResult")
      .def_readonly("metric", &ProbResult::metric)
      .def_readonly("value", &ProbResult::value)
      .def_property_readonly("kind", [](const ProbResult& r) { return std::string(to_string(r.kind)); })
      .def("__repr__", [](const ProbResult& r) {
        return "ProbResult(" + r.metric + ", " + io::format_double(r.value) + ", " + std::string(to_string(r.kind)) +
               ")";
      });

  m.def("mission_isolated", &analytic::mission_isolated, "scenario"_a);
  m.def("mission_interconnected", &analytic::mission_interconnected, "scenario"_a);
  m.def("mission_success", &analytic::mission_success, "scenario"_a);
  m.def("evaluate", &analytic::evaluate, "scenario"_a, "metric"_a);
  m.def("min_transmissions", [](const Scenario& s, double target, unsigned cap) {
    const auto r = analytic::min_transmissions(s, target, cap);
    return py::make_tuple(r.n_T, r.value, std::string(to_string(r.kind)));
  }, "scenario"_a, "target"_a, "n_T_cap"_a = 10000u, "Returns (n_T or None, value, kind)");

  py::class_<sim::SimEstimate>(m, "SimEstimate")
      .def_readonly("metric", &sim::SimEstimate::metric)
      .def_readonly("trials", &sim::SimEstimate::trials)
      .def_readonly("successes", &sim::SimEstimate::successes)
      .def_readonly("estimate", &sim::SimEstimate::estimate)
      .def_readonly("std_error", &sim::SimEstimate::std_error)
      .def_readonly("seed", &sim::SimEstimate::seed);

  m.def("estimate", [](const Scenario& s, const Metric& metric, std::uint64_t trials, std::uint64_t seed,
                       unsigned workers) {
    py::gil_scoped_release release;
    return sim::estimate(s, metric, trials, seed, workers);
  }, "scenario"_a, "metric"_a, "trials"_a, "seed"_a = 1, "workers"_a = 0);

  m.def("analytic_csv", [](const std::string& scenario_json) {
    return csv(commands::analytic(io::parse_scenario(scenario_json)), false);
  }, "scenario_json"_a, "Analytic result table for a scenario document");
  m.def("simulate_csv", [](const std::string& scenario_json, std::uint64_t trials, std::uint64_t seed) {
    const auto file = io::parse_scenario(scenario_json);
    py::gil_scoped_release release;
    return csv(commands::simulate(file, trials, seed), false);
  }, "scenario_json"_a, "trials"_a = commands::kDefaultTrials, "seed"_a = commands::kDefaultSeed);
  m.def("sweep_csv", [](const std::string& sweep_json, std::size_t row_cap) {
    return csv(commands::sweep(io::parse_sweep(sweep_json), row_cap), true);
  }, "sweep_json"_a, "row_cap"_a = commands::kDefaultRowCap);
}
