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

#include "dronecast/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace dronecast::io {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
  throw ParseError("key '" + key + "': " + what);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      bad_key(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where = {}) {
  if (!obj.contains(key)) bad_key(where.empty() ? key : where + "." + key, "missing required key");
  return obj.at(key);
}

std::uint64_t as_uint(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  bad_key(key, "expected a nonnegative integer");
}

unsigned as_small_uint(const json& v, const std::string& key) {
  const std::uint64_t x = as_uint(v, key);
  if (x > std::numeric_limits<unsigned>::max()) bad_key(key, "value too large");
  return static_cast<unsigned>(x);
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) bad_key(key, "expected a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) bad_key(key, "expected a string");
  return v.get<std::string>();
}

std::vector<unsigned> as_uint_list(const json& v, const std::string& key) {
  if (v.is_number()) return {as_small_uint(v, key)};
  if (!v.is_array()) bad_key(key, "expected an integer or an array of integers");
  std::vector<unsigned> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_small_uint(v[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

Connectivity as_connectivity(const json& v, const std::string& key) {
  const std::string s = as_string(v, key);
  if (s == "isolated") return Connectivity::Isolated;
  if (s == "interconnected") return Connectivity::Interconnected;
  bad_key(key, "expected \"isolated\" or \"interconnected\"");
}

Metric::Kind as_metric_kind(const std::string& s, const std::string& key) {
  if (s == "mission_success") return Metric::Kind::MissionSuccess;
  if (s == "base_full") return Metric::Kind::BaseFull;
  if (s == "base_partial") return Metric::Kind::BasePartial;
  bad_key(key, "unknown metric \"" + s + "\"");
}

Scheme parse_scheme(const json& v) {
  if (!v.is_object()) bad_key("scheme", "expected an object");
  only_keys(v, "scheme", {"type", "q"});
  const std::string type = as_string(require(v, "type", "scheme"), "scheme.type");
  if (type == "carousel") {
    if (v.contains("q")) bad_key("scheme.q", "not allowed for the carousel");
    return Carousel{};
  }
  if (type == "rlnc") return SystematicRlnc{as_small_uint(require(v, "q", "scheme"), "scheme.q")};
  bad_key("scheme.type", "expected \"carousel\" or \"rlnc\"");
}

ErasureSpec parse_erasure(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_object()) bad_key(key, "expected an erasure probability or a {m, mean_snr, w_m} object");
  only_keys(v, key, {"m", "mean_snr", "w_m"});
  return NakagamiLink{as_number(require(v, "m", key), key + ".m"),
                      as_number(require(v, "mean_snr", key), key + ".mean_snr"),
                      as_number(require(v, "w_m", key), key + ".w_m")};
}

json erasure_to_json(const ErasureSpec& spec) {
  if (const auto* eps = std::get_if<double>(&spec)) return *eps;
  const auto& link = std::get<NakagamiLink>(spec);
  return json{{"m", link.m_shape}, {"mean_snr", link.mean_snr}, {"w_m", link.w_m}};
}

void rethrow_as_validation(const auto& fn) {
  try {
    fn();
  } catch (const ScenarioError& e) {
    throw ValidationError(e.what());
  }
}

std::vector<double> parse_eps_grid(const json& v) {
  const std::string key = "grid.eps";
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], key + "[" + std::to_string(i) + "]"));
  } else if (v.is_object()) {
    only_keys(v, key, {"start", "stop", "step"});
    const double start = as_number(require(v, "start", key), key + ".start");
    const double stop = as_number(require(v, "stop", key), key + ".stop");
    const double step = as_number(require(v, "step", key), key + ".step");
    if (!(step > 0.0)) throw ValidationError("grid.eps.step must be positive");
    if (stop < start) throw ValidationError("grid.eps.stop must not be below start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      // Snap to 12 decimals so 0.05 + 2*0.05 prints as 0.15.
      out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
  } else {
    bad_key(key, "expected a number, an array or a {start, stop, step} range");
  }
  return out;
}

}  // namespace

std::vector<unsigned> ScenarioFile::n_T_values() const {
  std::vector<unsigned> out;
  for (unsigned n = n_T_first; n <= n_T_last; ++n) out.push_back(n);
  return out;
}

std::vector<Metric> ScenarioFile::expanded_metrics() const {
  std::vector<Metric> out;
  const std::size_t bases = scenario.base_count();
  if (metrics.empty()) {
    out.push_back(Metric::mission_success());
    for (std::size_t b = 0; b < bases; ++b) out.push_back(Metric::base_full(b));
    return out;
  }
  for (const auto& req : metrics) {
    if (req.kind == Metric::Kind::MissionSuccess) {
      out.push_back(Metric::mission_success());
      continue;
    }
    std::vector<std::size_t> which;
    if (req.base) {
      which.push_back(*req.base);
    } else {
      for (std::size_t b = 0; b < bases; ++b) which.push_back(b);
    }
    for (std::size_t b : which) {
      if (req.kind == Metric::Kind::BaseFull) {
        out.push_back(Metric::base_full(b));
      } else {
        for (unsigned mu : req.mu) out.push_back(Metric::base_partial(b, mu));
      }
    }
  }
  return out;
}

Scenario ScenarioFile::at(unsigned n_T) const {
  Scenario s = scenario;
  s.n_T = n_T;
  return s;
}

ScenarioFile parse_scenario(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("scenario document must be a JSON object");
  only_keys(doc, "", {"k", "n_T", "n_T_range", "scheme", "clusters", "connectivity", "metrics", "trials", "seed"});

  ScenarioFile file;
  Scenario& s = file.scenario;
  s.k = as_small_uint(require(doc, "k"), "k");

  if (doc.contains("n_T") == doc.contains("n_T_range")) {
    bad_key("n_T", "exactly one of n_T or n_T_range is required");
  }
  if (doc.contains("n_T")) {
    file.n_T_first = file.n_T_last = as_small_uint(doc.at("n_T"), "n_T");
  } else {
    const json& r = doc.at("n_T_range");
    if (!r.is_array() || r.size() != 2) bad_key("n_T_range", "expected [first, last]");
    file.n_T_first = as_small_uint(r[0], "n_T_range[0]");
    file.n_T_last = as_small_uint(r[1], "n_T_range[1]");
    file.n_T_is_range = true;
  }
  s.n_T = file.n_T_first;

  s.scheme = parse_scheme(require(doc, "scheme"));

  const json& clusters = require(doc, "clusters");
  if (!clusters.is_array()) bad_key("clusters", "expected an array of arrays");
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const std::string key = "clusters[" + std::to_string(i) + "]";
    if (!clusters[i].is_array()) bad_key(key, "expected an array");
    auto& cluster = s.clusters.emplace_back();
    for (std::size_t j = 0; j < clusters[i].size(); ++j) {
      cluster.push_back(parse_erasure(clusters[i][j], key + "[" + std::to_string(j) + "]"));
    }
  }

  if (doc.contains("connectivity")) s.connectivity = as_connectivity(doc.at("connectivity"), "connectivity");

  if (doc.contains("metrics")) {
    const json& ms = doc.at("metrics");
    if (!ms.is_array()) bad_key("metrics", "expected an array");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const std::string key = "metrics[" + std::to_string(i) + "]";
      MetricRequest req;
      if (ms[i].is_string()) {
        req.kind = as_metric_kind(ms[i].get<std::string>(), key);
      } else if (ms[i].is_object()) {
        only_keys(ms[i], key, {"name", "base", "mu"});
        req.kind = as_metric_kind(as_string(require(ms[i], "name", key), key + ".name"), key + ".name");
        if (ms[i].contains("base")) {
          const std::uint64_t base = as_uint(ms[i].at("base"), key + ".base");
          if (base == 0) bad_key(key + ".base", "bases are numbered from 1");
          req.base = static_cast<std::size_t>(base - 1);
        }
        if (ms[i].contains("mu")) req.mu = as_uint_list(ms[i].at("mu"), key + ".mu");
      } else {
        bad_key(key, "expected a metric name or object");
      }
      if (req.kind == Metric::Kind::BasePartial && req.mu.empty()) bad_key(key + ".mu", "base_partial needs mu");
      if (req.kind != Metric::Kind::BasePartial && !req.mu.empty()) bad_key(key + ".mu", "only base_partial takes mu");
      if (req.kind == Metric::Kind::MissionSuccess && req.base) bad_key(key + ".base", "mission_success has no base");
      file.metrics.push_back(std::move(req));
    }
  }

  if (doc.contains("trials")) file.trials = as_uint(doc.at("trials"), "trials");
  if (doc.contains("seed")) file.seed = as_uint(doc.at("seed"), "seed");

  // Semantic checks.
  if (file.n_T_last < file.n_T_first) throw ValidationError("n_T_range must be ascending");
  rethrow_as_validation([&] { s.validate(); });
  if (file.trials && *file.trials == 0) throw ValidationError("trials must be >= 1");
  for (std::size_t i = 0; i < file.metrics.size(); ++i) {
    const auto& req = file.metrics[i];
    if (req.base && *req.base >= s.base_count()) {
      throw ValidationError("metrics[" + std::to_string(i) + "].base: no base " + std::to_string(*req.base + 1));
    }
    for (unsigned mu : req.mu) {
      if (mu > s.k) throw ValidationError("metrics[" + std::to_string(i) + "].mu: mu must be <= k");
    }
  }
  return file;
}

ScenarioFile load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

std::string serialize_scenario(const ScenarioFile& file) {
  const Scenario& s = file.scenario;
  json doc;
  doc["k"] = s.k;
  if (file.n_T_is_range) {
    doc["n_T_range"] = {file.n_T_first, file.n_T_last};
  } else {
    doc["n_T"] = file.n_T_first;
  }
  if (const auto q = scheme_field(s.scheme)) {
    doc["scheme"] = {{"type", "rlnc"}, {"q", *q}};
  } else {
    doc["scheme"] = {{"type", "carousel"}};
  }
  json clusters = json::array();
  for (const auto& c : s.clusters) {
    json cj = json::array();
    for (const auto& e : c) cj.push_back(erasure_to_json(e));
    clusters.push_back(std::move(cj));
  }
  doc["clusters"] = std::move(clusters);
  doc["connectivity"] = std::string(to_string(s.connectivity));
  if (!file.metrics.empty()) {
    json ms = json::array();
    for (const auto& req : file.metrics) {
      json m;
      m["name"] = std::string(Metric{req.kind, 0, 0}.name());
      if (req.base) m["base"] = *req.base + 1;
      if (!req.mu.empty()) m["mu"] = req.mu;
      ms.push_back(std::move(m));
    }
    doc["metrics"] = std::move(ms);
  }
  if (file.trials) doc["trials"] = *file.trials;
  if (file.seed) doc["seed"] = *file.seed;
  return doc.dump(2) + "\n";
}

SweepFile parse_sweep(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("sweep document must be a JSON object");
  only_keys(doc, "", {"k", "clusters", "connectivity", "schemes", "grid", "metric", "min_transmissions"});

  SweepFile file;
  file.k = as_small_uint(require(doc, "k"), "k");
  if (doc.contains("clusters")) file.clusters = as_small_uint(doc.at("clusters"), "clusters");
  if (doc.contains("connectivity")) file.connectivity = as_connectivity(doc.at("connectivity"), "connectivity");

  const json& schemes = require(doc, "schemes");
  if (!schemes.is_array()) bad_key("schemes", "expected an array");
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    const std::string key = "schemes[" + std::to_string(i) + "]";
    const json& sj = schemes[i];
    SweepScheme entry;
    std::string type;
    if (sj.is_string()) {
      type = sj.get<std::string>();
    } else if (sj.is_object()) {
      only_keys(sj, key, {"type", "q"});
      type = as_string(require(sj, "type", key), key + ".type");
      if (sj.contains("q")) entry.q = as_small_uint(sj.at("q"), key + ".q");
    } else {
      bad_key(key, "expected a scheme name or object");
    }
    if (type == "rlnc") {
      entry.rlnc = true;
    } else if (type != "carousel") {
      bad_key(key + ".type", "expected \"carousel\" or \"rlnc\"");
    } else if (entry.q) {
      bad_key(key + ".q", "not allowed for the carousel");
    }
    file.schemes.push_back(entry);
  }

  const json& grid = require(doc, "grid");
  if (!grid.is_object()) bad_key("grid", "expected an object");
  only_keys(grid, "grid", {"eps", "drones", "q", "n_T", "mu"});
  file.eps = parse_eps_grid(require(grid, "eps", "grid"));
  file.drones = as_uint_list(require(grid, "drones", "grid"), "grid.drones");
  if (grid.contains("q")) file.q = as_uint_list(grid.at("q"), "grid.q");
  if (grid.contains("n_T")) file.n_T = as_uint_list(grid.at("n_T"), "grid.n_T");
  if (grid.contains("mu")) file.mu = as_uint_list(grid.at("mu"), "grid.mu");

  if (doc.contains("metric") == doc.contains("min_transmissions")) {
    bad_key("metric", "exactly one of metric or min_transmissions is required");
  }
  if (doc.contains("metric")) {
    file.metric = as_metric_kind(as_string(doc.at("metric"), "metric"), "metric");
  } else {
    const json& mt = doc.at("min_transmissions");
    if (!mt.is_object()) bad_key("min_transmissions", "expected an object");
    only_keys(mt, "min_transmissions", {"target", "n_T_cap"});
    file.target = as_number(require(mt, "target", "min_transmissions"), "min_transmissions.target");
    if (mt.contains("n_T_cap")) file.n_T_cap = as_small_uint(mt.at("n_T_cap"), "min_transmissions.n_T_cap");
  }

  // Semantic checks.
  if (file.k < 1) throw ValidationError("k must be >= 1");
  if (file.clusters < 1) throw ValidationError("clusters must be >= 1");
  if (file.schemes.empty()) throw ValidationError("empty grid: schemes is empty");
  if (file.eps.empty()) throw ValidationError("empty grid: grid.eps is empty");
  if (file.drones.empty()) throw ValidationError("empty grid: grid.drones is empty");
  for (double e : file.eps) {
    if (!(e >= 0.0 && e <= 1.0)) throw ValidationError("grid.eps values must lie in [0, 1]");
  }
  for (unsigned d : file.drones) {
    if (d < 1) throw ValidationError("grid.drones values must be >= 1");
  }
  const bool needs_q = std::any_of(file.schemes.begin(), file.schemes.end(),
                                   [](const SweepScheme& s) { return s.rlnc && !s.q; });
  if (needs_q && file.q.empty()) throw ValidationError("empty grid: an rlnc scheme without q needs grid.q");
  if (file.metric) {
    if (file.n_T.empty()) throw ValidationError("empty grid: metric sweeps need grid.n_T");
    for (unsigned n : file.n_T) {
      if (n < file.k) throw ValidationError("n_T must be >= k");
    }
    if (*file.metric == Metric::Kind::BasePartial) {
      if (file.mu.empty()) throw ValidationError("empty grid: base_partial sweeps need grid.mu");
      for (unsigned mu : file.mu) {
        if (mu > file.k) throw ValidationError("grid.mu values must be <= k");
      }
    }
  } else {
    if (!(*file.target > 0.0 && *file.target < 1.0)) {
      throw ValidationError("min_transmissions.target must lie in (0, 1)");
    }
    if (file.n_T_cap < file.k) throw ValidationError("min_transmissions.n_T_cap must be >= k");
  }
  return file;
}

SweepFile load_sweep(const std::filesystem::path& path) { return parse_sweep(read_file(path)); }

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols{"scheme",         "q",          "connectivity", "k",
                                             "n_T",            "metric",     "mu",           "base_index",
                                             "analytic_value", "analytic_kind", "sim_value",  "sim_stderr",
                                             "trials",         "seed"};
  return cols;
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = [] {
    auto c = result_columns();
    c.emplace_back("eps");
    c.emplace_back("drones");
    return c;
  }();
  return cols;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool sweep) {
  const auto& header = sweep ? sweep_columns() : result_columns();
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_field(header[i]);
  out << "\r\n";

  auto opt = [](const auto& v) -> std::string {
    if (!v) return {};
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(*v)>>) {
      return format_double(*v);
    } else {
      return std::to_string(*v);
    }
  };
  for (const auto& r : rows) {
    std::vector<std::string> cells{r.scheme,
                                   opt(r.q),
                                   r.connectivity,
                                   std::to_string(r.k),
                                   opt(r.n_T),
                                   r.metric,
                                   opt(r.mu),
                                   opt(r.base_index),
                                   opt(r.analytic_value),
                                   r.analytic_kind,
                                   opt(r.sim_value),
                                   opt(r.sim_stderr),
                                   opt(r.trials),
                                   opt(r.seed)};
    if (sweep) {
      cells.push_back(opt(r.eps));
      cells.push_back(opt(r.drones));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
    out << "\r\n";
  }
}

}  // namespace dronecast::io
