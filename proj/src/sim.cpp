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

#include "dronecast/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace dronecast::sim {

namespace {

// 53 random mantissa bits, uniform on [0, 1).
double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Rng stream_for_block(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return Rng(seq);
}

Simulator::Simulator(const Scenario& scenario) : scenario_(scenario) {
  scenario_.validate();
  erasures_ = scenario_.resolved_erasures();
  if (const auto q = scheme_field(scenario_.scheme)) {
    field_ = gf::Field::of_order(*q);
    if ((*q & (*q - 1)) == 0) {
      while ((1u << field_bits_) < *q) ++field_bits_;
    }
  }
}

void Simulator::draw_coefficients(Rng& rng, std::span<gf::Element> out) const {
  const unsigned q = field_->order();
  if (field_bits_ > 0) {
    // Power-of-two fields: peel log2(q) bits at a time off each 64-bit draw.
    const unsigned per_word = 64 / field_bits_;
    const std::uint64_t mask = q - 1;
    std::size_t i = 0;
    while (i < out.size()) {
      std::uint64_t word = rng();
      for (unsigned j = 0; j < per_word && i < out.size(); ++j, ++i) {
        out[i] = static_cast<gf::Element>(word & mask);
        word >>= field_bits_;
      }
    }
    return;
  }
  // Rejection sampling keeps odd field orders exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % q;
  for (auto& e : out) {
    std::uint64_t x;
    do {
      x = rng();
    } while (x >= limit);
    e = static_cast<gf::Element>(x % q);
  }
}

Simulator::Decode Simulator::decode_carousel(std::span<const char> received) const {
  const unsigned k = scenario_.k;
  unsigned distinct = 0;
  for (unsigned s = 0; s < k; ++s) {
    for (unsigned n = s; n < scenario_.n_T; n += k) {
      if (received[n]) {
        ++distinct;
        break;
      }
    }
  }
  return {distinct, distinct == k};
}

// The received unit vectors already pin down their sources, so only the
// coded rows restricted to the missing source columns need reducing:
// rank = h + rank(restricted) and e_b for a missing b lies in the row space
// exactly when its restriction lies in the span of the restricted rows.
Simulator::Decode Simulator::decode_rlnc(std::span<const char> received, Workspace& ws) const {
  const unsigned k = scenario_.k;
  ws.missing.clear();
  for (unsigned s = 0; s < k; ++s) {
    if (!received[s]) ws.missing.push_back(s);
  }
  const unsigned have = k - static_cast<unsigned>(ws.missing.size());
  if (ws.missing.empty()) return {k, true};

  const std::size_t width = ws.missing.size();
  ws.scratch.clear();
  std::size_t rows = 0;
  for (unsigned n = k; n < scenario_.n_T; ++n) {
    if (!received[n]) continue;
    const gf::Element* row = ws.coefficients.data() + std::size_t{n - k} * k;
    for (unsigned col : ws.missing) ws.scratch.push_back(row[col]);
    ++rows;
  }
  if (rows == 0) return {have, false};
  const auto red = gf::reduce_in_place(*field_, ws.scratch, rows, width);
  return {have + static_cast<unsigned>(red.unit_rows), red.rank == width};
}

void Simulator::run(Rng& rng, Workspace& ws, TrialOutcome& out, bool detailed) const {
  const unsigned n_T = scenario_.n_T;
  const unsigned k = scenario_.k;
  const std::size_t bases = erasures_.size();

  ws.received.assign(bases * n_T, 0);
  ws.union_received.assign(n_T, 0);
  for (std::size_t i = 0; i < bases; ++i) {
    char* base_rx = ws.received.data() + i * n_T;
    for (double eps : erasures_[i]) {
      for (unsigned n = 0; n < n_T; ++n) {
        if (uniform01(rng) >= eps) base_rx[n] = 1;
      }
    }
    for (unsigned n = 0; n < n_T; ++n) ws.union_received[n] |= base_rx[n];
  }

  if (field_) {
    ws.coefficients.resize(std::size_t{n_T - k} * k);
    draw_coefficients(rng, ws.coefficients);
  }

  auto decode = [&](std::span<const char> rx) { return field_ ? decode_rlnc(rx, ws) : decode_carousel(rx); };

  out.per_base_decoded.resize(bases);
  out.per_base_full.resize(bases);
  bool all_full = true;
  for (std::size_t i = 0; i < bases; ++i) {
    const Decode d = decode(std::span<const char>(ws.received).subspan(i * n_T, n_T));
    out.per_base_decoded[i] = d.decoded;
    out.per_base_full[i] = d.full;
    all_full = all_full && d.full;
  }
  const Decode joint = decode(ws.union_received);
  out.union_decoded = joint.decoded;
  out.mission_success = scenario_.connectivity == Connectivity::Isolated ? all_full : joint.full;

  if (detailed) {
    out.per_base_received.assign(bases, {});
    for (std::size_t i = 0; i < bases; ++i) {
      for (unsigned n = 0; n < n_T; ++n) {
        if (ws.received[i * n_T + n]) out.per_base_received[i].push_back(n);
      }
    }
    out.coded_coefficients = field_ ? ws.coefficients : std::vector<gf::Element>{};
  } else {
    out.per_base_received.clear();
    out.coded_coefficients.clear();
  }
}

TrialOutcome run_trial(const Scenario& scenario, Rng& rng) {
  const Simulator sim(scenario);
  Simulator::Workspace ws;
  TrialOutcome out;
  sim.run(rng, ws, out, true);
  return out;
}

bool metric_hit(const Metric& metric, const TrialOutcome& outcome) {
  switch (metric.kind) {
    case Metric::Kind::MissionSuccess:
      return outcome.mission_success;
    case Metric::Kind::BaseFull:
      return outcome.per_base_full.at(metric.base) != 0;
    case Metric::Kind::BasePartial:
      return outcome.per_base_decoded.at(metric.base) >= metric.mu;
  }
  return false;
}

std::vector<SimEstimate> estimate_many(const Scenario& scenario, std::span<const Metric> metrics,
                                       std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  if (trials < 1) throw SimError("trials must be >= 1");
  const Simulator sim(scenario);
  for (const auto& m : metrics) {
    if (m.kind != Metric::Kind::MissionSuccess && m.base >= scenario.base_count()) {
      throw SimError("unknown base index " + std::to_string(m.base + 1));
    }
    if (m.kind == Metric::Kind::BasePartial && m.mu > scenario.k) throw SimError("mu must not exceed k");
  }

  const std::uint64_t blocks = (trials + kTrialsPerStream - 1) / kTrialsPerStream;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));

  std::vector<std::uint64_t> totals(metrics.size(), 0);
  std::mutex totals_mutex;
  std::atomic<std::uint64_t> next_block{0};

  auto worker = [&] {
    Simulator::Workspace ws;
    TrialOutcome outcome;
    std::vector<std::uint64_t> local(metrics.size(), 0);
    for (std::uint64_t b = next_block++; b < blocks; b = next_block++) {
      Rng rng = stream_for_block(seed, b);
      const std::uint64_t end = std::min(trials, (b + 1) * kTrialsPerStream);
      for (std::uint64_t t = b * kTrialsPerStream; t < end; ++t) {
        sim.run(rng, ws, outcome);
        for (std::size_t m = 0; m < metrics.size(); ++m) local[m] += metric_hit(metrics[m], outcome) ? 1 : 0;
      }
    }
    std::lock_guard lock(totals_mutex);
    for (std::size_t m = 0; m < metrics.size(); ++m) totals[m] += local[m];
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::vector<SimEstimate> out;
  out.reserve(metrics.size());
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    SimEstimate e;
    e.metric = metrics[m].label();
    e.trials = trials;
    e.successes = totals[m];
    e.estimate = static_cast<double>(totals[m]) / static_cast<double>(trials);
    e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(trials));
    e.seed = seed;
    out.push_back(std::move(e));
  }
  return out;
}

SimEstimate estimate(const Scenario& scenario, const Metric& metric, std::uint64_t trials, std::uint64_t seed,
                     unsigned workers) {
  return estimate_many(scenario, std::span<const Metric>(&metric, 1), trials, seed, workers).front();
}

}  // namespace dronecast::sim
