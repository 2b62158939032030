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

#include <gmpxx.h>

#include <compare>
#include <map>
#include <mutex>
#include <stdexcept>

// Exact decoding-probability kernels for systematic random linear network
// coding. Every value here is an exact rational; nothing goes through a
// floating-point intermediate. Callers convert with to_double() at the edge.

namespace dronecast::combin {

using BigInt = mpz_class;
/// GMP rationals are kept canonical (reduced, positive denominator).
using Rational = mpq_class;

class KernelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters of one kernel evaluation: k source packets out of n_T sent,
/// n of which were received, at least mu to recover, field order q.
struct KernelParams {
  unsigned k = 0;
  unsigned n_T = 0;
  unsigned n = 0;
  unsigned mu = 0;
  unsigned q = 2;

  /// Throws KernelError unless 0 <= mu <= k <= n_T, n <= n_T and q is a prime power.
  void validate() const;

  auto operator<=>(const KernelParams&) const = default;
};

/// C(a, b); zero outside 0 <= b <= a.
BigInt binom(long a, long b);

/// Gaussian binomial [a choose b]_q; zero outside 0 <= b <= a.
BigInt gauss_binom(long a, long b, unsigned q);

/// Probability that n received packets, drawn uniformly from the n_T sent
/// (the first k being the source packets and the rest uniform random
/// combinations over GF(q)), have rank k. Zero when n < k.
Rational p_sr_full(unsigned k, unsigned n, unsigned n_T, unsigned q);

/// Probability that the same n received packets let a decoder recover at
/// least mu of the k source packets, i.e. at least mu unit vectors lie in
/// their row space.
Rational p_sr_partial(unsigned mu, unsigned k, unsigned n, unsigned n_T, unsigned q);

double to_double(const Rational& r);

/// Memoized p_sr_partial (p_sr_full is the mu == k case). Safe for
/// concurrent use.
class KernelCache {
 public:
  const Rational& get(const KernelParams& params);
  double get_double(const KernelParams& params);

  static KernelCache& global();

 private:
  struct Entry {
    Rational exact;
    double approx;
  };
  std::mutex mutex_;
  std::map<KernelParams, Entry> entries_;
};

}  // namespace dronecast::combin
