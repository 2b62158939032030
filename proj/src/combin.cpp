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

#include "dronecast/combin.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "dronecast/gfmat.hpp"

namespace dronecast::combin {

namespace {

BigInt power(unsigned base, unsigned long exponent) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exponent);
  return out;
}

// Gaussian binomials [a choose b]_q for 0 <= b <= a <= size-1.
class GaussTable {
 public:
  GaussTable(unsigned size, unsigned q) : size_(size), values_(std::size_t{size} * size) {
    for (unsigned a = 0; a < size; ++a) {
      for (unsigned b = 0; b <= a; ++b) values_[std::size_t{a} * size + b] = gauss_binom(a, b, q);
    }
  }

  const BigInt& operator()(unsigned a, unsigned b) const { return values_[std::size_t{a} * size_ + b]; }

 private:
  unsigned size_;
  std::vector<BigInt> values_;
};

}  // namespace

void KernelParams::validate() const {
  if (k > n_T) throw KernelError("k must not exceed n_T (k=" + std::to_string(k) + ", n_T=" + std::to_string(n_T) + ")");
  if (n > n_T) throw KernelError("n must not exceed n_T (n=" + std::to_string(n) + ", n_T=" + std::to_string(n_T) + ")");
  if (mu > k) throw KernelError("mu must not exceed k (mu=" + std::to_string(mu) + ", k=" + std::to_string(k) + ")");
  if (!gf::prime_power(q)) throw KernelError("q must be a prime power (q=" + std::to_string(q) + ")");
}

BigInt binom(long a, long b) {
  if (a < 0) throw KernelError("binomial upper index must be nonnegative");
  if (b < 0 || b > a) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(b));
  return out;
}

BigInt gauss_binom(long a, long b, unsigned q) {
  if (a < 0) throw KernelError("Gaussian binomial upper index must be nonnegative");
  if (q < 2) throw KernelError("Gaussian binomial base must be at least 2");
  if (b < 0 || b > a) return 0;
  BigInt num = 1, den = 1;
  for (long i = 0; i < b; ++i) {
    num *= power(q, static_cast<unsigned long>(a - i)) - 1;
    den *= power(q, static_cast<unsigned long>(i + 1)) - 1;
  }
  BigInt out;
  mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

Rational p_sr_full(unsigned k, unsigned n, unsigned n_T, unsigned q) {
  KernelParams{k, n_T, n, k, q}.validate();
  if (n < k) return 0;

  const unsigned h_low = n + k > n_T ? n + k - n_T : 0;
  Rational sum = 0;
  for (unsigned h = h_low; h <= k; ++h) {
    // prod_{w=0}^{k-h-1} (1 - q^-(n-h-w)) as an integer ratio.
    BigInt num = binom(k, h) * binom(n_T - k, n - h);
    unsigned long exponent = 0;
    for (unsigned w = 0; w < k - h; ++w) {
      num *= power(q, n - h - w) - 1;
      exponent += n - h - w;
    }
    Rational term(num, power(q, exponent));
    term.canonicalize();
    sum += term;
  }
  sum /= Rational(binom(n_T, n));
  return sum;
}

Rational p_sr_partial(unsigned mu, unsigned k, unsigned n, unsigned n_T, unsigned q) {
  KernelParams{k, n_T, n, mu, q}.validate();

  const GaussTable gauss(k + 1, q);
  // alternating[a][c] = sum_l (-1)^l C(a, l) [a-l choose c-l]_q
  std::vector<BigInt> alternating(std::size_t{k + 1} * (k + 1));
  for (unsigned a = 0; a <= k; ++a) {
    for (unsigned c = 0; c <= a; ++c) {
      BigInt s = 0;
      for (unsigned l = 0; l <= c; ++l) {
        const BigInt t = binom(a, l) * gauss(a - l, c - l);
        if (l % 2 == 0) {
          s += t;
        } else {
          s -= t;
        }
      }
      alternating[std::size_t{a} * (k + 1) + c] = s;
    }
  }

  const unsigned h_low = n + k > n_T ? n + k - n_T : 0;
  const unsigned r_hi = std::min(n, k);
  Rational sum = 0;
  for (unsigned r = mu; r <= r_hi; ++r) {
    for (unsigned h = h_low; h <= r; ++h) {
      BigInt inner = 0;
      const unsigned b_low = mu > h ? mu - h : 0;
      for (unsigned b = b_low; b <= r - h; ++b) {
        inner += binom(k - h, b) * alternating[std::size_t{k - h - b} * (k + 1) + (r - h - b)];
      }
      if (inner == 0) continue;

      BigInt num = binom(k, h) * binom(n_T - k, n - h) * inner;
      if (num == 0) continue;
      unsigned long exponent = static_cast<unsigned long>(n - h) * (k - r);
      for (unsigned w = 0; w < r - h; ++w) {
        num *= power(q, n - h - w) - 1;
        exponent += n - h - w;
      }
      Rational term(num, power(q, exponent));
      term.canonicalize();
      sum += term;
    }
  }
  sum /= Rational(binom(n_T, n));
  return sum;
}

double to_double(const Rational& r) { return r.get_d(); }

const Rational& KernelCache::get(const KernelParams& params) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(params); it != entries_.end()) return it->second.exact;
  }
  // The full-rank form is far cheaper and agrees exactly at mu == k.
  Rational value = params.mu == params.k ? p_sr_full(params.k, params.n, params.n_T, params.q)
                                         : p_sr_partial(params.mu, params.k, params.n, params.n_T, params.q);
  const double approx = to_double(value);
  std::lock_guard lock(mutex_);
  auto [it, inserted] = entries_.try_emplace(params, Entry{std::move(value), approx});
  return it->second.exact;
}

double KernelCache::get_double(const KernelParams& params) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(params); it != entries_.end()) return it->second.approx;
  }
  get(params);
  std::lock_guard lock(mutex_);
  return entries_.at(params).approx;
}

KernelCache& KernelCache::global() {
  static KernelCache cache;
  return cache;
}

}  // namespace dronecast::combin
