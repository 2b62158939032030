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

#include "dronecast/gfmat.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace dronecast::gf {

namespace {

using Poly = std::vector<unsigned>;  // coefficients over GF(p), constant term first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

unsigned inv_mod_prime(unsigned a, unsigned p) {
  // p is small (< 256), a^(p-2) is fine.
  unsigned result = 1, base = a % p, e = p - 2;
  while (e) {
    if (e & 1u) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return result;
}

// Remainder of a modulo b, b nonzero.
Poly poly_mod(Poly a, const Poly& b, unsigned p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const unsigned lead_inv = inv_mod_prime(b.back(), p);
  while (a.size() >= b.size()) {
    const unsigned factor = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = (a[shift + i] + (p - factor * b[i] % p)) % p;
    }
    trim(a);
  }
  return a;
}

Poly digits(unsigned value, unsigned p, std::size_t length) {
  Poly d(length, 0);
  for (std::size_t i = 0; i < length; ++i) {
    d[i] = value % p;
    value /= p;
  }
  return d;
}

unsigned from_digits(const Poly& d, unsigned p) {
  unsigned value = 0;
  for (std::size_t i = d.size(); i-- > 0;) value = value * p + d[i];
  return value;
}

bool irreducible(const Poly& f, unsigned p) {
  const std::size_t m = f.size() - 1;
  for (std::size_t d = 1; d <= m / 2; ++d) {
    const unsigned count = [&] {
      unsigned c = 1;
      for (std::size_t i = 0; i < d; ++i) c *= p;
      return c;
    }();
    for (unsigned low = 0; low < count; ++low) {
      Poly divisor = digits(low, p, d);
      divisor.push_back(1);
      if (poly_mod(f, divisor, p).empty()) return false;
    }
  }
  return true;
}

Poly default_polynomial(unsigned p, unsigned m, unsigned q) {
  for (unsigned low = 0; low < q; ++low) {
    Poly f = digits(low, p, m);
    f.push_back(1);
    if (irreducible(f, p)) return f;
  }
  throw FieldError("no irreducible polynomial found");  // unreachable for valid p, m
}

}  // namespace

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::optional<std::pair<unsigned, unsigned>> prime_power(unsigned q) {
  if (q < 2) return std::nullopt;
  unsigned p = 2;
  while (q % p != 0) ++p;
  unsigned m = 0;
  while (q % p == 0) {
    q /= p;
    ++m;
  }
  if (q != 1) return std::nullopt;
  return std::pair{p, m};
}

Field::Field(unsigned p, unsigned m, std::optional<std::vector<unsigned>> reduction_polynomial, unsigned max_order) {
  if (!is_prime(p)) throw FieldError("field characteristic " + std::to_string(p) + " is not prime");
  if (m == 0) throw FieldError("field extension degree must be at least 1");
  unsigned q = 1;
  for (unsigned i = 0; i < m; ++i) {
    q *= p;
    if (q > max_order) {
      throw FieldError("unsupported field: order exceeds cap of " + std::to_string(max_order));
    }
  }

  auto t = std::make_shared<Tables>();
  t->p = p;
  t->m = m;
  t->q = q;

  if (reduction_polynomial) {
    Poly f = *reduction_polynomial;
    if (f.size() != m + 1 || f.back() != 1) {
      throw FieldError("reduction polynomial must be monic of degree " + std::to_string(m));
    }
    if (std::any_of(f.begin(), f.end(), [p](unsigned c) { return c >= p; })) {
      throw FieldError("reduction polynomial coefficient out of range for GF(" + std::to_string(p) + ")");
    }
    if (!irreducible(f, p)) throw FieldError("reduction polynomial is reducible");
    t->poly = std::move(f);
  } else {
    t->poly = default_polynomial(p, m, q);
  }

  t->add.resize(std::size_t{q} * q);
  t->mul.resize(std::size_t{q} * q);
  t->neg.resize(q);
  for (unsigned a = 0; a < q; ++a) {
    const Poly da = digits(a, p, m);
    Poly na(m);
    for (unsigned i = 0; i < m; ++i) na[i] = (p - da[i]) % p;
    t->neg[a] = static_cast<Element>(from_digits(na, p));
    for (unsigned b = 0; b < q; ++b) {
      const Poly db = digits(b, p, m);
      Poly sum(m);
      for (unsigned i = 0; i < m; ++i) sum[i] = (da[i] + db[i]) % p;
      t->add[std::size_t{a} * q + b] = static_cast<Element>(from_digits(sum, p));

      Poly prod(2 * m - 1, 0);
      for (unsigned i = 0; i < m; ++i) {
        for (unsigned j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
      }
      Poly r = poly_mod(std::move(prod), t->poly, p);
      r.resize(m, 0);
      t->mul[std::size_t{a} * q + b] = static_cast<Element>(from_digits(r, p));
    }
  }

  // Smallest generator of the multiplicative group.
  const unsigned group = q - 1;
  unsigned generator = 1;
  for (unsigned g = 1; g < q; ++g) {
    unsigned x = g, order = 1;
    while (x != 1) {
      x = t->mul[std::size_t{x} * q + g];
      ++order;
    }
    if (order == group) {
      generator = g;
      break;
    }
  }
  t->exp.resize(2 * std::size_t{group});
  t->log.assign(q, 0);
  unsigned x = 1;
  for (unsigned i = 0; i < 2 * group; ++i) {
    t->exp[i] = static_cast<Element>(x);
    if (i < group) t->log[x] = i;
    x = t->mul[std::size_t{x} * q + generator];
  }
  t->inv.assign(q, 0);
  for (unsigned a = 1; a < q; ++a) t->inv[a] = t->exp[(group - t->log[a]) % group];

  tables_ = std::move(t);
}

Field Field::of_order(unsigned q) {
  const auto pm = prime_power(q);
  if (!pm) throw FieldError("field order " + std::to_string(q) + " is not a prime power");
  return Field(pm->first, pm->second);
}

Element Field::inv(Element a) const {
  if (a == 0) throw FieldError("zero has no multiplicative inverse");
  return tables_->inv[a];
}

Element Field::pow(Element a, unsigned e) const noexcept {
  if (e == 0) return 1;
  if (a == 0) return 0;
  const unsigned group = order() - 1;
  return tables_->exp[static_cast<std::size_t>((std::uint64_t{tables_->log[a]} * e) % group)];
}

bool Field::operator==(const Field& other) const noexcept {
  return tables_ == other.tables_ ||
         (tables_->p == other.tables_->p && tables_->m == other.tables_->m && tables_->poly == other.tables_->poly);
}

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<Element> entries)
    : field_(std::move(field)), rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw MatrixError("matrix entry count " + std::to_string(entries_.size()) + " does not match " +
                      std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  for (Element e : entries_) {
    if (e >= field_.order()) throw MatrixError("matrix entry " + std::to_string(e) + " is not a field element");
  }
}

Matrix Matrix::identity(Field field, std::size_t n) {
  Matrix m(std::move(field), n, n);
  for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1;
  return m;
}

void Matrix::set(std::size_t r, std::size_t c, Element v) {
  if (r >= rows_ || c >= cols_) throw MatrixError("matrix index out of range");
  if (v >= field_.order()) throw MatrixError("matrix entry " + std::to_string(v) + " is not a field element");
  entries_[r * cols_ + c] = v;
}

std::span<const Element> Matrix::row(std::size_t r) const {
  if (r >= rows_) throw MatrixError("matrix row out of range");
  return std::span<const Element>(entries_).subspan(r * cols_, cols_);
}

void Matrix::append_row(std::span<const Element> values) {
  if (values.size() != cols_) throw MatrixError("appended row has wrong length");
  for (Element e : values) {
    if (e >= field_.order()) throw MatrixError("matrix entry " + std::to_string(e) + " is not a field element");
  }
  entries_.insert(entries_.end(), values.begin(), values.end());
  ++rows_;
}

bool Matrix::operator==(const Matrix& other) const noexcept {
  return field_ == other.field_ && rows_ == other.rows_ && cols_ == other.cols_ && entries_ == other.entries_;
}

Reduction reduce_in_place(const Field& field, std::span<Element> data, std::size_t rows, std::size_t cols) {
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
    std::size_t found = pivot_row;
    while (found < rows && data[found * cols + col] == 0) ++found;
    if (found == rows) continue;

    Element* pivot = data.data() + pivot_row * cols;
    if (found != pivot_row) {
      std::swap_ranges(pivot, pivot + cols, data.data() + found * cols);
    }
    if (pivot[col] != 1) {
      const Element* scale = field.mul_row(field.inv(pivot[col]));
      for (std::size_t c = col; c < cols; ++c) pivot[c] = scale[pivot[c]];
    }
    for (std::size_t r = 0; r < rows; ++r) {
      Element* target = data.data() + r * cols;
      if (r == pivot_row || target[col] == 0) continue;
      const Element* factor = field.mul_row(field.neg(target[col]));
      for (std::size_t c = col; c < cols; ++c) {
        if (pivot[c] != 0) target[c] = field.add(target[c], factor[pivot[c]]);
      }
    }
    ++pivot_row;
  }

  Reduction out;
  out.rank = pivot_row;
  for (std::size_t r = 0; r < pivot_row; ++r) {
    const auto row = data.subspan(r * cols, cols);
    if (std::count_if(row.begin(), row.end(), [](Element e) { return e != 0; }) == 1) ++out.unit_rows;
  }
  return out;
}

std::size_t rank(const Matrix& m) {
  std::vector<Element> scratch(m.entries().begin(), m.entries().end());
  return reduce_in_place(m.field(), scratch, m.rows(), m.cols()).rank;
}

Matrix rref(const Matrix& m) {
  std::vector<Element> scratch(m.entries().begin(), m.entries().end());
  reduce_in_place(m.field(), scratch, m.rows(), m.cols());
  return Matrix(m.field(), m.rows(), m.cols(), std::move(scratch));
}

std::size_t recoverable_sources(const Matrix& m) {
  std::vector<Element> scratch(m.entries().begin(), m.entries().end());
  return reduce_in_place(m.field(), scratch, m.rows(), m.cols()).unit_rows;
}

}  // namespace dronecast::gf
