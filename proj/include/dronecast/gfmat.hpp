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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace dronecast::gf {

/// Field elements are integers in [0, q). An element of GF(p^m) encodes the
/// polynomial whose base-p digits are its coefficients, constant term in the
/// least significant digit (so in GF(8), 2 is x and 3 is x + 1).
using Element = std::uint8_t;

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

bool is_prime(unsigned n);

/// Splits q into (p, m) with q = p^m, or nullopt when q is not a prime power.
std::optional<std::pair<unsigned, unsigned>> prime_power(unsigned q);

/**
 * GF(p^m) with precomputed addition, multiplication, log and antilog tables.
 *
 * Immutable after construction; copies share the tables, so a Field can be
 * handed to any number of concurrent workers.
 *
 * When no reduction polynomial is given the default is the smallest monic
 * irreducible of degree m, ordering polynomials by the integer their
 * coefficient digits spell (constant term least significant). This gives
 * x^2+x+1 for GF(4), x^3+x+1 for GF(8), x^4+x+1 for GF(16) and
 * x^8+x^4+x^3+x+1 for GF(256).
 */
class Field {
 public:
  static constexpr unsigned kDefaultMaxOrder = 256;

  /// Reduction polynomial coefficients are listed constant term first and
  /// must describe a monic polynomial of degree m.
  Field(unsigned p, unsigned m,
        std::optional<std::vector<unsigned>> reduction_polynomial = std::nullopt,
        unsigned max_order = kDefaultMaxOrder);

  /// GF(q) with the default reduction polynomial.
  static Field of_order(unsigned q);

  unsigned order() const noexcept { return tables_->q; }
  unsigned characteristic() const noexcept { return tables_->p; }
  unsigned degree() const noexcept { return tables_->m; }
  const std::vector<unsigned>& reduction_polynomial() const noexcept { return tables_->poly; }

  Element add(Element a, Element b) const noexcept { return tables_->add[index(a, b)]; }
  Element sub(Element a, Element b) const noexcept { return add(a, tables_->neg[b]); }
  Element neg(Element a) const noexcept { return tables_->neg[a]; }
  Element mul(Element a, Element b) const noexcept { return tables_->mul[index(a, b)]; }
  /// Throws FieldError for a == 0.
  Element inv(Element a) const;
  Element div(Element a, Element b) const { return mul(a, inv(b)); }
  Element pow(Element a, unsigned e) const noexcept;

  /// Row of the multiplication table for a fixed left operand.
  const Element* mul_row(Element a) const noexcept { return tables_->mul.data() + std::size_t{a} * order(); }
  const Element* add_row(Element a) const noexcept { return tables_->add.data() + std::size_t{a} * order(); }

  bool operator==(const Field& other) const noexcept;

 private:
  struct Tables {
    unsigned p = 0, m = 0, q = 0;
    std::vector<unsigned> poly;
    std::vector<Element> add, mul, neg, inv;
    std::vector<Element> exp;  // exp[i] = g^i, length 2(q-1)
    std::vector<unsigned> log;
  };

  std::size_t index(Element a, Element b) const noexcept { return std::size_t{a} * tables_->q + b; }

  std::shared_ptr<const Tables> tables_;
};

class MatrixError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix over a Field.
class Matrix {
 public:
  Matrix(Field field, std::size_t rows, std::size_t cols);
  Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<Element> entries);

  static Matrix identity(Field field, std::size_t n);

  const Field& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Element at(std::size_t r, std::size_t c) const { return entries_.at(r * cols_ + c); }
  void set(std::size_t r, std::size_t c, Element v);

  std::span<const Element> row(std::size_t r) const;
  void append_row(std::span<const Element> values);

  std::span<const Element> entries() const noexcept { return entries_; }
  std::span<Element> mutable_entries() noexcept { return entries_; }

  bool operator==(const Matrix& other) const noexcept;

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Element> entries_;
};

struct Reduction {
  std::size_t rank = 0;
  /// Number of nonzero RREF rows holding a single nonzero entry.
  std::size_t unit_rows = 0;
};

/// Reduces a row-major rows x cols block to reduced row echelon form in place.
/// Pivots are the first nonzero entry found scanning down each column.
Reduction reduce_in_place(const Field& field, std::span<Element> data, std::size_t rows, std::size_t cols);

std::size_t rank(const Matrix& m);
Matrix rref(const Matrix& m);

/// Number of standard basis vectors e_b lying in the row space of m.
std::size_t recoverable_sources(const Matrix& m);

}  // namespace dronecast::gf
