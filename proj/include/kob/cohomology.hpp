// SPDX-License-Identifier: Apache-2.0
//
// Exact model of the exterior algebra Lambda[c_1, ..., c_k] on odd
// generators, deg c_i = 2i - 1. Coefficients are GMP rationals; nothing in
// this module touches floating point.

#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kob::cohomology {

using Rational = mpq_class;

/// Strictly ascending list of generator indices; the empty list is the unit.
using Monomial = std::vector<int>;

inline int generator_degree(int i) { return 2 * i - 1; }
int monomial_degree(const Monomial &m);

/// Orders monomials by total degree, then lexicographically.
struct MonomialOrder {
  bool operator()(const Monomial &a, const Monomial &b) const;
};

class AlgebraContext {
public:
  /// Throws InputError unless k >= 1.
  explicit AlgebraContext(int k);

  int k() const { return k_; }
  bool operator==(const AlgebraContext &) const = default;

private:
  int k_;
};

class CohomologyClass {
public:
  using Terms = std::map<Monomial, Rational, MonomialOrder>;

  /// The zero class.
  explicit CohomologyClass(AlgebraContext ctx) : ctx_(ctx) {}

  static CohomologyClass unit(AlgebraContext ctx);
  /// c_i; the zero class when i > k. Throws InputError for i < 1.
  static CohomologyClass generator(AlgebraContext ctx, int i);
  /// coeff * m. Throws InputError unless m is strictly ascending in 1..k.
  static CohomologyClass monomial(AlgebraContext ctx, Monomial m, Rational coeff = 1);

  const AlgebraContext &context() const { return ctx_; }
  const Terms &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(const Monomial &m) const;

  /// Degree of a nonzero homogeneous class; nullopt for zero or mixed degree.
  std::optional<int> homogeneous_degree() const;

  CohomologyClass &operator+=(const CohomologyClass &o);
  CohomologyClass &operator-=(const CohomologyClass &o);
  CohomologyClass &operator*=(const Rational &s);

  friend CohomologyClass operator+(CohomologyClass a, const CohomologyClass &b) { return a += b; }
  friend CohomologyClass operator-(CohomologyClass a, const CohomologyClass &b) { return a -= b; }
  friend CohomologyClass operator*(const Rational &s, CohomologyClass a) { return a *= s; }

  bool operator==(const CohomologyClass &o) const;

  /// Canonical text: "p/q * c1^c3 + -1/2 * c2", "0" for the zero class and
  /// "1" for the empty monomial.
  std::string to_string() const;

  /// Inverse of to_string. Also accepts integer coefficients without "/q".
  static CohomologyClass parse(std::string_view text, AlgebraContext ctx);

private:
  void add_term(const Monomial &m, const Rational &coeff);

  AlgebraContext ctx_;
  Terms terms_;
};

/// Cup product. Throws ContextMismatch if the contexts differ.
CohomologyClass cup(const CohomologyClass &a, const CohomologyClass &b);

/// c_{i0} cup ... cup c_{im} for a strictly ascending index list. Indices
/// beyond k are zero generators. Throws InputError for non-ascending or
/// non-positive indices.
CohomologyClass obstruction_product(AlgebraContext ctx, std::span<const int> indices);

/// (-1)^{n+1} / (n-1)!  for n >= 1.
Rational odd_chern_coefficient(int n);

/// Sum over n = 1..N of odd_chern_coefficient(n) * chern[n-1].
CohomologyClass odd_chern_character(std::span<const CohomologyClass> chern);

} // namespace kob::cohomology
