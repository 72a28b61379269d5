// SPDX-License-Identifier: Apache-2.0

#include "kob/cohomology.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "kob/error.hpp"

namespace kob::cohomology {

int monomial_degree(const Monomial &m) {
  int d = 0;
  for (int i : m)
    d += generator_degree(i);
  return d;
}

bool MonomialOrder::operator()(const Monomial &a, const Monomial &b) const {
  const int da = monomial_degree(a);
  const int db = monomial_degree(b);
  if (da != db)
    return da < db;
  return a < b;
}

AlgebraContext::AlgebraContext(int k) : k_(k) {
  if (k < 1)
    throw InputError("algebra needs at least one generator (k >= 1)");
}

namespace {

void check_monomial(const Monomial &m, int k) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] < 1 || m[i] > k)
      throw InputError("generator index " + std::to_string(m[i]) + " outside 1.." +
                       std::to_string(k));
    if (i > 0 && m[i] <= m[i - 1])
      throw InputError("monomial indices must be strictly ascending");
  }
}

// Product of two monomials: the merged index list and the Koszul sign, or
// nullopt when they share a generator.
std::optional<std::pair<Monomial, int>> merge(const Monomial &a, const Monomial &b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  int sign = 1;
  std::size_t i = 0, j = 0;
  // Degree of the generators of `a` not yet emitted; each b-generator that
  // jumps ahead of them picks up (-1)^{deg(b_j) * remaining_degree}.
  int remaining_a = monomial_degree(a);
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      remaining_a -= generator_degree(a[i]);
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      if ((generator_degree(b[j]) * remaining_a) % 2 != 0)
        sign = -sign;
      out.push_back(b[j++]);
    } else {
      return std::nullopt;
    }
  }
  return std::make_pair(std::move(out), sign);
}

} // namespace

CohomologyClass CohomologyClass::unit(AlgebraContext ctx) {
  CohomologyClass c(ctx);
  c.add_term({}, 1);
  return c;
}

CohomologyClass CohomologyClass::generator(AlgebraContext ctx, int i) {
  if (i < 1)
    throw InputError("generator indices start at 1");
  CohomologyClass c(ctx);
  if (i <= ctx.k())
    c.add_term({i}, 1);
  return c;
}

CohomologyClass CohomologyClass::monomial(AlgebraContext ctx, Monomial m, Rational coeff) {
  check_monomial(m, ctx.k());
  CohomologyClass c(ctx);
  c.add_term(m, coeff);
  return c;
}

Rational CohomologyClass::coefficient(const Monomial &m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::optional<int> CohomologyClass::homogeneous_degree() const {
  if (terms_.empty())
    return std::nullopt;
  const int d = monomial_degree(terms_.begin()->first);
  for (const auto &[m, q] : terms_)
    if (monomial_degree(m) != d)
      return std::nullopt;
  return d;
}

void CohomologyClass::add_term(const Monomial &m, const Rational &coeff) {
  // GMP comparisons assume canonical fractions, and callers may pass 2/4.
  Rational c(coeff);
  c.canonicalize();
  if (c == 0)
    return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0)
      terms_.erase(it);
  }
}

CohomologyClass &CohomologyClass::operator+=(const CohomologyClass &o) {
  if (!(ctx_ == o.ctx_))
    throw ContextMismatch("adding classes from different algebras");
  for (const auto &[m, q] : o.terms_)
    add_term(m, q);
  return *this;
}

CohomologyClass &CohomologyClass::operator-=(const CohomologyClass &o) {
  if (!(ctx_ == o.ctx_))
    throw ContextMismatch("subtracting classes from different algebras");
  for (const auto &[m, q] : o.terms_)
    add_term(m, -q);
  return *this;
}

CohomologyClass &CohomologyClass::operator*=(const Rational &s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto &[m, q] : terms_)
    q *= s;
  return *this;
}

bool CohomologyClass::operator==(const CohomologyClass &o) const {
  return ctx_ == o.ctx_ && terms_ == o.terms_;
}

std::string CohomologyClass::to_string() const {
  if (terms_.empty())
    return "0";
  std::string out;
  bool first = true;
  for (const auto &[m, q] : terms_) {
    if (!first)
      out += " + ";
    first = false;
    out += q.get_num().get_str() + "/" + q.get_den().get_str() + " * ";
    if (m.empty()) {
      out += "1";
      continue;
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i > 0)
        out += "^";
      out += "c" + std::to_string(m[i]);
    }
  }
  return out;
}

namespace {

class Scanner {
public:
  explicit Scanner(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ == s_.size();
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c))
      fail(std::string("expected '") + c + "'");
  }
  std::string digits() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (start == pos_)
      fail("expected digits");
    return std::string(s_.substr(start, pos_ - start));
  }
  [[noreturn]] void fail(const std::string &what) const {
    throw InputError("cannot parse class at offset " + std::to_string(pos_) + ": " + what);
  }

private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

Rational parse_rational(Scanner &sc) {
  const bool neg = sc.accept('-');
  mpz_class num(sc.digits());
  mpz_class den(1);
  if (sc.accept('/')) {
    den = mpz_class(sc.digits());
    if (den == 0)
      sc.fail("zero denominator");
  }
  Rational q(neg ? mpz_class(-num) : num, den);
  q.canonicalize();
  return q;
}

Monomial parse_monomial(Scanner &sc) {
  Monomial m;
  if (sc.accept('1'))
    return m;
  do {
    sc.expect('c');
    const std::string d = sc.digits();
    if (d.size() > 9)
      sc.fail("generator index too large");
    m.push_back(std::stoi(d));
  } while (sc.accept('^'));
  return m;
}

} // namespace

CohomologyClass CohomologyClass::parse(std::string_view text, AlgebraContext ctx) {
  Scanner sc(text);
  CohomologyClass out(ctx);
  if (sc.accept('0') && sc.done())
    return out;
  Scanner again(text);
  do {
    const Rational q = parse_rational(again);
    again.expect('*');
    const Monomial m = parse_monomial(again);
    check_monomial(m, ctx.k());
    out.add_term(m, q);
  } while (again.accept('+'));
  if (!again.done())
    again.fail("trailing input");
  return out;
}

CohomologyClass cup(const CohomologyClass &a, const CohomologyClass &b) {
  if (!(a.context() == b.context()))
    throw ContextMismatch("cup product of classes from different algebras");
  CohomologyClass out(a.context());
  for (const auto &[ma, qa] : a.terms())
    for (const auto &[mb, qb] : b.terms()) {
      auto merged = merge(ma, mb);
      if (!merged)
        continue;
      Rational q = qa * qb;
      if (merged->second < 0)
        q = -q;
      out += CohomologyClass::monomial(a.context(), std::move(merged->first), q);
    }
  return out;
}

CohomologyClass obstruction_product(AlgebraContext ctx, std::span<const int> indices) {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 1)
      throw InputError("generator indices start at 1");
    if (i > 0 && indices[i] <= indices[i - 1])
      throw InputError("index list must be strictly ascending");
  }
  CohomologyClass out = CohomologyClass::unit(ctx);
  for (int i : indices)
    out = cup(out, CohomologyClass::generator(ctx, i));
  return out;
}

Rational odd_chern_coefficient(int n) {
  if (n < 1)
    throw InputError("odd Chern classes are indexed from 1");
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(n - 1));
  Rational q(n % 2 == 1 ? mpz_class(1) : mpz_class(-1), fact);
  q.canonicalize();
  return q;
}

CohomologyClass odd_chern_character(std::span<const CohomologyClass> chern) {
  if (chern.empty())
    throw InputError("odd Chern character needs at least one class");
  CohomologyClass out(chern.front().context());
  for (std::size_t n = 1; n <= chern.size(); ++n)
    out += odd_chern_coefficient(static_cast<int>(n)) * chern[n - 1];
  return out;
}

} // namespace kob::cohomology
