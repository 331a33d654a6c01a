#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "abaudit/rational.hpp"
#include "abaudit/symbol.hpp"

namespace abaudit {

// One symbol raised to a positive power.
struct Factor {
  SymId sym = kNoSym;
  std::uint32_t exp = 0;
  friend bool operator==(const Factor&, const Factor&) = default;
};

// Product of factors, sorted by symbol id ascending, exponents > 0.
// The empty monomial is 1.
class Monomial {
 public:
  Monomial() = default;
  static Monomial var(SymId s, std::uint32_t e = 1);

  bool is_unit() const { return f_.empty(); }
  std::uint32_t total_degree() const;
  std::uint32_t degree_of(SymId s) const;
  const std::vector<Factor>& factors() const { return f_; }

  static Monomial mul(const Monomial& a, const Monomial& b);
  // b | a ? a/b : nullopt
  static std::optional<Monomial> div(const Monomial& a, const Monomial& b);
  static Monomial gcd(const Monomial& a, const Monomial& b);

  // Graded lexicographic order: total degree first, ties broken
  // lexicographically with lower symbol ids weighing more.
  // Returns <0, 0, >0.
  static int cmp(const Monomial& a, const Monomial& b);

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<Factor> f_;
  friend class Poly;
};

// Sparse multivariate polynomial with exact rational coefficients.
// Canonical by construction: terms sorted descending in the monomial order,
// no zero coefficients. Equality is structural equality of term lists.
class Poly {
 public:
  Poly() = default;  // zero
  explicit Poly(Rat c);
  static Poly var(SymId s, std::uint32_t e = 1);
  static Poly term(Rat c, Monomial m);

  bool is_zero() const { return t_.empty(); }
  bool is_constant() const;          // zero or a single unit-monomial term
  const Rat& constant_value() const; // requires is_constant(); 0 for zero
  bool is_monomial() const { return t_.size() == 1; }

  std::size_t term_count() const { return t_.size(); }
  const std::vector<std::pair<Monomial, Rat>>& terms() const { return t_; }
  const std::pair<Monomial, Rat>& leading() const;  // requires !is_zero()

  std::uint32_t total_degree() const;     // 0 for the zero polynomial
  std::uint32_t degree_of(SymId s) const; // max exponent of s
  bool contains(SymId s) const;
  std::vector<SymId> symbols() const;     // sorted, distinct

  friend Poly operator+(const Poly&, const Poly&);
  friend Poly operator-(const Poly&, const Poly&);
  friend Poly operator*(const Poly&, const Poly&);
  Poly operator-() const;
  Poly& operator+=(const Poly& o) { *this = *this + o; return *this; }
  Poly& operator-=(const Poly& o) { *this = *this - o; return *this; }
  Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }
  friend bool operator==(const Poly&, const Poly&) = default;

  Poly pow(std::uint32_t e) const;
  Poly scale(const Rat& c) const;

  // Formal partial derivative; ignores unit-atom rules (those are applied at
  // the expression layer, where the result may be non-polynomial).
  Poly derivative(SymId s) const;

  // Monomial common to all terms (zero poly -> unit monomial).
  Monomial monomial_content() const;
  // Divide out a monomial that must divide every term.
  Poly divide_monomial(const Monomial& m) const;
  // Positive rational c such that (1/c)*poly has integer coefficients with
  // gcd 1. Zero poly -> 1.
  Rat rational_content() const;

  // Leading coefficient scaled to 1. Zero stays zero.
  Poly monic() const;

  // Full evaluation; every symbol occurring in the poly must be bound.
  Rat eval(const std::map<SymId, Rat>& point) const;

  // Build from raw (monomial, coeff) pairs in any order; merges duplicates.
  static Poly from_terms(std::vector<std::pair<Monomial, Rat>> terms);

 private:
  // sorted descending by Monomial::cmp, no zero coefficients
  std::vector<std::pair<Monomial, Rat>> t_;
};

// Exact division: a/b if b divides a, nullopt otherwise.
std::optional<Poly> poly_div_exact(const Poly& a, const Poly& b);

// Multivariate gcd (monic normalization). gcd(0,0) = 0.
Poly poly_gcd(const Poly& a, const Poly& b);

}  // namespace abaudit
