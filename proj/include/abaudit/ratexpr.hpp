#pragma once

#include <string>

#include "abaudit/poly.hpp"

namespace abaudit {

// Quotient of two polynomials in reduced canonical form.
// Invariants: den != 0; gcd(num, den) is a unit; den is monic in the global
// monomial order; num == 0 implies den == 1. Two RatExpr are equal as
// rational functions iff they are structurally equal.
class RatExpr {
 public:
  RatExpr() : den_(Rat(1)) {}  // zero
  RatExpr(Poly p) : num_(std::move(p)), den_(Rat(1)) {}
  explicit RatExpr(Rat c) : num_(Poly(std::move(c))), den_(Rat(1)) {}

  // Reduces; throws DivisionByZero if den == 0.
  static RatExpr make(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_poly() const { return den_.is_constant(); }  // den == 1 given invariants
  bool is_constant() const { return num_.is_constant() && is_poly(); }

  friend RatExpr operator+(const RatExpr&, const RatExpr&);
  friend RatExpr operator-(const RatExpr&, const RatExpr&);
  friend RatExpr operator*(const RatExpr&, const RatExpr&);
  friend RatExpr operator/(const RatExpr&, const RatExpr&);  // DivisionByZero
  RatExpr operator-() const;
  RatExpr& operator+=(const RatExpr& o) { *this = *this + o; return *this; }
  RatExpr& operator-=(const RatExpr& o) { *this = *this - o; return *this; }
  RatExpr& operator*=(const RatExpr& o) { *this = *this * o; return *this; }
  RatExpr& operator/=(const RatExpr& o) { *this = *this / o; return *this; }
  friend bool operator==(const RatExpr&, const RatExpr&) = default;

  RatExpr pow(std::int64_t e) const;  // negative exponents invert
  RatExpr derivative(SymId s) const;  // quotient rule, formal (no unit rules)
  bool contains(SymId s) const { return num_.contains(s) || den_.contains(s); }

  // Full evaluation; throws DivisionByZero if the denominator vanishes.
  Rat eval(const std::map<SymId, Rat>& point) const;

 private:
  Poly num_, den_;
};

}  // namespace abaudit
