#include "abaudit/ratexpr.hpp"

#include <cassert>

#include "abaudit/errors.hpp"

namespace abaudit {

namespace {

// Divide out a gcd that is known to divide p exactly.
Poly exact_quot(const Poly& p, const Poly& g) {
  auto q = poly_div_exact(p, g);
  if (!q) throw Error("internal: claimed divisor does not divide");
  return std::move(*q);
}

}  // namespace

RatExpr RatExpr::make(Poly num, Poly den) {
  if (den.is_zero()) throw DivisionByZero("");
  if (num.is_zero()) return RatExpr{};
  Poly g = poly_gcd(num, den);
  if (!g.is_constant()) {
    num = exact_quot(num, g);
    den = exact_quot(den, g);
  }
  Rat lc = den.leading().second;
  RatExpr out;
  out.num_ = num.scale(Rat(1) / lc);
  out.den_ = den.scale(Rat(1) / lc);
  return out;
}

RatExpr operator+(const RatExpr& a, const RatExpr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  RatExpr out;
  if (a.den_ == b.den_) {
    Poly n = a.num_ + b.num_;
    if (n.is_zero()) return RatExpr{};
    Poly g = poly_gcd(n, a.den_);
    if (g.is_constant()) {
      out.num_ = std::move(n);
      out.den_ = a.den_;
    } else {
      out.num_ = exact_quot(n, g);
      out.den_ = exact_quot(a.den_, g);
      Rat lc = out.den_.leading().second;
      out.num_ = out.num_.scale(Rat(1) / lc);
      out.den_ = out.den_.scale(Rat(1) / lc);
    }
    return out;
  }
  Poly g = poly_gcd(a.den_, b.den_);
  if (g.is_constant()) {
    // coprime denominators: the naive combination is already reduced
    out.num_ = a.num_ * b.den_ + b.num_ * a.den_;
    if (out.num_.is_zero()) return RatExpr{};
    out.den_ = a.den_ * b.den_;
    return out;
  }
  Poly d1g = exact_quot(a.den_, g);
  Poly d2g = exact_quot(b.den_, g);
  Poly t = a.num_ * d2g + b.num_ * d1g;
  if (t.is_zero()) return RatExpr{};
  Poly g2 = poly_gcd(t, g);
  if (g2.is_constant()) {
    out.num_ = std::move(t);
    out.den_ = d1g * b.den_;  // d1g * d2g * g
  } else {
    out.num_ = exact_quot(t, g2);
    out.den_ = d1g * d2g * exact_quot(g, g2);
    Rat lc = out.den_.leading().second;
    out.num_ = out.num_.scale(Rat(1) / lc);
    out.den_ = out.den_.scale(Rat(1) / lc);
  }
  return out;
}

RatExpr RatExpr::operator-() const {
  RatExpr out = *this;
  out.num_ = -out.num_;
  return out;
}

RatExpr operator-(const RatExpr& a, const RatExpr& b) { return a + (-b); }

RatExpr operator*(const RatExpr& a, const RatExpr& b) {
  if (a.is_zero() || b.is_zero()) return RatExpr{};
  // cross-cancel so the pieces multiply into an already reduced fraction
  Poly g1 = poly_gcd(a.num_, b.den_);
  Poly g2 = poly_gcd(b.num_, a.den_);
  Poly n1 = g1.is_constant() ? a.num_ : exact_quot(a.num_, g1);
  Poly d2 = g1.is_constant() ? b.den_ : exact_quot(b.den_, g1);
  Poly n2 = g2.is_constant() ? b.num_ : exact_quot(b.num_, g2);
  Poly d1 = g2.is_constant() ? a.den_ : exact_quot(a.den_, g2);
  RatExpr out;
  out.num_ = n1 * n2;
  out.den_ = d1 * d2;
  Rat lc = out.den_.leading().second;
  if (lc != 1) {
    out.num_ = out.num_.scale(Rat(1) / lc);
    out.den_ = out.den_.scale(Rat(1) / lc);
  }
  return out;
}

RatExpr operator/(const RatExpr& a, const RatExpr& b) {
  if (b.is_zero()) throw DivisionByZero("");
  if (a.is_zero()) return RatExpr{};
  RatExpr binv;
  binv.num_ = b.den_;
  binv.den_ = b.num_;
  Rat lc = binv.den_.leading().second;
  if (lc != 1) {
    binv.num_ = binv.num_.scale(Rat(1) / lc);
    binv.den_ = binv.den_.scale(Rat(1) / lc);
  }
  return a * binv;
}

RatExpr RatExpr::pow(std::int64_t e) const {
  if (e == 0) return RatExpr(Rat(1));
  bool inv = e < 0;
  std::uint32_t n = static_cast<std::uint32_t>(inv ? -e : e);
  if (inv && is_zero()) throw DivisionByZero("0");
  // powers of a reduced fraction stay reduced
  RatExpr out;
  out.num_ = num_.pow(n);
  out.den_ = den_.pow(n);
  if (inv) {
    std::swap(out.num_, out.den_);
    Rat lc = out.den_.leading().second;
    if (lc != 1) {
      out.num_ = out.num_.scale(Rat(1) / lc);
      out.den_ = out.den_.scale(Rat(1) / lc);
    }
  }
  return out;
}

RatExpr RatExpr::derivative(SymId s) const {
  if (is_poly()) return RatExpr(num_.derivative(s));
  if (!contains(s)) return RatExpr{};
  return RatExpr::make(num_.derivative(s) * den_ - num_ * den_.derivative(s),
                       den_ * den_);
}

Rat RatExpr::eval(const std::map<SymId, Rat>& point) const {
  Rat d = den_.eval(point);
  if (sgn(d) == 0) throw DivisionByZero("denominator vanishes at the point");
  return num_.eval(point) / d;
}

}  // namespace abaudit
