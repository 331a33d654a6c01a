#pragma once

#include <memory>
#include <vector>

#include "abaudit/expr.hpp"

namespace abaudit {

using ExprVec = std::vector<Expr>;
using ExprMat = std::vector<std::vector<Expr>>;
using ExprTen3 = std::vector<ExprMat>;

// A concrete chart: dim base coordinates with their fiber partners, all on
// one owning table. Charts are built by scenario loading (or directly in
// tests); the table may also carry a unit atom for scale factors.
struct Chart {
  std::shared_ptr<SymbolTable> tab;
  std::vector<SymId> x;
  std::vector<SymId> y;
  std::size_t dim = 0;

  Expr zero() const { return Expr::constant(tab.get(), Rat(0)); }
  Expr one() const { return Expr::constant(tab.get(), Rat(1)); }
  Expr ys(std::size_t i) const { return Expr::sym(tab.get(), y[i]); }
  Expr xs(std::size_t i) const { return Expr::sym(tab.get(), x[i]); }
};

Chart make_chart(std::size_t dim);

// t_ij y^i y^j
Expr transvect2(const Chart& ch, const ExprMat& t);
// t^i_jk y^j y^k for each i
ExprVec transvect_inner2(const Chart& ch, const ExprTen3& t);
// t_ij y^j for each i
ExprVec transvect1(const Chart& ch, const ExprMat& t);

// Symmetric exact-inverse package of a quadratic form on the chart. Entries
// must be free of fiber symbols; they may contain the unit atom (that is how
// a scaled copy of a metric enters the same machinery).
struct MetricData {
  ExprMat a;
  ExprMat ainv;
  Expr det;
  Expr alpha2;  // a_ij y^i y^j
};

MetricData metric_data(const Chart& ch, ExprMat a);

// gamma^i_jk, symmetric in jk
ExprTen3 christoffel(const Chart& ch, const MetricData& g);

// Everything the calculus needs about a covector field on the chart:
// raised components, squared norm, the symmetric and antisymmetric parts of
// its covariant derivative, and the standard contractions of those.
struct BetaData {
  ExprVec b_dn, b_up;
  Expr b2;
  Expr beta;      // b_i y^i
  ExprMat cov_b;  // b_i covariantly differentiated along x^j
  ExprMat r_dn;   // r_ij, symmetric part of cov_b
  ExprMat s_dn;   // s_ij, antisymmetric part
  ExprVec r_j;    // b^i r_ij
  ExprVec s_j;    // b^i s_ij
  ExprVec si0;    // s^i_j y^j (index raised)
  Expr r00;       // r_ij y^i y^j
  Expr r0;        // r_j y^j
  Expr s0;        // s_j y^j
  Expr gamma2;    // b2 * alpha2 - beta^2
};

BetaData beta_data(const Chart& ch, const MetricData& g, const ExprTen3& gamma,
                   ExprVec b_dn);

}  // namespace abaudit
