#include "abaudit/riemann.hpp"

#include <string>
#include <utility>

#include "abaudit/errors.hpp"

namespace abaudit {

namespace {

void require_square(const Chart& ch, const ExprMat& m, const char* what) {
  if (m.size() != ch.dim)
    throw ValidationError(std::string(what) + ": expected " +
                          std::to_string(ch.dim) + " rows, got " +
                          std::to_string(m.size()));
  for (const auto& row : m)
    if (row.size() != ch.dim)
      throw ValidationError(std::string(what) + ": ragged row");
}

bool touches(const Expr& e, SymId s) {
  return e.even().contains(s) || e.odd().contains(s);
}

// Metric and covector entries live on the base: no fiber symbols, and no
// root part (the root is built from the metric afterwards, not fed into it).
void require_base_scalar(const Chart& ch, const Expr& e, const char* what) {
  if (e.has_root_part())
    throw ValidationError(std::string(what) + " must not involve the root");
  for (SymId yi : ch.y)
    if (touches(e, yi))
      throw ValidationError(std::string(what) +
                            " must not depend on fiber symbols");
}

// Exact inverse by Gauss-Jordan, tracking the determinant through the row
// ops. Pivots are the first nonzero entry in each column; a column with no
// pivot means the form is degenerate.
std::pair<ExprMat, Expr> invert(const Chart& ch, const ExprMat& a) {
  const std::size_t n = ch.dim;
  ExprMat m = a;
  ExprMat inv(n, ExprVec(n, ch.zero()));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = ch.one();
  Expr det = ch.one();

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) throw ValidationError("metric is singular");
    if (piv != col) {
      std::swap(m[piv], m[col]);
      std::swap(inv[piv], inv[col]);
      det = ch.zero() - det;
    }
    Expr p = m[col][col];
    det = det * p;
    for (std::size_t j = 0; j < n; ++j) {
      m[col][j] = m[col][j] / p;
      inv[col][j] = inv[col][j] / p;
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || m[row][col].is_zero()) continue;
      Expr f = m[row][col];
      for (std::size_t j = 0; j < n; ++j) {
        m[row][j] = m[row][j] - f * m[col][j];
        inv[row][j] = inv[row][j] - f * inv[col][j];
      }
    }
  }
  return {std::move(inv), std::move(det)};
}

}  // namespace

Chart make_chart(std::size_t dim) {
  if (dim < 2) throw ValidationError("chart dimension must be at least 2");
  Chart ch;
  ch.tab = std::make_shared<SymbolTable>();
  ch.dim = dim;
  for (std::size_t i = 1; i <= dim; ++i)
    ch.x.push_back(
        ch.tab->add("x" + std::to_string(i), SymKind::Coordinate, 0));
  for (std::size_t i = 1; i <= dim; ++i)
    ch.y.push_back(ch.tab->add("y" + std::to_string(i), SymKind::Fiber, 1));
  return ch;
}

Expr transvect2(const Chart& ch, const ExprMat& t) {
  require_square(ch, t, "transvect2");
  Expr out = ch.zero();
  for (std::size_t i = 0; i < ch.dim; ++i)
    for (std::size_t j = 0; j < ch.dim; ++j)
      out = out + t[i][j] * ch.ys(i) * ch.ys(j);
  return out;
}

ExprVec transvect_inner2(const Chart& ch, const ExprTen3& t) {
  if (t.size() != ch.dim) throw ValidationError("transvect_inner2: bad rank");
  ExprVec out(ch.dim, ch.zero());
  for (std::size_t i = 0; i < ch.dim; ++i) {
    require_square(ch, t[i], "transvect_inner2");
    for (std::size_t j = 0; j < ch.dim; ++j)
      for (std::size_t k = 0; k < ch.dim; ++k)
        out[i] = out[i] + t[i][j][k] * ch.ys(j) * ch.ys(k);
  }
  return out;
}

ExprVec transvect1(const Chart& ch, const ExprMat& t) {
  require_square(ch, t, "transvect1");
  ExprVec out(ch.dim, ch.zero());
  for (std::size_t i = 0; i < ch.dim; ++i)
    for (std::size_t j = 0; j < ch.dim; ++j)
      out[i] = out[i] + t[i][j] * ch.ys(j);
  return out;
}

MetricData metric_data(const Chart& ch, ExprMat a) {
  require_square(ch, a, "metric");
  for (std::size_t i = 0; i < ch.dim; ++i)
    for (std::size_t j = 0; j < ch.dim; ++j) {
      require_base_scalar(ch, a[i][j], "metric entry");
      if (!(a[i][j] == a[j][i]))
        throw ValidationError("metric is not symmetric at (" +
                              std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ")");
    }
  auto [ainv, det] = invert(ch, a);
  MetricData g;
  g.alpha2 = transvect2(ch, a);
  g.a = std::move(a);
  g.ainv = std::move(ainv);
  g.det = std::move(det);
  return g;
}

ExprTen3 christoffel(const Chart& ch, const MetricData& g) {
  const std::size_t n = ch.dim;
  // d_k a_ij, computed once
  ExprTen3 da(n, ExprMat(n, ExprVec(n, ch.zero())));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        da[k][i][j] = differentiate(g.a[i][j], ch.x[k]);

  Expr half = Expr::constant(ch.tab.get(), make_rat(1, 2));
  ExprTen3 out(n, ExprMat(n, ExprVec(n, ch.zero())));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        Expr acc = ch.zero();
        for (std::size_t m = 0; m < n; ++m)
          acc = acc +
                g.ainv[i][m] * (da[j][m][k] + da[k][m][j] - da[m][j][k]);
        out[i][j][k] = half * acc;
        out[i][k][j] = out[i][j][k];
      }
  return out;
}

BetaData beta_data(const Chart& ch, const MetricData& g, const ExprTen3& gamma,
                   ExprVec b_dn) {
  const std::size_t n = ch.dim;
  if (b_dn.size() != n) throw ValidationError("covector: wrong length");
  for (const Expr& e : b_dn) require_base_scalar(ch, e, "covector entry");

  BetaData bd;
  bd.b_up.assign(n, ch.zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      bd.b_up[i] = bd.b_up[i] + g.ainv[i][j] * b_dn[j];

  bd.b2 = ch.zero();
  bd.beta = ch.zero();
  for (std::size_t i = 0; i < n; ++i) {
    bd.b2 = bd.b2 + bd.b_up[i] * b_dn[i];
    bd.beta = bd.beta + b_dn[i] * ch.ys(i);
  }

  // nabla_j b_i = d_j b_i - b_m gamma^m_ij
  bd.cov_b.assign(n, ExprVec(n, ch.zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Expr v = differentiate(b_dn[i], ch.x[j]);
      for (std::size_t m = 0; m < n; ++m)
        v = v - b_dn[m] * gamma[m][i][j];
      bd.cov_b[i][j] = v;
    }

  Expr half = Expr::constant(ch.tab.get(), make_rat(1, 2));
  bd.r_dn.assign(n, ExprVec(n, ch.zero()));
  bd.s_dn.assign(n, ExprVec(n, ch.zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      bd.r_dn[i][j] = half * (bd.cov_b[i][j] + bd.cov_b[j][i]);
      bd.s_dn[i][j] = half * (bd.cov_b[i][j] - bd.cov_b[j][i]);
    }

  bd.r_j.assign(n, ch.zero());
  bd.s_j.assign(n, ch.zero());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      bd.r_j[j] = bd.r_j[j] + bd.b_up[i] * bd.r_dn[i][j];
      bd.s_j[j] = bd.s_j[j] + bd.b_up[i] * bd.s_dn[i][j];
    }

  // s^i_j = a^im s_mj, then transvect with y
  ExprMat s_up(n, ExprVec(n, ch.zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        s_up[i][j] = s_up[i][j] + g.ainv[i][m] * bd.s_dn[m][j];
  bd.si0 = transvect1(ch, s_up);

  bd.r00 = transvect2(ch, bd.r_dn);
  Expr r0 = ch.zero(), s0 = ch.zero();
  for (std::size_t j = 0; j < n; ++j) {
    r0 = r0 + bd.r_j[j] * ch.ys(j);
    s0 = s0 + bd.s_j[j] * ch.ys(j);
  }
  bd.r0 = std::move(r0);
  bd.s0 = std::move(s0);
  bd.gamma2 = bd.b2 * g.alpha2 - bd.beta * bd.beta;
  bd.b_dn = std::move(b_dn);
  return bd;
}

}  // namespace abaudit
