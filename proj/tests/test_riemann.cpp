#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "abaudit/errors.hpp"
#include "abaudit/parser.hpp"
#include "abaudit/riemann.hpp"

using namespace abaudit;

namespace {

Expr pe(const Chart& ch, const char* text) {
  return parse_expr(ch.tab.get(), text);
}

ExprMat parse_mat(const Chart& ch, const std::vector<std::vector<const char*>>& rows) {
  ExprMat out;
  for (const auto& row : rows) {
    out.emplace_back();
    for (const char* cell : row) out.back().push_back(pe(ch, cell));
  }
  return out;
}

// Warped 2d chart, metric diag(1, x1^2)
struct Warped {
  Chart ch = make_chart(2);
  MetricData g = metric_data(ch, parse_mat(ch, {{"1", "0"}, {"0", "x1^2"}}));
};

// Non-diagonal unimodular 2d chart
struct Skewed {
  Chart ch = make_chart(2);
  MetricData g =
      metric_data(ch, parse_mat(ch, {{"1", "x2"}, {"x2", "1 + x2^2"}}));
};

// 3d chart mixing a diagonal warp with an off-diagonal block
struct Mixed {
  Chart ch = make_chart(3);
  MetricData g = metric_data(
      ch, parse_mat(ch, {{"1", "0", "x2"},
                         {"0", "1 + x1^2", "0"},
                         {"x2", "0", "1 + x2^2"}}));
};

void check_inverse_identity(const Chart& ch, const MetricData& g) {
  for (std::size_t i = 0; i < ch.dim; ++i)
    for (std::size_t j = 0; j < ch.dim; ++j) {
      Expr acc = ch.zero();
      for (std::size_t m = 0; m < ch.dim; ++m)
        acc = acc + g.a[i][m] * g.ainv[m][j];
      CHECK(acc == (i == j ? ch.one() : ch.zero()));
    }
}

// nabla_k a_ij must vanish identically for the symbols of the same metric
void check_compatibility(const Chart& ch, const MetricData& g,
                         const ExprTen3& gam) {
  for (std::size_t k = 0; k < ch.dim; ++k)
    for (std::size_t i = 0; i < ch.dim; ++i)
      for (std::size_t j = 0; j < ch.dim; ++j) {
        Expr v = differentiate(g.a[i][j], ch.x[k]);
        for (std::size_t m = 0; m < ch.dim; ++m)
          v = v - g.a[m][j] * gam[m][i][k] - g.a[i][m] * gam[m][j][k];
        CHECK(v.is_zero());
      }
}

}  // namespace

TEST_CASE("exact inverse and determinant") {
  Skewed f;
  CHECK(f.g.det == f.ch.one());
  CHECK(f.g.ainv[0][0] == pe(f.ch, "1 + x2^2"));
  CHECK(f.g.ainv[0][1] == pe(f.ch, "-x2"));
  CHECK(f.g.ainv[1][0] == pe(f.ch, "-x2"));
  CHECK(f.g.ainv[1][1] == f.ch.one());
  check_inverse_identity(f.ch, f.g);

  Warped w;
  CHECK(w.g.det == pe(w.ch, "x1^2"));
  CHECK(w.g.alpha2 == pe(w.ch, "y1^2 + x1^2*y2^2"));
  check_inverse_identity(w.ch, w.g);

  Mixed m;
  CHECK(m.g.det == pe(m.ch, "1 + x1^2"));
  check_inverse_identity(m.ch, m.g);
}

TEST_CASE("christoffel matches hand values on a warped product") {
  Warped f;
  auto gam = christoffel(f.ch, f.g);
  CHECK(gam[0][1][1] == pe(f.ch, "-x1"));
  CHECK(gam[1][0][1] == pe(f.ch, "1/x1"));
  CHECK(gam[1][1][0] == pe(f.ch, "1/x1"));
  CHECK(gam[0][0][0].is_zero());
  CHECK(gam[0][0][1].is_zero());
  CHECK(gam[0][1][0].is_zero());
  CHECK(gam[1][0][0].is_zero());
  CHECK(gam[1][1][1].is_zero());
}

TEST_CASE("christoffel symbols are metric compatible and symmetric") {
  Skewed s;
  auto gs = christoffel(s.ch, s.g);
  check_compatibility(s.ch, s.g, gs);

  Mixed m;
  auto gm = christoffel(m.ch, m.g);
  check_compatibility(m.ch, m.g, gm);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) CHECK(gm[i][j][k] == gm[i][k][j]);
}

TEST_CASE("antisymmetric part of the covariant derivative is the curl") {
  // The symbol terms cancel in the antisymmetrization, so s_ij must agree
  // with the plain curl no matter the metric.
  Skewed f;
  auto gam = christoffel(f.ch, f.g);
  ExprVec b{pe(f.ch, "x1*x2"), pe(f.ch, "x1 + x2")};
  auto bd = beta_data(f.ch, f.g, gam, b);
  Expr half = Expr::constant(f.ch.tab.get(), make_rat(1, 2));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Expr curl = half * (differentiate(b[i], f.ch.x[j]) -
                          differentiate(b[j], f.ch.x[i]));
      CHECK(bd.s_dn[i][j] == curl);
    }

  // A gradient covector has no curl: its antisymmetric data all vanishes.
  ExprVec grad{pe(f.ch, "2*x1*x2"), pe(f.ch, "x1^2")};
  auto bg = beta_data(f.ch, f.g, gam, grad);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(bg.s_dn[i][j].is_zero());
  CHECK(bg.s0.is_zero());
  for (const Expr& c : bg.si0) CHECK(c.is_zero());
}

TEST_CASE("covariant derivative agrees with the lowered-symbol route") {
  // Independent recomputation: nabla_j b_i = d_j b_i - b^k G_kij with the
  // all-lower symbols G_kij read off the metric partials directly, skipping
  // christoffel() entirely.
  Mixed f;
  const std::size_t n = 3;
  auto gam = christoffel(f.ch, f.g);
  ExprVec b{pe(f.ch, "x3"), pe(f.ch, "x1*x2"), pe(f.ch, "1")};
  auto bd = beta_data(f.ch, f.g, gam, b);

  ExprVec b_up(n, f.ch.zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b_up[i] = b_up[i] + f.g.ainv[i][j] * b[j];

  Expr half = Expr::constant(f.ch.tab.get(), make_rat(1, 2));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Expr nab = differentiate(b[i], f.ch.x[j]);
      for (std::size_t k = 0; k < n; ++k) {
        Expr low = half * (differentiate(f.g.a[k][j], f.ch.x[i]) +
                           differentiate(f.g.a[k][i], f.ch.x[j]) -
                           differentiate(f.g.a[i][j], f.ch.x[k]));
        nab = nab - b_up[k] * low;
      }
      CHECK(bd.r_dn[i][j] + bd.s_dn[i][j] == nab);
    }
}

TEST_CASE("flat chart contractions") {
  Chart ch = make_chart(2);
  MetricData g = metric_data(ch, parse_mat(ch, {{"1", "0"}, {"0", "1"}}));
  auto gam = christoffel(ch, g);
  auto bd = beta_data(ch, g, gam, {pe(ch, "x2"), pe(ch, "0")});

  Expr half = Expr::constant(ch.tab.get(), make_rat(1, 2));
  CHECK(bd.beta == pe(ch, "x2*y1"));
  CHECK(bd.b2 == pe(ch, "x2^2"));
  CHECK(bd.r_dn[0][1] == half);
  CHECK(bd.r_dn[1][0] == half);
  CHECK(bd.r_dn[0][0].is_zero());
  CHECK(bd.s_dn[0][1] == half);
  CHECK(bd.s_dn[1][0] == -half);
  CHECK(bd.r00 == pe(ch, "y1*y2"));
  CHECK(bd.r0 == pe(ch, "x2*y2/2"));
  CHECK(bd.s0 == pe(ch, "x2*y2/2"));
  CHECK(bd.si0[0] == pe(ch, "y2/2"));
  CHECK(bd.si0[1] == pe(ch, "-y1/2"));
}

TEST_CASE("transvections are fiber homogeneous") {
  Skewed f;
  auto gam = christoffel(f.ch, f.g);
  auto bd = beta_data(f.ch, f.g, gam,
                      {pe(f.ch, "x1*x2"), pe(f.ch, "x1 + x2")});
  int grade = 0;
  REQUIRE(is_y_homogeneous(bd.r00, &grade));
  CHECK(grade == 2);
  REQUIRE(is_y_homogeneous(bd.s0, &grade));
  CHECK(grade == 1);
  for (const Expr& c : bd.si0) CHECK(is_y_homogeneous(c));
  CHECK(is_y_homogeneous(bd.b2, &grade));
  CHECK(grade == 0);
}

TEST_CASE("shape and content validation") {
  Chart ch = make_chart(2);
  CHECK_THROWS_AS(make_chart(1), ValidationError);
  CHECK_THROWS_AS(metric_data(ch, parse_mat(ch, {{"1", "x1"}, {"0", "1"}})),
                  ValidationError);
  CHECK_THROWS_AS(metric_data(ch, parse_mat(ch, {{"1", "0"}, {"0", "0"}})),
                  ValidationError);
  CHECK_THROWS_AS(metric_data(ch, parse_mat(ch, {{"y1", "0"}, {"0", "1"}})),
                  ValidationError);
  CHECK_THROWS_AS(metric_data(ch, {{ch.one()}}), ValidationError);

  MetricData g = metric_data(ch, parse_mat(ch, {{"1", "0"}, {"0", "1"}}));
  auto gam = christoffel(ch, g);
  CHECK_THROWS_AS(beta_data(ch, g, gam, {ch.one()}), ValidationError);
  CHECK_THROWS_AS(beta_data(ch, g, gam, {pe(ch, "y2"), ch.zero()}),
                  ValidationError);
}
