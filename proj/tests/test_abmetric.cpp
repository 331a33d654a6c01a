#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "abaudit/abmetric.hpp"
#include "abaudit/errors.hpp"
#include "abaudit/riemann.hpp"

using namespace abaudit;

namespace {

// Shared flat fixture: Euclidean plane, covector (x2, 0), so the twist and
// deformation tensors are both nonzero while every Christoffel symbol
// vanishes. The table carries the length form as its quadratic root.
struct FlatFixture {
  Chart ch;
  MetricData g;
  ExprTen3 gamma;
  BetaData bd;
  Expr alpha;

  FlatFixture() : ch(make_chart(2)) {
    ExprMat a(2, ExprVec(2, ch.zero()));
    a[0][0] = ch.one();
    a[1][1] = ch.one();
    g = metric_data(ch, a);
    gamma = christoffel(ch, g);
    bd = beta_data(ch, g, gamma, {ch.xs(1), ch.zero()});
    ch.tab->set_root("alpha", g.alpha2.even());
    alpha = Expr::root(ch.tab.get());
  }

  Frame frame(const LPieces* lp, Rat eps, Rat k) const {
    Frame f;
    f.ch = &ch;
    f.alpha = alpha;
    f.bd = &bd;
    f.lp = lp;
    f.eps = eps;
    f.k = k;
    return f;
  }
};

}  // namespace

TEST_CASE("derived partials pass the divided-difference oracle") {
  // Independent route: for a rational function, the first derivative in u is
  // the diagonal value of the divided difference (f(u) - f(u2)) / (u - u2).
  // Nothing here reuses the differentiation code path being checked.
  SymbolTable t;
  SymId u = t.add("u", SymKind::Scalar, 0);
  SymId u2 = t.add("u2", SymKind::Scalar, 0);
  SymId v = t.add("v", SymKind::Scalar, 0);
  SymId v2 = t.add("v2", SymKind::Scalar, 0);
  SymId e = t.add("e", SymKind::Scalar, 0);
  SymId kk = t.add("kk", SymKind::Scalar, 0);
  auto S = [&](SymId s) { return Expr::sym(&t, s); };

  Expr L = S(u) + S(e) * S(v) + S(kk) * S(v) * S(v) / S(u);

  auto shift = [&](const Expr& f, SymId from, SymId to) {
    SubstMap m;
    m.bind[from] = S(to);
    return substitute(f, m);
  };
  auto diag = [&](const Expr& f, SymId twin, SymId base) {
    SubstMap m;
    m.bind[twin] = S(base);
    return substitute(f, m);
  };
  auto dd = [&](const Expr& f, SymId base, SymId twin) {
    return diag((f - shift(f, base, twin)) / (S(base) - S(twin)), twin, base);
  };

  Expr La_oracle = dd(L, u, u2);
  Expr Lb_oracle = dd(L, v, v2);
  Expr Laa_oracle = dd(La_oracle, u, u2);
  Expr Laaa_oracle = dd(Laa_oracle, u, u2);

  CHECK(differentiate(L, u) == La_oracle);
  CHECK(differentiate(L, v) == Lb_oracle);
  CHECK(differentiate(differentiate(L, u), u) == Laa_oracle);

  // Transport the oracle values onto the atom table and compare with the
  // package built there.
  AtomTable at;
  LPieces p = family_pieces(at);
  SubstMap into;
  into.target = &at.tab;
  into.passthrough = false;
  into.bind[u] = at.a();
  into.bind[v] = at.s(at.beta);
  into.bind[e] = at.s(at.eps);
  into.bind[kk] = at.s(at.k);
  CHECK(p.La == substitute(La_oracle, into));
  CHECK(p.Lb == substitute(Lb_oracle, into));
  CHECK(p.Laa == substitute(Laa_oracle, into));
  CHECK(p.Laaa == substitute(Laaa_oracle, into));
}

TEST_CASE("family length is absolutely homogeneous of degree one") {
  AtomTable at;
  LPieces p = family_pieces(at);
  CHECK(at.a() * p.La + at.s(at.beta) * p.Lb == p.L);

  // Mixed partials commute.
  CHECK(differentiate(p.La, at.beta) == differentiate(p.Lb, at.alpha));
  CHECK(differentiate(p.Laa, at.beta) ==
        differentiate(differentiate(p.Lb, at.alpha), at.alpha));
}

TEST_CASE("linear parameter pair collapses the package") {
  AtomTable at;
  LPieces p = family_pieces(at, at.c(1), at.c(0));
  Expr beta = at.s(at.beta);

  CHECK(p.La == at.c(1));
  CHECK(p.Lb == at.c(1));
  CHECK(p.Laa.is_zero());
  CHECK(p.Laaa.is_zero());
  CHECK(p.Omega == beta * beta);
  CHECK(p.bigA.is_zero());
  CHECK(p.bigB.is_zero());

  // The deviation drops to first-order data only: no covector slot, and the
  // classical short coefficients on the other two.
  VecExpr v = spray_dev(at, p);
  CHECK(v.coeff(at.bi).is_zero());
  CHECK(v.coeff(at.si0) == at.a());
  Expr expect_y = (at.s(at.r00) - at.c(2) * at.a() * at.s(at.s0)) /
                  (at.c(2) * p.L);
  CHECK(v.coeff(at.yi) == expect_y);
}

TEST_CASE("symbolic parameters specialize to each named pair") {
  AtomTable at;
  LPieces sym = family_pieces(at);
  const long pairs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {2, 1}};
  for (auto& pr : pairs) {
    SubstMap m;
    m.bind[at.eps] = at.c(pr[0]);
    m.bind[at.k] = at.c(pr[1]);
    LPieces direct = family_pieces(at, at.c(pr[0]), at.c(pr[1]));
    CHECK(substitute(sym.L, m) == direct.L);
    CHECK(substitute(sym.Omega, m) == direct.Omega);
    CHECK(substitute(sym.bigA, m) == direct.bigA);
    CHECK(substitute(sym.bigB, m) == direct.bigB);
    CHECK(substitute(cstar(at, sym), m) == cstar(at, direct));
  }
}

TEST_CASE("deviation vector reproduces the spray of the energy function") {
  // Oracle: with F = L^2/2 on a chart, the geodesic coefficients solve
  //   2 G^i = g^{ij} (y^r dy_j dx_r F - dx_j F),  g_ij = dy_i dy_j F,
  // and on a flat background the quadratic part vanishes, so 2 G^i must
  // equal twice the instantiated deviation. The left side below touches
  // only fiber differentiation and raw algebra on the chart.
  FlatFixture fx;
  const Chart& ch = fx.ch;

  const long pairs[3][2] = {{1, 0}, {1, 1}, {2, 1}};
  for (auto& pr : pairs) {
    CAPTURE(pr[0]);
    CAPTURE(pr[1]);
    Expr L = fx.alpha + Expr::constant(ch.tab.get(), Rat(pr[0])) * fx.bd.beta +
             Expr::constant(ch.tab.get(), Rat(pr[1])) * fx.bd.beta *
                 fx.bd.beta / fx.alpha;
    Expr F = L * L / Expr::constant(ch.tab.get(), Rat(2));

    ExprMat gf(2, ExprVec(2, ch.zero()));
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        gf[i][j] = differentiate(differentiate(F, ch.y[i]), ch.y[j]);

    // Adjugate inverse, deliberately not the shared inversion routine.
    Expr det = gf[0][0] * gf[1][1] - gf[0][1] * gf[1][0];
    ExprMat gi(2, ExprVec(2, ch.zero()));
    gi[0][0] = gf[1][1] / det;
    gi[1][1] = gf[0][0] / det;
    gi[0][1] = -gf[0][1] / det;
    gi[1][0] = -gf[1][0] / det;

    ExprVec rhs(2, ch.zero());
    for (std::size_t j = 0; j < 2; ++j) {
      Expr acc = ch.zero();
      for (std::size_t r = 0; r < 2; ++r)
        acc = acc + ch.ys(r) * differentiate(differentiate(F, ch.x[r]), ch.y[j]);
      rhs[j] = acc - differentiate(F, ch.x[j]);
    }

    ExprVec two_g(2, ch.zero());
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        two_g[i] = two_g[i] + gi[i][j] * rhs[j];

    AtomTable at;
    LPieces p = family_pieces(at, at.c(pr[0]), at.c(pr[1]));
    Frame f = fx.frame(&p, Rat(pr[0]), Rat(pr[1]));
    ExprVec dev = on_chart(at, f, spray_dev(at, p));

    for (std::size_t i = 0; i < 2; ++i)
      CHECK(two_g[i] == Expr::constant(ch.tab.get(), Rat(2)) * dev[i]);
  }
}

TEST_CASE("pair tensor and degree-two subject follow from the deviation") {
  FlatFixture fx;
  const Chart& ch = fx.ch;
  AtomTable at;
  LPieces p = family_pieces(at, at.c(1), at.c(1));
  Frame f = fx.frame(&p, Rat(1), Rat(1));

  ExprVec dev = on_chart(at, f, spray_dev(at, p));

  SUBCASE("antisymmetrized against the fiber direction") {
    ExprMat pair = on_chart(at, f, bij(at, p));
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(pair[i][j] == dev[i] * ch.ys(j) - dev[j] * ch.ys(i));
  }

  SUBCASE("dimension-weighted trace form") {
    // Oracle: (n+1) B^i - (dy_m B^m) y^i, assembled directly from the
    // instantiated deviation by fiber differentiation.
    Expr div = ch.zero();
    for (std::size_t m = 0; m < 2; ++m)
      div = div + differentiate(dev[m], ch.y[m]);
    ExprVec subject = on_chart(at, f, bim_m(at, p));
    Expr w = Expr::constant(ch.tab.get(), Rat(3));
    for (std::size_t i = 0; i < 2; ++i)
      CHECK(subject[i] == w * dev[i] - div * ch.ys(i));
  }
}

TEST_CASE("package and deviation components are fiber homogeneous") {
  AtomTable at;
  LPieces p = family_pieces(at);
  int gr = 0;

  REQUIRE(is_y_homogeneous(p.L, &gr));
  CHECK(gr == 1);
  REQUIRE(is_y_homogeneous(p.Omega, &gr));
  CHECK(gr == 2);
  REQUIRE(is_y_homogeneous(p.bigA, &gr));
  CHECK(gr == -1);
  REQUIRE(is_y_homogeneous(p.bigB, &gr));
  CHECK(gr == 2);
  REQUIRE(is_y_homogeneous(cstar(at, p), &gr));
  CHECK(gr == 2);

  // Each slot of the deviation and of the trace subject lands on total
  // grade two once the slot's own grade is added.
  auto slot_grade = [&](const VecExpr& v, SymId atom) {
    Expr c = v.coeff(atom);
    REQUIRE(is_y_homogeneous(c, &gr));
    return gr + at.tab.sym(atom).y_grade;
  };
  VecExpr dev = spray_dev(at, p);
  CHECK(slot_grade(dev, at.si0) == 2);
  CHECK(slot_grade(dev, at.yi) == 2);
  CHECK(slot_grade(dev, at.bi) == 2);
  VecExpr subject = bim_m(at, p);
  CHECK(slot_grade(subject, at.si0) == 2);
  CHECK(slot_grade(subject, at.yi) == 2);
  CHECK(slot_grade(subject, at.bi) == 2);
}

TEST_CASE("ratio form of the second length admits the same package") {
  AtomTable at;
  LPieces p = kropina_pieces(at);
  Expr a = at.a();
  Expr beta = at.s(at.beta);
  Expr b2 = at.s(at.b2);

  CHECK(p.La == at.c(2) * a / beta);
  CHECK(p.Lb == -(a * a) / (beta * beta));
  CHECK(p.Laa == at.c(2) / beta);
  CHECK(p.Laaa.is_zero());
  CHECK(a * p.La + beta * p.Lb == p.L);

  // Short forms found by direct substitution into the package definitions.
  CHECK(p.bigA.is_zero());
  CHECK(p.Omega == at.c(2) * b2 * a.pow(3) / beta);
  CHECK(p.bigB == at.c(8) * b2 * a.pow(5) / beta.pow(3));
}

TEST_CASE("frame bridge fails loudly on incomplete data") {
  FlatFixture fx;
  AtomTable at;
  LPieces p = family_pieces(at, at.c(1), at.c(1));

  SUBCASE("chart and covector data are mandatory") {
    Frame f;
    CHECK_THROWS_AS(frame_bindings(at, f), ValidationError);
  }

  SUBCASE("gradient slot needs components") {
    Frame f = fx.frame(&p, Rat(1), Rat(1));
    VecExpr v(&at.tab);
    v.set(at.sigmai, at.c(1));
    CHECK_THROWS_AS(on_chart(at, f, v), Error);
  }

  SUBCASE("helper atoms stay unbound without a length choice") {
    Frame f = fx.frame(nullptr, Rat(1), Rat(1));
    CHECK_THROWS_AS(on_chart(at, f, Expr::sym(&at.tab, at.La)), Error);
  }
}
