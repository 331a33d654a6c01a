#include "abaudit/conformal.hpp"

#include "abaudit/errors.hpp"

namespace abaudit {

ScaleData scale_data(const Chart& ch, const MetricData& g, const BetaData& bd,
                     Expr sigma) {
  const std::size_t n = ch.dim;
  if (sigma.table() != ch.tab.get())
    throw ValidationError("scale function built over a different table");

  ScaleData sd;
  sd.sigma = std::move(sigma);
  sd.sigma_dn.reserve(n);
  for (std::size_t j = 0; j < n; ++j)
    sd.sigma_dn.push_back(differentiate(sd.sigma, ch.x[j]));

  sd.sigma_up.assign(n, ch.zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      sd.sigma_up[i] = sd.sigma_up[i] + g.ainv[i][j] * sd.sigma_dn[j];

  sd.sigma0 = ch.zero();
  sd.rho = ch.zero();
  for (std::size_t j = 0; j < n; ++j) {
    sd.sigma0 = sd.sigma0 + sd.sigma_dn[j] * ch.ys(j);
    sd.rho = sd.rho + sd.sigma_dn[j] * bd.b_up[j];
  }
  return sd;
}

SymId install_unit(const Chart& ch, const ScaleData& sd) {
  SymbolTable* tab = ch.tab.get();
  SymId e = tab->add_unit("E");
  for (std::size_t j = 0; j < ch.dim; ++j)
    tab->set_unit_rule(ch.x[j], sd.sigma_dn[j]);
  return e;
}

ScaledGeom scaled_geom(const Chart& ch, SymId unit, const MetricData& g,
                       const ExprVec& b_dn) {
  const std::size_t n = ch.dim;
  ScaledGeom sg;
  sg.unit = Expr::sym(ch.tab.get(), unit);
  Expr e2 = sg.unit * sg.unit;

  ExprMat a2(n, ExprVec(n, ch.zero()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a2[i][j] = e2 * g.a[i][j];

  ExprVec b2(n, ch.zero());
  for (std::size_t i = 0; i < n; ++i) b2[i] = sg.unit * b_dn[i];

  sg.g = metric_data(ch, std::move(a2));
  sg.gamma = christoffel(ch, sg.g);
  sg.bd = beta_data(ch, sg.g, sg.gamma, std::move(b2));
  return sg;
}

SubstMap barred_scalars(const AtomTable& at) {
  const Expr e = at.s(at.E);
  const Expr half = at.c(1, 2);
  const Expr twist = half * (at.s(at.b2) * at.s(at.sigma0) -
                             at.s(at.rho) * at.s(at.beta));

  SubstMap m;
  m.target = &at.tab;
  m.bind[at.alpha] = e * at.a();
  m.bind[at.beta] = e * at.s(at.beta);
  m.bind[at.r00] =
      e * (at.s(at.r00) + at.s(at.rho) * at.a() * at.a() -
           at.s(at.sigma0) * at.s(at.beta));
  m.bind[at.s0] = at.s(at.s0) + twist;
  m.bind[at.r0] = at.s(at.r0) - twist;
  m.bind[at.L] = e * at.s(at.L);
  m.bind[at.Laa] = at.s(at.Laa) / e;
  m.bind[at.Laaa] = at.s(at.Laaa) / (e * e);
  return m;
}

std::map<SymId, VecExpr> barred_images(const AtomTable& at) {
  const Expr e = at.s(at.E);
  const Expr half = at.c(1, 2);

  std::map<SymId, VecExpr> im;
  VecExpr s(&at.tab);
  s.set(at.si0, at.c(1) / e);
  s.set(at.bi, half * at.s(at.sigma0) / e);
  s.set(at.sigmai, -half * at.s(at.beta) / e);
  im[at.si0] = std::move(s);

  VecExpr b(&at.tab);
  b.set(at.bi, at.c(1) / e);
  im[at.bi] = std::move(b);
  return im;
}

Expr barred(const AtomTable& at, const Expr& e) {
  return substitute(e, barred_scalars(at));
}

VecExpr barred(const AtomTable& at, const VecExpr& v) {
  return substitute_vec(v, barred_scalars(at), barred_images(at));
}

BivecExpr barred(const AtomTable& at, const BivecExpr& t) {
  return t.substituted(barred_scalars(at), barred_images(at));
}

Expr dstar(const AtomTable& at, const LPieces& p) {
  const Expr a = at.a();
  const Expr beta = at.s(at.beta);
  return a * beta *
         ((at.s(at.rho) * a * a - at.s(at.sigma0) * beta) * p.La -
          a * (at.s(at.b2) * at.s(at.sigma0) - at.s(at.rho) * beta) * p.Lb) /
         (at.c(2) * p.Omega);
}

VecExpr conformal_gap(const AtomTable& at, const LPieces& p) {
  VecExpr subject = bim_m(at, p);
  return barred(at, subject) - subject;
}

BivecExpr pair_gap(const AtomTable& at, const LPieces& p) {
  BivecExpr t = bij(at, p);
  return barred(at, t) - t;
}

GapPieces family_gap_pieces(const AtomTable& at) {
  const Expr a = at.a();
  const Expr beta = at.s(at.beta);
  const Expr b2 = at.s(at.b2);
  const Expr eps = at.s(at.eps);
  const Expr k = at.s(at.k);
  const Expr m = at.s(at.n) + at.c(1);
  const Expr s0g = at.s(at.sigma0);
  const Expr rho = at.s(at.rho);

  const Expr d1 = a * a - k * beta * beta;
  const Expr d2 = (at.c(1) + at.c(2) * k * b2) * a * a -
                  at.c(3) * k * beta * beta;
  const Expr grad_a = rho * a * a - s0g * beta;
  const Expr grad_b = b2 * s0g - rho * beta;
  const Expr g2 = b2 * a * a - beta * beta;

  GapPieces gp;

  gp.lead = VecExpr(&at.tab);
  Expr lead_c = m * (eps * a.pow(3) + at.c(2) * k * a * a * beta) / d1;
  gp.lead.set(at.bi, lead_c * s0g);
  gp.lead.set(at.sigmai, -lead_c * beta);

  gp.p1 = VecExpr(&at.tab);
  gp.p1.set(at.bi, at.c(2) * k * m * a * a * grad_a / d2 -
                       at.c(2) * k * m * a.pow(4) * (eps * a + at.c(2) * k * beta) *
                           grad_b / (d1 * d2));

  // Fiber-direction pieces; the middle one carries the eight-term bracket
  // of the package numerator.
  gp.p2 = VecExpr(&at.tab);
  gp.p2.set(at.yi, -at.c(12) * k * k * beta * g2 * grad_a / (d2 * d2));

  Expr bracket =
      (at.c(1) + at.c(2) * k * b2) * a.pow(4) * beta.pow(4) -
      at.c(6) * eps * k * b2 * a.pow(3) * beta.pow(5) -
      at.c(2) * k * (at.c(2) + at.c(7) * k * b2) * a * a * beta.pow(6) +
      at.c(6) * eps * k * a * beta.pow(7) + at.c(15) * k * k * beta.pow(8);
  gp.p3 = VecExpr(&at.tab);
  gp.p3.set(at.yi, -at.c(2) * k * a * a * grad_b * bracket /
                       (d1 * beta.pow(4) * d2 * d2));

  gp.p4 = VecExpr(&at.tab);
  gp.p4.set(at.yi, at.c(2) * k * a * a * grad_b / d2);

  return gp;
}

}  // namespace abaudit
