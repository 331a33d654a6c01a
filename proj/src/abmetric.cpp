#include "abaudit/abmetric.hpp"

#include "abaudit/errors.hpp"

namespace abaudit {

namespace {

Expr npl1(const AtomTable& at) { return at.s(at.n) + at.c(1); }

void fill_package(const AtomTable& at, LPieces& p) {
  const Expr a = at.a();
  const Expr beta = at.s(at.beta);
  p.gamma2 = at.s(at.b2) * a * a - beta * beta;
  p.Omega = beta * beta * p.La + a * p.gamma2 * p.Laa;
  p.bigA = a * p.La * p.Laaa + at.c(3) * p.La * p.Laa -
           at.c(3) * a * p.Laa * p.Laa;
  p.bigB = a * beta * p.gamma2 * p.La * p.Lb * p.Laaa +
           beta * ((at.c(3) * p.gamma2 - beta * beta) * p.La -
                   at.c(4) * a * p.gamma2 * p.Laa) *
               p.Lb * p.Laa +
           p.Omega * p.L * p.Laa;
}

}  // namespace

LPieces lpieces_from(const AtomTable& at, Expr L) {
  LPieces p;
  p.L = std::move(L);
  p.La = differentiate(p.L, at.alpha);
  p.Lb = differentiate(p.L, at.beta);
  p.Laa = differentiate(p.La, at.alpha);
  p.Laaa = differentiate(p.Laa, at.alpha);
  fill_package(at, p);
  return p;
}

LPieces generic_pieces(const AtomTable& at) {
  LPieces p;
  p.L = at.s(at.L);
  p.La = at.s(at.La);
  p.Lb = at.s(at.Lb);
  p.Laa = at.s(at.Laa);
  p.Laaa = at.s(at.Laaa);
  fill_package(at, p);
  return p;
}

LPieces family_pieces(const AtomTable& at, Expr eps, Expr k) {
  const Expr a = at.a();
  const Expr beta = at.s(at.beta);
  return lpieces_from(at, a + eps * beta + k * beta * beta / a);
}

LPieces family_pieces(const AtomTable& at) {
  return family_pieces(at, at.s(at.eps), at.s(at.k));
}

LPieces kropina_pieces(const AtomTable& at) {
  const Expr a = at.a();
  return lpieces_from(at, a * a / at.s(at.beta));
}

Expr cstar(const AtomTable& at, const LPieces& p) {
  const Expr a = at.a();
  return a * at.s(at.beta) *
         (at.s(at.r00) * p.La - at.c(2) * a * at.s(at.s0) * p.Lb) /
         (at.c(2) * p.Omega);
}

VecExpr spray_dev(const AtomTable& at, const LPieces& p) {
  const Expr a = at.a();
  const Expr beta = at.s(at.beta);
  const Expr cst = cstar(at, p);

  VecExpr v(&at.tab);
  v.set(at.si0, a * p.Lb / p.La);
  v.set(at.yi, cst * (beta * p.Lb / (a * p.L) - p.Laa / p.La));
  v.set(at.bi, cst * a * a * p.Laa / (beta * p.La));
  return v;
}

BivecExpr bij(const AtomTable& at, const LPieces& p) {
  const Expr a = at.a();
  BivecExpr t(&at.tab);
  t.add(at.si0, at.yi, a * p.Lb / p.La);
  t.add(at.bi, at.yi,
        cstar(at, p) * a * a * p.Laa / (at.s(at.beta) * p.La));
  return t;
}

VecExpr bim_m(const AtomTable& at, const LPieces& p) {
  const Expr a = at.a();
  const Expr beta = at.s(at.beta);
  const Expr r00 = at.s(at.r00);
  const Expr s0 = at.s(at.s0);
  const Expr m = npl1(at);
  const Expr om2 = p.Omega * p.Omega;

  VecExpr v(&at.tab);
  v.set(at.si0, m * a * p.Lb / p.La);
  v.set(at.bi, m * a.pow(3) * p.Laa * r00 / (at.c(2) * p.Omega) -
                   m * a.pow(4) * p.Lb * p.Laa * s0 / (p.La * p.Omega));
  v.set(at.yi, a * beta * p.gamma2 * p.bigA * r00 / (at.c(2) * om2) -
                   a * a * p.bigB * s0 / (p.La * om2) -
                   a.pow(3) * p.Laa * at.s(at.r0) / p.Omega);
  return v;
}

SubstMap frame_bindings(const AtomTable& at, const Frame& f) {
  if (f.ch == nullptr || f.bd == nullptr)
    throw ValidationError("frame: chart and covector data are required");
  const Chart& ch = *f.ch;
  const SymbolTable* target = ch.tab.get();
  auto cst = [&](const Rat& r) { return Expr::constant(target, r); };

  SubstMap m;
  m.target = target;
  m.passthrough = false;
  m.bind[at.alpha] = f.alpha;
  m.bind[at.beta] = f.bd->beta;
  m.bind[at.b2] = f.bd->b2;
  m.bind[at.eps] = cst(f.eps);
  m.bind[at.k] = cst(f.k);
  m.bind[at.n] = cst(Rat(static_cast<long>(ch.dim)));
  m.bind[at.s0] = f.bd->s0;
  m.bind[at.r0] = f.bd->r0;
  m.bind[at.r00] = f.bd->r00;
  m.bind[at.sigma0] = f.sigma0.table() ? f.sigma0 : ch.zero();
  m.bind[at.rho] = f.rho.table() ? f.rho : ch.zero();
  m.bind[at.sigma] = f.sigma_fn.table() ? f.sigma_fn : ch.zero();
  m.bind[at.E] = f.unit.table() ? f.unit : ch.one();

  // Helper atoms resolve through the frame's own L (if any) under the base
  // bindings above, so generic-L formulas land on the chart too.
  if (f.lp != nullptr) {
    m.bind[at.La] = substitute(f.lp->La, m);
    m.bind[at.Lb] = substitute(f.lp->Lb, m);
    m.bind[at.Laa] = substitute(f.lp->Laa, m);
    m.bind[at.Laaa] = substitute(f.lp->Laaa, m);
  }
  return m;
}

std::map<SymId, std::vector<Expr>> frame_components(const AtomTable& at,
                                                    const Frame& f) {
  if (f.ch == nullptr || f.bd == nullptr)
    throw ValidationError("frame: chart and covector data are required");
  std::map<SymId, std::vector<Expr>> comps;
  std::vector<Expr> ys;
  for (std::size_t i = 0; i < f.ch->dim; ++i) ys.push_back(f.ch->ys(i));
  comps[at.yi] = std::move(ys);
  comps[at.bi] = f.bd->b_up;
  comps[at.si0] = f.bd->si0;
  if (!f.sigmai.empty()) comps[at.sigmai] = f.sigmai;
  return comps;
}

Expr on_chart(const AtomTable& at, const Frame& f, const Expr& e) {
  return substitute(e, frame_bindings(at, f));
}

ExprVec on_chart(const AtomTable& at, const Frame& f, const VecExpr& v) {
  return instantiate(v, frame_bindings(at, f), frame_components(at, f));
}

ExprMat on_chart(const AtomTable& at, const Frame& f, const BivecExpr& v) {
  return v.instantiate(frame_bindings(at, f), frame_components(at, f));
}

}  // namespace abaudit
