#pragma once

#include <map>
#include <vector>

#include "abaudit/atoms.hpp"
#include "abaudit/riemann.hpp"

namespace abaudit {

// L(alpha, beta) with its partials and the scalar package controlling the
// degree-two condition:
//   gamma2 = b2*alpha^2 - beta^2
//   Omega  = beta^2*La + alpha*gamma2*Laa
//   bigA   = alpha*La*Laaa + 3*La*Laa - 3*alpha*Laa^2
//   bigB   = alpha*beta*gamma2*La*Lb*Laaa
//            + beta*((3*gamma2 - beta^2)*La - 4*alpha*gamma2*Laa)*Lb*Laa
//            + Omega*L*Laa
// The partials are produced by formal differentiation of L, never typed in.
struct LPieces {
  Expr L, La, Lb, Laa, Laaa;
  Expr gamma2, Omega, bigA, bigB;
};

LPieces lpieces_from(const AtomTable& at, Expr L);

// alpha + eps*beta + k*beta^2/alpha. eps and k may be the parameter atoms
// or rational constants; the four named specializations are (1,0), (0,1),
// (1,1) and (2,1).
LPieces family_pieces(const AtomTable& at, Expr eps, Expr k);
LPieces family_pieces(const AtomTable& at);  // symbolic eps, k

// alpha^2/beta, rational in both arguments, handled by the same machinery;
// not part of the four-case family.
LPieces kropina_pieces(const AtomTable& at);

// The opaque vocabulary: L and its partials stay the atoms L, La, Lb, Laa,
// Laaa, and only the package is spelled out. Formulas built on top of this
// hold for any length function; they can be specialized later by
// substituting concrete partials for the atoms.
LPieces generic_pieces(const AtomTable& at);

// C* = alpha*beta*(r00*La - 2*alpha*s0*Lb) / (2*Omega)
Expr cstar(const AtomTable& at, const LPieces& p);

// The deviation of the spray from its quadratic part, over the vector
// slots {si0, yi, bi}:
//   (alpha*Lb/La) si0
//   + C* [ (beta*Lb/(alpha*L) - Laa/La) yi + (alpha^2*Laa/(beta*La)) bi ]
VecExpr spray_dev(const AtomTable& at, const LPieces& p);

// Antisymmetrized pair form: spray_dev against yi with the yi-slot dropped.
BivecExpr bij(const AtomTable& at, const LPieces& p);

// (n+1) B^i - (div B) y^i expanded over {si0, bi, yi}:
//   si0: (n+1)*alpha*Lb/La
//   bi : (n+1)*alpha^3*Laa*r00/(2*Omega) - (n+1)*alpha^4*Lb*Laa*s0/(La*Omega)
//   yi : alpha*beta*gamma2*bigA*r00/(2*Omega^2) - alpha^2*bigB*s0/(La*Omega^2)
//        - alpha^3*Laa*r0/Omega
VecExpr bim_m(const AtomTable& at, const LPieces& p);

// ---------------------------------------------------------------------------
// Bridge from the atom vocabulary to a concrete chart
// ---------------------------------------------------------------------------

// One consistent reading of the atoms on a chart: which expression plays
// alpha, which covector package supplies beta/b2/r/s data, and what the
// scale gradient contractions are. The sigma fields may be zero expressions
// when no scale change is in play; sigmai may be empty if the sigmai slot
// never occurs.
struct Frame {
  const Chart* ch = nullptr;
  Expr alpha;
  const BetaData* bd = nullptr;
  const LPieces* lp = nullptr;
  Expr sigma_fn, sigma0, rho;
  ExprVec sigmai;
  Expr unit;
  Rat eps, k;
};

// Scalar-atom bindings for substitute(); helper atoms La..Laaa are bound to
// the frame's family partials so generic-L formulas instantiate too.
SubstMap frame_bindings(const AtomTable& at, const Frame& f);

// Component images for the vector slots.
std::map<SymId, std::vector<Expr>> frame_components(const AtomTable& at,
                                                    const Frame& f);

Expr on_chart(const AtomTable& at, const Frame& f, const Expr& e);
ExprVec on_chart(const AtomTable& at, const Frame& f, const VecExpr& v);
ExprMat on_chart(const AtomTable& at, const Frame& f, const BivecExpr& v);

}  // namespace abaudit
