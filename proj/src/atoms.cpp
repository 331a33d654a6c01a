#include "abaudit/atoms.hpp"

namespace abaudit {

AtomTable::AtomTable() {
  alpha = tab.add("alpha", SymKind::Scalar, 1);
  beta = tab.add("beta", SymKind::Scalar, 1);
  b2 = tab.add("b2", SymKind::Scalar, 0);
  eps = tab.add("eps", SymKind::Scalar, 0);
  k = tab.add("k", SymKind::Scalar, 0);
  n = tab.add("n", SymKind::Scalar, 0);
  sigma0 = tab.add("sigma0", SymKind::Scalar, 1);
  s0 = tab.add("s0", SymKind::Scalar, 1);
  r0 = tab.add("r0", SymKind::Scalar, 1);
  r00 = tab.add("r00", SymKind::Scalar, 2);
  rho = tab.add("rho", SymKind::Scalar, 0);
  sigma = tab.add("sigma", SymKind::Scalar, 0);
  E = tab.add_unit("E");

  yi = tab.add("yi", SymKind::Vector, 1);
  bi = tab.add("bi", SymKind::Vector, 0);
  si0 = tab.add("si0", SymKind::Vector, 1);
  sigmai = tab.add("sigmai", SymKind::Vector, 0);

  L = tab.add_ungraded("L", SymKind::Scalar);
  La = tab.add_ungraded("La", SymKind::Scalar);
  Lb = tab.add_ungraded("Lb", SymKind::Scalar);
  Laa = tab.add_ungraded("Laa", SymKind::Scalar);
  Laaa = tab.add_ungraded("Laaa", SymKind::Scalar);

  Expr g2 = s(b2) * a() * a() - s(beta) * s(beta);
  tab.add_alias("gamma2", g2);

  // Names for the scalar package over the opaque derivative atoms, so
  // transcribed formulas can cite Omega, A, B directly.
  Expr om = s(beta) * s(beta) * s(La) + a() * g2 * s(Laa);
  tab.add_alias("Omega", om);
  tab.add_alias("A", a() * s(La) * s(Laaa) + c(3) * s(La) * s(Laa) -
                         c(3) * a() * s(Laa) * s(Laa));
  tab.add_alias("B",
                a() * s(beta) * g2 * s(La) * s(Lb) * s(Laaa) +
                    s(beta) *
                        ((c(3) * g2 - s(beta) * s(beta)) * s(La) -
                         c(4) * a() * g2 * s(Laa)) *
                        s(Lb) * s(Laa) +
                    om * s(L) * s(Laa));

  // Named fractions of the spray deviation and its conformal shift, again
  // so transcriptions can refer to them by name.
  tab.add_alias("Cstar", a() * s(beta) *
                             (s(r00) * s(La) - c(2) * a() * s(s0) * s(Lb)) /
                             (c(2) * om));
  tab.add_alias("Dstar",
                a() * s(beta) *
                    ((s(rho) * a() * a() - s(sigma0) * s(beta)) * s(La) -
                     a() * (s(b2) * s(sigma0) - s(rho) * s(beta)) * s(Lb)) /
                    (c(2) * om));
}

}  // namespace abaudit
