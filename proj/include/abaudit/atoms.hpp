#pragma once

#include "abaudit/expr.hpp"

namespace abaudit {

// The structural vocabulary: one shared symbol table whose atoms are the
// scalar invariants of a metric-plus-one-form geometry. Here alpha is an
// opaque grade-1 atom, so expressions stay honest rational functions and
// d/d(alpha) is an ordinary partial derivative; the square-root reading of
// alpha exists only on concrete charts.
//
// y-grades: alpha, beta, sigma0, s0, r0, si0, yi carry 1; r00 carries 2;
// everything else 0. The helper atoms La..Laaa stand for opaque derivative
// values and carry no grade at all, so grade-sensitive operations refuse
// them loudly instead of guessing.
struct AtomTable {
  SymbolTable tab;

  SymId alpha;   // length form, opaque grade-1 atom
  SymId beta;    // linear fiber form
  SymId b2;      // squared norm of the defining covector
  SymId eps, k;  // family parameters
  SymId n;       // dimension marker
  SymId sigma0;  // gradient of the scale function, transvected with y
  SymId s0;      // twist contraction s_i y^i
  SymId r0;      // deformation contraction r_i y^i
  SymId r00;     // deformation transvected twice
  SymId rho;     // gradient transvected with the covector
  SymId sigma;   // the scale function itself
  SymId E;       // unit atom, exp of sigma

  SymId yi;      // fiber direction, vector slot
  SymId bi;      // raised covector, vector slot
  SymId si0;     // twist with one free index
  SymId sigmai;  // raised gradient, vector slot

  SymId L;                  // opaque length value, for generic-length algebra
  SymId La, Lb, Laa, Laaa;  // opaque first and higher derivative values

  AtomTable();

  Expr s(SymId id) const { return Expr::sym(&tab, id); }
  Expr a() const { return Expr::sym(&tab, alpha); }
  Expr c(long num, long den = 1) const {
    return Expr::constant(&tab, make_rat(num, den));
  }
};

}  // namespace abaudit
