#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "abaudit/atoms.hpp"
#include "abaudit/scenario.hpp"

namespace abaudit {

// Outcome of deciding whether an expression is a homogeneous polynomial of
// some degree in the fiber variables. Zero passes every degree; failures
// carry a human-readable witness naming what broke and where.
enum class HpStatus { Hp, Zero, NotHomogeneous, NotPolynomial };

struct HpVerdict {
  HpStatus status = HpStatus::Zero;
  int degree = 0;       // meaningful when status == Hp
  std::string witness;  // empty for Hp and Zero

  bool accepts(int d) const {
    return status == HpStatus::Zero ||
           (status == HpStatus::Hp && degree == d);
  }
};

const char* to_string(HpStatus s);

// Decides from the y-grades registered in the expression's own table: the
// denominator must be free of graded symbols and the numerator must sit in
// a single grade. Works for atom-vocabulary and chart expressions alike.
// Expressions with opaque ungraded atoms cannot be decided and raise
// UngradedSymbol; specialize the length choice first.
HpVerdict hp_abstract(const AtomTable& at, const Expr& e);

// Vector form: every slot must pass, and slot grades must agree once the
// slot atom's own grade is counted in.
HpVerdict hp_abstract(const AtomTable& at, const VecExpr& v);

// Decides on a chart by pinning the base point: for each sample the
// expression is transferred to a fresh fiber-only table (the length root
// becomes a root over that table, the unit atom a seeded positive rational)
// and the result is inspected exactly. A nondegenerate pinned metric keeps
// the root genuinely irrational, so a surviving odd part refutes
// polynomiality outright. Verdicts from all samples are reconciled; any
// refutation wins and names its sample point.
HpVerdict hp_concrete(const Chart& ch, SymId unit, const Expr& e,
                      const std::vector<std::map<SymId, Rat>>& pts,
                      std::uint64_t seed);
HpVerdict hp_concrete(const Chart& ch, SymId unit, const ExprVec& components,
                      const std::vector<std::map<SymId, Rat>>& pts,
                      std::uint64_t seed);

// Independent homogeneity route: the Euler identity y^m d/dy^m f = d * f,
// checked symbolically on the chart.
bool euler_degree(const Chart& ch, const Expr& e, int d);

// Seeded rejection sampler for base points of a model: keeps drawing small
// rational coordinates until the metric and the package denominator both
// survive, and refuses after too many rejections.
std::vector<std::map<SymId, Rat>> sample_points(const Model& m,
                                                std::size_t count);

}  // namespace abaudit
