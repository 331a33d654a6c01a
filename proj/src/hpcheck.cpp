#include "abaudit/hpcheck.hpp"

#include <memory>
#include <random>
#include <sstream>

#include "abaudit/errors.hpp"

namespace abaudit {

namespace {

std::string point_label(const Chart& ch, const std::map<SymId, Rat>& pt) {
  std::string s = "(";
  for (std::size_t i = 0; i < ch.dim; ++i) {
    if (i) s += ", ";
    auto it = pt.find(ch.x[i]);
    s += it == pt.end() ? std::string("?") : it->second.get_str();
  }
  return s + ")";
}

// Verdict for an expression over a fiber-only table. All base data has been
// pinned already, so whatever survives is exact content in y alone.
HpVerdict classify_pinned(const SymbolTable& tab, const Expr& e) {
  HpVerdict v;
  if (e.is_zero()) {
    v.status = HpStatus::Zero;
    return v;
  }
  if (e.has_root_part()) {
    v.status = HpStatus::NotPolynomial;
    v.witness = "an irrational multiple of " + tab.root_name() + " survives";
    return v;
  }
  const RatExpr& r = e.even();
  if (!r.den().is_constant()) {
    v.status = HpStatus::NotPolynomial;
    v.witness = "fiber variables stay in the denominator " +
                to_string(tab, r.den());
    return v;
  }
  const auto& terms = r.num().terms();
  std::uint32_t d0 = terms.front().first.total_degree();
  for (const auto& [m, c] : terms) {
    (void)c;
    if (m.total_degree() != d0) {
      v.status = HpStatus::NotHomogeneous;
      v.witness = "degrees " + std::to_string(d0) + " and " +
                  std::to_string(m.total_degree()) + " both occur";
      return v;
    }
  }
  v.status = HpStatus::Hp;
  v.degree = static_cast<int>(d0);
  return v;
}

// Transfers e to a fresh table whose only symbols are the fiber variables,
// substituting the base point, the seeded unit value and (if present) the
// pinned length root.
Expr pin_expr(const Chart& ch, SymId unit, const Expr& e,
              const std::map<SymId, Rat>& pt, const Rat& unit_val,
              std::shared_ptr<SymbolTable>& out) {
  auto ptab = std::make_shared<SymbolTable>();
  std::vector<SymId> py;
  py.reserve(ch.dim);
  for (std::size_t i = 0; i < ch.dim; ++i)
    py.push_back(ptab->add("y" + std::to_string(i + 1), SymKind::Fiber, 1));

  SubstMap m;
  m.target = ptab.get();
  m.passthrough = false;
  for (std::size_t i = 0; i < ch.dim; ++i) {
    auto it = pt.find(ch.x[i]);
    if (it == pt.end())
      throw ValidationError("sample point misses coordinate " +
                            ch.tab->sym(ch.x[i]).name);
    m.bind[ch.x[i]] = Expr::constant(ptab.get(), it->second);
    m.bind[ch.y[i]] = Expr::sym(ptab.get(), py[i]);
  }
  if (unit != kNoSym) m.bind[unit] = Expr::constant(ptab.get(), unit_val);

  if (ch.tab->has_root()) {
    Expr sq(ch.tab.get(), ch.tab->root_square(), RatExpr());
    Expr pinned_sq = substitute(sq, m);
    if (pinned_sq.has_root_part() || !pinned_sq.even().is_poly())
      throw ValidationError("length square fails to pin at " +
                            point_label(ch, pt));
    ptab->set_root(ch.tab->root_name(), pinned_sq.even());
    m.root_image = Expr::root(ptab.get());
  }

  out = ptab;
  return substitute(e, m);
}

Rat seeded_unit_value(std::uint64_t seed, std::size_t idx) {
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * (idx + 1)));
  Rat num(static_cast<long>(2 + rng() % 7));
  Rat den(static_cast<long>(1 + rng() % 3));
  return num / den;
}

HpVerdict merge_samples(HpVerdict acc, bool& have, const HpVerdict& cur,
                        const std::string& where) {
  if (cur.status == HpStatus::NotPolynomial ||
      cur.status == HpStatus::NotHomogeneous) {
    HpVerdict v = cur;
    v.witness += where;
    return v;
  }
  if (cur.status == HpStatus::Zero) return acc;
  if (!have) {
    have = true;
    return cur;
  }
  if (acc.status == HpStatus::Hp && acc.degree != cur.degree) {
    HpVerdict v;
    v.status = HpStatus::NotHomogeneous;
    v.witness = "degree " + std::to_string(acc.degree) +
                " elsewhere but degree " + std::to_string(cur.degree) + where;
    return v;
  }
  return acc;
}

bool settled(const HpVerdict& v) {
  return v.status == HpStatus::NotPolynomial ||
         v.status == HpStatus::NotHomogeneous;
}

}  // namespace

const char* to_string(HpStatus s) {
  switch (s) {
    case HpStatus::Hp: return "hp";
    case HpStatus::Zero: return "zero";
    case HpStatus::NotHomogeneous: return "not-homogeneous";
    case HpStatus::NotPolynomial: return "not-polynomial";
  }
  return "?";
}

HpVerdict hp_abstract(const AtomTable&, const Expr& e) {
  HpVerdict v;
  if (e.is_zero()) {
    v.status = HpStatus::Zero;
    return v;
  }
  const SymbolTable& tab = *e.table();
  for (const RatExpr* r : {&e.even(), &e.odd()}) {
    for (SymId s : r->den().symbols()) {
      const Sym& sym = tab.sym(s);
      if (!sym.graded) throw UngradedSymbol(sym.name);
      if (sym.y_grade != 0) {
        v.status = HpStatus::NotPolynomial;
        v.witness = "denominator carries " + sym.name;
        return v;
      }
    }
  }
  auto parts = y_grade_split(e);
  if (parts.empty()) {
    v.status = HpStatus::Zero;
    return v;
  }
  if (parts.size() > 1) {
    auto it = parts.begin();
    int g1 = it->first;
    int g2 = std::next(it)->first;
    v.status = HpStatus::NotHomogeneous;
    v.witness = "grades " + std::to_string(g1) + " and " + std::to_string(g2) +
                " both occur";
    return v;
  }
  v.status = HpStatus::Hp;
  v.degree = parts.begin()->first;
  return v;
}

HpVerdict hp_abstract(const AtomTable& at, const VecExpr& v) {
  HpVerdict acc;
  bool have = false;
  for (const auto& [atom, coeff] : v.comps()) {
    HpVerdict cur = hp_abstract(at, coeff);
    if (cur.status == HpStatus::Hp)
      cur.degree += at.tab.sym(atom).y_grade;
    std::string where = " in the " + at.tab.sym(atom).name + " slot";
    acc = merge_samples(acc, have, cur, where);
    if (settled(acc)) return acc;
  }
  return acc;
}

HpVerdict hp_concrete(const Chart& ch, SymId unit, const Expr& e,
                      const std::vector<std::map<SymId, Rat>>& pts,
                      std::uint64_t seed) {
  if (pts.empty()) throw ValidationError("no sample points supplied");
  HpVerdict acc;
  bool have = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::shared_ptr<SymbolTable> ptab;
    Expr pe = pin_expr(ch, unit, e, pts[i], seeded_unit_value(seed, i), ptab);
    HpVerdict cur = classify_pinned(*ptab, pe);
    acc = merge_samples(acc, have, cur, " at " + point_label(ch, pts[i]));
    if (settled(acc)) return acc;
  }
  return acc;
}

HpVerdict hp_concrete(const Chart& ch, SymId unit, const ExprVec& components,
                      const std::vector<std::map<SymId, Rat>>& pts,
                      std::uint64_t seed) {
  HpVerdict acc;
  bool have = false;
  for (std::size_t c = 0; c < components.size(); ++c) {
    HpVerdict cur = hp_concrete(ch, unit, components[c], pts, seed);
    std::string where = " in component " + std::to_string(c + 1);
    acc = merge_samples(acc, have, cur, where);
    if (settled(acc)) return acc;
  }
  return acc;
}

bool euler_degree(const Chart& ch, const Expr& e, int d) {
  Expr radial = ch.zero();
  for (std::size_t m = 0; m < ch.dim; ++m)
    radial = radial + ch.ys(m) * differentiate(e, ch.y[m]);
  return radial == Expr::constant(ch.tab.get(), Rat(d)) * e;
}

std::vector<std::map<SymId, Rat>> sample_points(const Model& m,
                                                std::size_t count) {
  std::mt19937_64 rng(m.seed);
  std::vector<std::map<SymId, Rat>> out;
  std::size_t tries = 0;
  const std::size_t cap = 40 * (count + 1);
  while (out.size() < count) {
    if (++tries > cap)
      throw ValidationError("point sampling kept hitting degenerate points");
    std::map<SymId, Rat> pt;
    for (std::size_t i = 0; i < m.ch.dim; ++i) {
      long num = static_cast<long>(rng() % 11) - 5;
      long den = static_cast<long>(1 + rng() % 3);
      pt[m.ch.x[i]] = Rat(num) / Rat(den);
    }
    try {
      RootVal det = eval_point(m.g.det, pt);
      if (det.is_zero()) continue;
      std::shared_ptr<SymbolTable> ptab;
      Expr om = pin_expr(m.ch, m.E, m.omega, pt, Rat(1), ptab);
      if (om.is_zero()) continue;
    } catch (const DivisionByZero&) {
      continue;
    } catch (const ValidationError&) {
      continue;
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace abaudit
