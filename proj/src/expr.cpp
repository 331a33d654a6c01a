#include "abaudit/expr.hpp"

#include <algorithm>
#include <cmath>

namespace abaudit {

// ---------------------------------------------------------------------------
// ExprTree
// ---------------------------------------------------------------------------

ExprTreePtr ExprTree::num(Rat v) {
  auto t = std::make_shared<ExprTree>();
  t->op = Op::Num;
  t->value = std::move(v);
  return t;
}

ExprTreePtr ExprTree::symbol(SymId s) {
  auto t = std::make_shared<ExprTree>();
  t->op = Op::Sym;
  t->sym = s;
  return t;
}

ExprTreePtr ExprTree::root() {
  auto t = std::make_shared<ExprTree>();
  t->op = Op::Root;
  return t;
}

ExprTreePtr ExprTree::alias(std::string name) {
  auto t = std::make_shared<ExprTree>();
  t->op = Op::Alias;
  t->name = std::move(name);
  return t;
}

ExprTreePtr ExprTree::neg(ExprTreePtr x) {
  auto t = std::make_shared<ExprTree>();
  t->op = Op::Neg;
  t->a = std::move(x);
  return t;
}

ExprTreePtr ExprTree::binary(Op o, ExprTreePtr x, ExprTreePtr y) {
  auto t = std::make_shared<ExprTree>();
  t->op = o;
  t->a = std::move(x);
  t->b = std::move(y);
  return t;
}

ExprTreePtr ExprTree::pow(ExprTreePtr x, std::int64_t e) {
  auto t = std::make_shared<ExprTree>();
  t->op = Op::Pow;
  t->a = std::move(x);
  t->expo = e;
  return t;
}

// ---------------------------------------------------------------------------
// Expr
// ---------------------------------------------------------------------------

namespace {

void require_same_table(const Expr& a, const Expr& b) {
  if (a.table() != b.table())
    throw Error("expressions built over different symbol tables");
}

}  // namespace

Expr::Expr(const SymbolTable* tab, RatExpr even, RatExpr odd)
    : tab_(tab), even_(std::move(even)), odd_(std::move(odd)) {
  if (!odd_.is_zero() && (tab_ == nullptr || !tab_->has_root()))
    throw Error("odd part without a root on the table");
}

Expr Expr::constant(const SymbolTable* tab, Rat c) {
  return Expr(tab, RatExpr(std::move(c)), RatExpr{});
}

Expr Expr::sym(const SymbolTable* tab, SymId s) {
  if (tab == nullptr) throw Error("null table");
  (void)tab->sym(s);  // range check
  return Expr(tab, RatExpr(Poly::var(s)), RatExpr{});
}

Expr Expr::sym(const SymbolTable* tab, const std::string& name) {
  if (tab == nullptr) throw Error("null table");
  SymId s = tab->id(name);
  if (s != kNoSym) return sym(tab, s);
  if (const Expr* a = tab->alias(name)) return *a;
  if (tab->has_root() && tab->root_name() == name) return root(tab);
  throw Error("unknown symbol '" + name + "'");
}

Expr Expr::root(const SymbolTable* tab) {
  if (tab == nullptr || !tab->has_root()) throw Error("table has no root");
  return Expr(tab, RatExpr{}, RatExpr(Rat(1)));
}

Expr operator+(const Expr& a, const Expr& b) {
  require_same_table(a, b);
  return Expr(a.table(), a.even() + b.even(), a.odd() + b.odd());
}

Expr Expr::operator-() const { return Expr(tab_, -even_, -odd_); }

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  require_same_table(a, b);
  if (a.odd().is_zero() && b.odd().is_zero())
    return Expr(a.table(), a.even() * b.even(), RatExpr{});
  const RatExpr& q = a.table()->root_square();
  return Expr(a.table(), a.even() * b.even() + a.odd() * b.odd() * q,
              a.even() * b.odd() + a.odd() * b.even());
}

Expr operator/(const Expr& a, const Expr& b) {
  require_same_table(a, b);
  if (b.is_zero()) throw DivisionByZero(to_string(b));
  if (b.odd().is_zero())
    return Expr(a.table(), a.even() / b.even(), a.odd() / b.even());
  // conjugate: 1/(p + q r) = (p - q r) / (p^2 - q^2 r^2)
  const RatExpr& q2 = a.table()->root_square();
  RatExpr norm = b.even() * b.even() - b.odd() * b.odd() * q2;
  if (norm.is_zero())
    throw SingularPoint(
        "quadratic extension degenerates: the root's square is a perfect "
        "square of a rational function here");
  Expr conj(a.table(), b.even() / norm, -(b.odd() / norm));
  return a * conj;
}

Expr Expr::pow(std::int64_t e) const {
  if (e < 0) {
    Expr inv = Expr::constant(tab_, Rat(1)) / *this;
    return inv.pow(-e);
  }
  Expr out = Expr::constant(tab_, Rat(1));
  Expr base = *this;
  auto n = static_cast<std::uint64_t>(e);
  while (n > 0) {
    if (n & 1u) out = out * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return out;
}

bool operator==(const Expr& a, const Expr& b) {
  require_same_table(a, b);
  return a.even() == b.even() && a.odd() == b.odd();
}

Expr operator*(const Rat& c, const Expr& e) {
  return Expr::constant(e.table(), c) * e;
}

Expr operator+(const Expr& e, const Rat& c) {
  return e + Expr::constant(e.table(), c);
}

Expr operator-(const Expr& e, const Rat& c) {
  return e - Expr::constant(e.table(), c);
}

// ---------------------------------------------------------------------------
// normalize
// ---------------------------------------------------------------------------

Expr normalize(const SymbolTable* tab, const ExprTreePtr& tree) {
  if (tab == nullptr) throw Error("null table");
  if (!tree) throw Error("empty expression tree");
  using Op = ExprTree::Op;
  switch (tree->op) {
    case Op::Num:
      return Expr::constant(tab, tree->value);
    case Op::Sym:
      return Expr::sym(tab, tree->sym);
    case Op::Root:
      return Expr::root(tab);
    case Op::Alias: {
      if (const Expr* a = tab->alias(tree->name)) return *a;
      throw Error("unknown alias '" + tree->name + "'");
    }
    case Op::Neg:
      return -normalize(tab, tree->a);
    case Op::Add:
      return normalize(tab, tree->a) + normalize(tab, tree->b);
    case Op::Sub:
      return normalize(tab, tree->a) - normalize(tab, tree->b);
    case Op::Mul:
      return normalize(tab, tree->a) * normalize(tab, tree->b);
    case Op::Div:
      return normalize(tab, tree->a) / normalize(tab, tree->b);
    case Op::Pow:
      return normalize(tab, tree->a).pow(tree->expo);
  }
  throw Error("corrupt expression tree");
}

// ---------------------------------------------------------------------------
// differentiation
// ---------------------------------------------------------------------------

namespace {

// d(p)/d(s) with unit-atom rules applied; the rule part multiplies by a
// general expression, so the result lives at the Expr level.
Expr poly_diff(const SymbolTable* tab, const Poly& p, SymId s) {
  Expr out(tab, RatExpr(p.derivative(s)), RatExpr{});
  SymId u = tab->unit();
  if (u == kNoSym || tab->sym(s).kind != SymKind::Coordinate) return out;
  const Expr* dlog = tab->unit_rule(s);
  if (dlog == nullptr) return out;
  std::vector<std::pair<Monomial, Rat>> scaled;
  for (const auto& [m, c] : p.terms()) {
    std::uint32_t k = m.degree_of(u);
    if (k > 0) scaled.emplace_back(m, c * Rat(static_cast<long>(k)));
  }
  if (scaled.empty()) return out;
  Expr unit_part(tab, RatExpr(Poly::from_terms(std::move(scaled))), RatExpr{});
  return out + unit_part * (*dlog);
}

Expr rat_diff(const SymbolTable* tab, const RatExpr& r, SymId s) {
  Expr dn = poly_diff(tab, r.num(), s);
  if (r.is_poly()) return dn;
  Expr dd = poly_diff(tab, r.den(), s);
  Expr den(tab, RatExpr(r.den()), RatExpr{});
  Expr num(tab, RatExpr(r.num()), RatExpr{});
  return (dn * den - num * dd) / (den * den);
}

}  // namespace

Expr differentiate(const Expr& e, SymId s) {
  const SymbolTable* tab = e.table();
  if (tab == nullptr) throw Error("null table");
  SymKind k = tab->sym(s).kind;
  if (k == SymKind::Vector || k == SymKind::Unit)
    throw UnsupportedDerivative(tab->sym(s).name);
  Expr out = rat_diff(tab, e.even(), s);
  if (!e.odd().is_zero()) {
    const RatExpr& q = tab->root_square();
    Expr dq = rat_diff(tab, q, s);
    Expr odd_e(tab, e.odd(), RatExpr{});
    Expr qe(tab, q, RatExpr{});
    // d(o * r) = (d o) r + o * d(r^2)/(2 r) = [d o + o * d(q)/(2 q)] * r
    Expr coeff = rat_diff(tab, e.odd(), s) + odd_e * dq / (Rat(2) * qe);
    out = out + coeff * Expr::root(tab);
  }
  return out;
}

// ---------------------------------------------------------------------------
// substitution
// ---------------------------------------------------------------------------

namespace {

struct Substituter {
  const SymbolTable* src;
  const SubstMap& s;
  std::map<SymId, Expr> memo;

  const Expr& image(SymId id) {
    auto it = memo.find(id);
    if (it != memo.end()) return it->second;
    auto bound = s.bind.find(id);
    Expr img;
    if (bound != s.bind.end()) {
      img = bound->second;
    } else if (s.passthrough) {
      img = Expr::sym(s.target, id);  // throws if the target lacks the id
    } else {
      throw Error("substitution leaves symbol '" + src->sym(id).name +
                  "' unbound");
    }
    return memo.emplace(id, std::move(img)).first->second;
  }

  Expr poly(const Poly& p) {
    Expr acc = Expr::constant(s.target, Rat(0));
    for (const auto& [m, c] : p.terms()) {
      Expr t = Expr::constant(s.target, c);
      for (const auto& f : m.factors())
        t = t * image(f.sym).pow(f.exp);
      acc = acc + t;
    }
    return acc;
  }

  Expr rat(const RatExpr& r) {
    if (r.is_poly()) return poly(r.num());
    Expr d = poly(r.den());
    if (d.is_zero()) throw DivisionByZero(to_string(*src, r.den()));
    return poly(r.num()) / d;
  }
};

}  // namespace

Expr substitute(const Expr& e, const SubstMap& s) {
  const SymbolTable* src = e.table();
  if (src == nullptr) throw Error("null table");
  const SymbolTable* target = s.target ? s.target : src;
  SubstMap local = s;
  local.target = target;
  Substituter sub{src, local, {}};
  Expr out = sub.rat(e.even());
  if (!e.odd().is_zero()) {
    Expr root_img;
    if (local.root_image) {
      root_img = *local.root_image;
    } else {
      // keeping the root only makes sense if the rewrite is untouched
      for (const auto& [id, img] : local.bind)
        if (src->root_square().contains(id))
          throw Error(
              "substitution binds a symbol occurring in the root's square; "
              "pass an explicit root_image");
      if (target != src && !target->has_root())
        throw Error("target table has no root; pass root_image");
      root_img = Expr::root(target);
    }
    out = out + sub.rat(e.odd()) * root_img;
  }
  return out;
}

// ---------------------------------------------------------------------------
// grading
// ---------------------------------------------------------------------------

int monomial_y_grade(const SymbolTable& tab, const Monomial& m) {
  int g = 0;
  for (const auto& f : m.factors()) {
    const Sym& s = tab.sym(f.sym);
    if (!s.graded) throw UngradedSymbol(s.name);
    g += s.y_grade * static_cast<int>(f.exp);
  }
  return g;
}

namespace {

// component grades of a reduced fraction; denominator must be homogeneous
std::map<int, RatExpr> rat_grade_split(const SymbolTable& tab,
                                       const RatExpr& r) {
  std::map<int, RatExpr> out;
  if (r.is_zero()) return out;
  int dg = 0;
  bool first = true;
  for (const auto& [m, c] : r.den().terms()) {
    int g = monomial_y_grade(tab, m);
    if (first) dg = g, first = false;
    else if (g != dg)
      throw GradeError("denominator is not y-homogeneous; grade split undefined");
  }
  std::map<int, std::vector<std::pair<Monomial, Rat>>> buckets;
  for (const auto& [m, c] : r.num().terms())
    buckets[monomial_y_grade(tab, m)].emplace_back(m, c);
  for (auto& [g, terms] : buckets)
    out.emplace(g - dg,
                RatExpr::make(Poly::from_terms(std::move(terms)), r.den()));
  return out;
}

}  // namespace

std::map<int, Expr> y_grade_split(const Expr& e) {
  const SymbolTable* tab = e.table();
  if (tab == nullptr) throw Error("null table");
  std::map<int, Expr> out;
  for (auto& [g, comp] : rat_grade_split(*tab, e.even()))
    out.emplace(g, Expr(tab, std::move(comp), RatExpr{}));
  for (auto& [g, comp] : rat_grade_split(*tab, e.odd())) {
    // the root is y-homogeneous of grade 1
    Expr part(tab, RatExpr{}, std::move(comp));
    auto [it, fresh] = out.emplace(g + 1, part);
    if (!fresh) it->second = it->second + part;
  }
  return out;
}

bool is_y_homogeneous(const Expr& e, int* grade_out) {
  auto split = y_grade_split(e);
  if (split.size() > 1) return false;
  if (grade_out) *grade_out = split.empty() ? 0 : split.begin()->first;
  return true;
}

// ---------------------------------------------------------------------------
// exact point evaluation
// ---------------------------------------------------------------------------

RootVal RootVal::normal() const {
  if (sgn(q) == 0) return RootVal{p, Rat(0), Rat(0)};
  if (auto s = rat_sqrt(disc)) return RootVal{p + q * *s, Rat(0), Rat(0)};
  return *this;
}

bool RootVal::is_zero() const {
  RootVal n = normal();
  return sgn(n.p) == 0 && sgn(n.q) == 0;
}

double RootVal::to_double() const {
  return p.get_d() + q.get_d() * std::sqrt(disc.get_d());
}

bool operator==(const RootVal& a, const RootVal& b) {
  RootVal x = a.normal(), y = b.normal();
  if (x.p != y.p) return false;
  if (sgn(x.q) != sgn(y.q)) return false;
  if (sgn(x.q) == 0) return true;
  // q*sqrt(d) == q'*sqrt(d') for same-sign q, q' iff q^2 d == q'^2 d'
  return x.q * x.q * x.disc == y.q * y.q * y.disc;
}

RootVal eval_point(const Expr& e, const std::map<SymId, Rat>& point) {
  const SymbolTable* tab = e.table();
  if (tab == nullptr) throw Error("null table");
  RootVal out{e.even().eval(point), Rat(0), Rat(0)};
  if (!e.odd().is_zero()) {
    out.q = e.odd().eval(point);
    if (sgn(out.q) != 0) {
      out.disc = tab->root_square().eval(point);
      if (sgn(out.disc) < 0)
        throw SingularPoint("root square evaluates negative at the point");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// VecExpr
// ---------------------------------------------------------------------------

Expr VecExpr::coeff(SymId atom) const {
  auto it = comp_.find(atom);
  if (it != comp_.end()) return it->second;
  return Expr::constant(tab_, Rat(0));
}

void VecExpr::set(SymId atom, Expr c) {
  if (tab_ == nullptr) throw Error("null table");
  if (tab_->sym(atom).kind != SymKind::Vector)
    throw Error("'" + tab_->sym(atom).name + "' is not a vector atom");
  if (c.is_zero()) comp_.erase(atom);
  else comp_[atom] = std::move(c);
}

VecExpr operator+(const VecExpr& a, const VecExpr& b) {
  if (a.tab_ != b.tab_) throw Error("vector expressions over different tables");
  VecExpr out = a;
  for (const auto& [atom, c] : b.comp_) {
    auto it = out.comp_.find(atom);
    if (it == out.comp_.end()) out.comp_.emplace(atom, c);
    else {
      it->second = it->second + c;
      if (it->second.is_zero()) out.comp_.erase(it);
    }
  }
  return out;
}

VecExpr VecExpr::operator-() const {
  VecExpr out(tab_);
  for (const auto& [atom, c] : comp_) out.comp_.emplace(atom, -c);
  return out;
}

VecExpr operator-(const VecExpr& a, const VecExpr& b) { return a + (-b); }

VecExpr operator*(const Expr& c, const VecExpr& v) {
  VecExpr out(v.tab_);
  if (c.is_zero()) return out;
  for (const auto& [atom, co] : v.comp_) {
    Expr p = c * co;
    if (!p.is_zero()) out.comp_.emplace(atom, std::move(p));
  }
  return out;
}

bool operator==(const VecExpr& a, const VecExpr& b) {
  if (a.tab_ != b.tab_) throw Error("vector expressions over different tables");
  if (a.comp_.size() != b.comp_.size()) return false;
  for (auto ia = a.comp_.begin(), ib = b.comp_.begin(); ia != a.comp_.end();
       ++ia, ++ib) {
    if (ia->first != ib->first || !(ia->second == ib->second)) return false;
  }
  return true;
}

namespace {

// partition one reduced fraction by vector content
void collect_rat(const SymbolTable& tab, const RatExpr& r, bool odd_slot,
                 VecCollect& out,
                 std::map<SymId, std::pair<RatExpr, RatExpr>>& acc,
                 std::pair<RatExpr, RatExpr>& scalar_acc) {
  if (r.is_zero()) return;
  auto is_vec = [&](SymId s) { return tab.sym(s).kind == SymKind::Vector; };
  for (SymId s : r.den().symbols())
    if (is_vec(s)) {
      out.illformed.push_back(Expr(&tab, odd_slot ? RatExpr{} : r,
                                   odd_slot ? r : RatExpr{}));
      return;
    }
  std::map<SymId, std::vector<std::pair<Monomial, Rat>>> vec_terms;
  std::vector<std::pair<Monomial, Rat>> scalar_terms;
  std::vector<std::pair<Monomial, Rat>> bad_terms;
  for (const auto& [m, c] : r.num().terms()) {
    SymId atom = kNoSym;
    std::uint32_t vdeg = 0;
    for (const auto& f : m.factors())
      if (is_vec(f.sym)) {
        vdeg += f.exp;
        atom = f.sym;
      }
    if (vdeg == 0) scalar_terms.emplace_back(m, c);
    else if (vdeg == 1)
      vec_terms[atom].emplace_back(*Monomial::div(m, Monomial::var(atom)), c);
    else bad_terms.emplace_back(m, c);
  }
  auto put = [&](std::pair<RatExpr, RatExpr>& slot, Poly num) {
    RatExpr val = RatExpr::make(std::move(num), r.den());
    (odd_slot ? slot.second : slot.first) += val;
  };
  if (!scalar_terms.empty()) put(scalar_acc, Poly::from_terms(std::move(scalar_terms)));
  for (auto& [atom, terms] : vec_terms)
    put(acc[atom], Poly::from_terms(std::move(terms)));
  if (!bad_terms.empty()) {
    RatExpr bad = RatExpr::make(Poly::from_terms(std::move(bad_terms)), r.den());
    out.illformed.push_back(
        Expr(&tab, odd_slot ? RatExpr{} : bad, odd_slot ? bad : RatExpr{}));
  }
}

}  // namespace

VecCollect collect_vector(const Expr& e) {
  const SymbolTable* tab = e.table();
  if (tab == nullptr) throw Error("null table");
  VecCollect out;
  out.vec = VecExpr(tab);
  std::map<SymId, std::pair<RatExpr, RatExpr>> acc;
  std::pair<RatExpr, RatExpr> scalar_acc;
  collect_rat(*tab, e.even(), false, out, acc, scalar_acc);
  collect_rat(*tab, e.odd(), true, out, acc, scalar_acc);
  out.scalar = Expr(tab, scalar_acc.first, scalar_acc.second);
  for (auto& [atom, parts] : acc)
    out.vec.set(atom, Expr(tab, parts.first, parts.second));
  return out;
}

VecExpr substitute_vec(const VecExpr& v, const SubstMap& scalars,
                       const std::map<SymId, VecExpr>& images) {
  const SymbolTable* target =
      scalars.target ? scalars.target : v.table();
  VecExpr out(target);
  for (const auto& [atom, c] : v.comps()) {
    Expr cs = substitute(c, scalars);
    auto img = images.find(atom);
    if (img == images.end()) {
      VecExpr one(target);
      one.set(target == v.table() ? atom : target->id(v.table()->sym(atom).name),
              Expr::constant(target, Rat(1)));
      out = out + cs * one;
    } else {
      out = out + cs * img->second;
    }
  }
  return out;
}

std::vector<Expr> instantiate(const VecExpr& v, const SubstMap& scalars,
                              const std::map<SymId, std::vector<Expr>>& comps) {
  std::size_t n = 0;
  for (const auto& [atom, list] : comps) n = std::max(n, list.size());
  const SymbolTable* target = scalars.target ? scalars.target : v.table();
  std::vector<Expr> out(n, Expr::constant(target, Rat(0)));
  for (const auto& [atom, c] : v.comps()) {
    auto it = comps.find(atom);
    if (it == comps.end())
      throw Error("no components provided for vector atom '" +
                  v.table()->sym(atom).name + "'");
    if (it->second.size() != n)
      throw Error("component lists disagree on dimension");
    Expr cs = substitute(c, scalars);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = out[i] + cs * it->second[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// BivecExpr
// ---------------------------------------------------------------------------

void BivecExpr::add(SymId u, SymId v, Expr c) {
  if (tab_ == nullptr) throw Error("null table");
  if (u == v) return;  // u^i u^j - u^j u^i = 0
  if (tab_->sym(u).kind != SymKind::Vector ||
      tab_->sym(v).kind != SymKind::Vector)
    throw Error("bivector components must be vector atoms");
  if (u > v) {
    std::swap(u, v);
    c = -c;
  }
  auto key = std::make_pair(u, v);
  auto it = comp_.find(key);
  if (it == comp_.end()) {
    if (!c.is_zero()) comp_.emplace(key, std::move(c));
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) comp_.erase(it);
  }
}

BivecExpr operator+(const BivecExpr& a, const BivecExpr& b) {
  if (a.tab_ != b.tab_) throw Error("bivectors over different tables");
  BivecExpr out = a;
  for (const auto& [k, c] : b.comp_) out.add(k.first, k.second, c);
  return out;
}

BivecExpr operator-(const BivecExpr& a, const BivecExpr& b) {
  BivecExpr neg = b;
  for (auto& [k, c] : neg.comp_) c = -c;
  return a + neg;
}

BivecExpr operator*(const Expr& c, const BivecExpr& v) {
  BivecExpr out(v.tab_);
  if (c.is_zero()) return out;
  for (const auto& [k, co] : v.comp_) {
    Expr p = c * co;
    if (!p.is_zero()) out.comp_.emplace(k, std::move(p));
  }
  return out;
}

bool operator==(const BivecExpr& a, const BivecExpr& b) {
  if (a.tab_ != b.tab_) throw Error("bivectors over different tables");
  if (a.comp_.size() != b.comp_.size()) return false;
  for (auto ia = a.comp_.begin(), ib = b.comp_.begin(); ia != a.comp_.end();
       ++ia, ++ib)
    if (ia->first != ib->first || !(ia->second == ib->second)) return false;
  return true;
}

BivecExpr BivecExpr::substituted(
    const SubstMap& scalars, const std::map<SymId, VecExpr>& images) const {
  const SymbolTable* target = scalars.target ? scalars.target : tab_;
  BivecExpr out(target);
  auto image_of = [&](SymId atom) {
    auto it = images.find(atom);
    if (it != images.end()) return it->second;
    VecExpr one(target);
    one.set(target == tab_ ? atom : target->id(tab_->sym(atom).name),
            Expr::constant(target, Rat(1)));
    return one;
  };
  for (const auto& [k, c] : comp_) {
    Expr cs = substitute(c, scalars);
    VecExpr iu = image_of(k.first), iv = image_of(k.second);
    for (const auto& [au, cu] : iu.comps())
      for (const auto& [av, cv] : iv.comps())
        out.add(au, av, cs * cu * cv);
  }
  return out;
}

std::vector<std::vector<Expr>> BivecExpr::instantiate(
    const SubstMap& scalars,
    const std::map<SymId, std::vector<Expr>>& comps) const {
  std::size_t n = 0;
  for (const auto& [atom, list] : comps) n = std::max(n, list.size());
  const SymbolTable* target = scalars.target ? scalars.target : tab_;
  std::vector<std::vector<Expr>> out(
      n, std::vector<Expr>(n, Expr::constant(target, Rat(0))));
  for (const auto& [k, c] : comp_) {
    auto iu = comps.find(k.first), iv = comps.find(k.second);
    if (iu == comps.end() || iv == comps.end())
      throw Error("missing components for a bivector atom");
    Expr cs = substitute(c, scalars);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        Expr term = cs * (iu->second[i] * iv->second[j] -
                          iu->second[j] * iv->second[i]);
        out[i][j] = out[i][j] + term;
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

std::string to_string(const SymbolTable& tab, const Monomial& m) {
  if (m.is_unit()) return "1";
  std::string out;
  for (const auto& f : m.factors()) {
    if (!out.empty()) out += "*";
    out += tab.sym(f.sym).name;
    if (f.exp > 1) out += "^" + std::to_string(f.exp);
  }
  return out;
}

std::string to_string(const SymbolTable& tab, const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rat a = abs(c);
    if (first) {
      if (sgn(c) < 0) out += "-";
      first = false;
    } else {
      out += sgn(c) < 0 ? " - " : " + ";
    }
    if (m.is_unit()) out += rat_to_string(a);
    else if (a == 1) out += to_string(tab, m);
    else out += rat_to_string(a) + "*" + to_string(tab, m);
  }
  return out;
}

namespace {

bool den_needs_parens(const Poly& d) {
  if (d.term_count() != 1) return true;
  const auto& [m, c] = d.leading();
  if (c != 1) return true;
  return m.factors().size() != 1;
}

}  // namespace

std::string to_string(const SymbolTable& tab, const RatExpr& r) {
  std::string n = to_string(tab, r.num());
  if (r.is_poly()) return n;
  if (r.num().term_count() > 1) n = "(" + n + ")";
  std::string d = to_string(tab, r.den());
  if (den_needs_parens(r.den())) d = "(" + d + ")";
  return n + "/" + d;
}

std::string to_string(const Expr& e) {
  const SymbolTable* tab = e.table();
  if (tab == nullptr) return "0";
  std::string even = to_string(*tab, e.even());
  if (e.odd().is_zero()) return even;
  std::string root = tab->root_name();
  std::string odd = "(" + to_string(*tab, e.odd()) + ")*" + root;
  if (e.even().is_zero()) return odd;
  return even + " + " + odd;
}

std::string to_string(const VecExpr& v) {
  if (v.is_zero()) return "0";
  const SymbolTable& tab = *v.table();
  std::string out;
  for (const auto& [atom, c] : v.comps()) {
    if (!out.empty()) out += " + ";
    out += "(" + to_string(c) + ")*" + tab.sym(atom).name;
  }
  return out;
}

}  // namespace abaudit
