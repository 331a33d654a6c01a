#include "abaudit/poly.hpp"

#include <algorithm>
#include <iterator>

#include "abaudit/errors.hpp"

namespace abaudit {

// ---------------------------------------------------------------------------
// Monomial
// ---------------------------------------------------------------------------

Monomial Monomial::var(SymId s, std::uint32_t e) {
  Monomial m;
  if (e > 0) m.f_.push_back(Factor{s, e});
  return m;
}

std::uint32_t Monomial::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& f : f_) d += f.exp;
  return d;
}

std::uint32_t Monomial::degree_of(SymId s) const {
  for (const auto& f : f_)
    if (f.sym == s) return f.exp;
  return 0;
}

Monomial Monomial::mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.f_.reserve(a.f_.size() + b.f_.size());
  auto ia = a.f_.begin(), ib = b.f_.begin();
  while (ia != a.f_.end() && ib != b.f_.end()) {
    if (ia->sym < ib->sym) out.f_.push_back(*ia++);
    else if (ib->sym < ia->sym) out.f_.push_back(*ib++);
    else {
      out.f_.push_back(Factor{ia->sym, ia->exp + ib->exp});
      ++ia, ++ib;
    }
  }
  out.f_.insert(out.f_.end(), ia, a.f_.end());
  out.f_.insert(out.f_.end(), ib, b.f_.end());
  return out;
}

std::optional<Monomial> Monomial::div(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto ia = a.f_.begin();
  for (const auto& fb : b.f_) {
    while (ia != a.f_.end() && ia->sym < fb.sym) out.f_.push_back(*ia++);
    if (ia == a.f_.end() || ia->sym != fb.sym || ia->exp < fb.exp)
      return std::nullopt;
    if (ia->exp > fb.exp) out.f_.push_back(Factor{ia->sym, ia->exp - fb.exp});
    ++ia;
  }
  out.f_.insert(out.f_.end(), ia, a.f_.end());
  return out;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto ia = a.f_.begin(), ib = b.f_.begin();
  while (ia != a.f_.end() && ib != b.f_.end()) {
    if (ia->sym < ib->sym) ++ia;
    else if (ib->sym < ia->sym) ++ib;
    else {
      out.f_.push_back(Factor{ia->sym, std::min(ia->exp, ib->exp)});
      ++ia, ++ib;
    }
  }
  return out;
}

int Monomial::cmp(const Monomial& a, const Monomial& b) {
  std::uint32_t da = a.total_degree(), db = b.total_degree();
  if (da != db) return da < db ? -1 : 1;
  auto ia = a.f_.begin(), ib = b.f_.begin();
  while (ia != a.f_.end() && ib != b.f_.end()) {
    // an earlier variable with positive exponent outranks its absence
    if (ia->sym != ib->sym) return ia->sym < ib->sym ? 1 : -1;
    if (ia->exp != ib->exp) return ia->exp > ib->exp ? 1 : -1;
    ++ia, ++ib;
  }
  if (ia != a.f_.end()) return 1;
  if (ib != b.f_.end()) return -1;
  return 0;
}

namespace {

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return Monomial::cmp(a, b) < 0;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Poly basics
// ---------------------------------------------------------------------------

Poly::Poly(Rat c) {
  if (sgn(c) != 0) t_.emplace_back(Monomial{}, std::move(c));
}

Poly Poly::var(SymId s, std::uint32_t e) {
  return term(Rat(1), Monomial::var(s, e));
}

Poly Poly::term(Rat c, Monomial m) {
  Poly p;
  if (sgn(c) != 0) p.t_.emplace_back(std::move(m), std::move(c));
  return p;
}

bool Poly::is_constant() const {
  return t_.empty() || (t_.size() == 1 && t_[0].first.is_unit());
}

const Rat& Poly::constant_value() const {
  static const Rat zero(0);
  if (t_.empty()) return zero;
  if (!is_constant()) throw Error("constant_value on a non-constant poly");
  return t_[0].second;
}

const std::pair<Monomial, Rat>& Poly::leading() const {
  if (t_.empty()) throw Error("leading term of the zero polynomial");
  return t_.front();
}

std::uint32_t Poly::total_degree() const {
  // terms are grlex-descending, so the leading term carries the max degree
  return t_.empty() ? 0 : t_.front().first.total_degree();
}

std::uint32_t Poly::degree_of(SymId s) const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : t_) d = std::max(d, m.degree_of(s));
  return d;
}

bool Poly::contains(SymId s) const {
  for (const auto& [m, c] : t_)
    for (const auto& f : m.factors())
      if (f.sym == s) return true;
  return false;
}

std::vector<SymId> Poly::symbols() const {
  std::vector<SymId> out;
  for (const auto& [m, c] : t_)
    for (const auto& f : m.factors()) out.push_back(f.sym);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Poly Poly::from_terms(std::vector<std::pair<Monomial, Rat>> terms) {
  std::map<Monomial, Rat, MonoLess> acc;
  for (auto& [m, c] : terms) {
    auto [it, fresh] = acc.emplace(std::move(m), c);
    if (!fresh) it->second += c;
  }
  Poly p;
  p.t_.reserve(acc.size());
  for (auto it = acc.rbegin(); it != acc.rend(); ++it)
    if (sgn(it->second) != 0) p.t_.emplace_back(it->first, it->second);
  return p;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly out;
  out.t_.reserve(a.t_.size() + b.t_.size());
  auto ia = a.t_.begin(), ib = b.t_.begin();
  while (ia != a.t_.end() && ib != b.t_.end()) {
    int c = Monomial::cmp(ia->first, ib->first);
    if (c > 0) out.t_.push_back(*ia++);
    else if (c < 0) out.t_.push_back(*ib++);
    else {
      Rat s = ia->second + ib->second;
      if (sgn(s) != 0) out.t_.emplace_back(ia->first, std::move(s));
      ++ia, ++ib;
    }
  }
  out.t_.insert(out.t_.end(), ia, a.t_.end());
  out.t_.insert(out.t_.end(), ib, b.t_.end());
  return out;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [m, c] : out.t_) c = -c;
  return out;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly{};
  // multiply by the smaller operand termwise
  const Poly& small = a.t_.size() <= b.t_.size() ? a : b;
  const Poly& large = a.t_.size() <= b.t_.size() ? b : a;
  if (small.t_.size() == 1) {
    const auto& [m, c] = small.t_.front();
    Poly out;
    out.t_.reserve(large.t_.size());
    for (const auto& [ml, cl] : large.t_)
      out.t_.emplace_back(Monomial::mul(ml, m), cl * c);
    // monomial multiplication preserves the grlex order of distinct terms
    return out;
  }
  std::map<Monomial, Rat, MonoLess> acc;
  for (const auto& [ms, cs] : small.t_)
    for (const auto& [ml, cl] : large.t_) {
      Monomial m = Monomial::mul(ms, ml);
      Rat c = cs * cl;
      auto [it, fresh] = acc.emplace(std::move(m), c);
      if (!fresh) it->second += c;
    }
  Poly out;
  out.t_.reserve(acc.size());
  for (auto it = acc.rbegin(); it != acc.rend(); ++it)
    if (sgn(it->second) != 0) out.t_.emplace_back(it->first, it->second);
  return out;
}

Poly Poly::pow(std::uint32_t e) const {
  Poly out{Rat(1)};
  Poly base = *this;
  while (e > 0) {
    if (e & 1u) out *= base;
    e >>= 1u;
    if (e > 0) base *= base;
  }
  return out;
}

Poly Poly::scale(const Rat& c) const {
  if (sgn(c) == 0) return Poly{};
  Poly out = *this;
  for (auto& [m, co] : out.t_) co *= c;
  return out;
}

Poly Poly::derivative(SymId s) const {
  std::vector<std::pair<Monomial, Rat>> terms;
  for (const auto& [m, c] : t_) {
    std::uint32_t e = m.degree_of(s);
    if (e == 0) continue;
    auto reduced = Monomial::div(m, Monomial::var(s));
    terms.emplace_back(*reduced, c * Rat(static_cast<long>(e)));
  }
  return from_terms(std::move(terms));
}

Monomial Poly::monomial_content() const {
  if (t_.empty()) return Monomial{};
  Monomial g = t_.front().first;
  for (std::size_t i = 1; i < t_.size() && !g.is_unit(); ++i)
    g = Monomial::gcd(g, t_[i].first);
  return g;
}

Poly Poly::divide_monomial(const Monomial& m) const {
  Poly out;
  out.t_.reserve(t_.size());
  for (const auto& [mo, c] : t_) {
    auto q = Monomial::div(mo, m);
    if (!q) throw Error("monomial does not divide every term");
    out.t_.emplace_back(std::move(*q), c);
  }
  return out;  // order preserved: dividing by a fixed monomial is monotone
}

Rat Poly::rational_content() const {
  if (t_.empty()) return Rat(1);
  Int num_gcd(0), den_lcm(1);
  for (const auto& [m, c] : t_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(),
            c.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
            c.get_den().get_mpz_t());
  }
  return make_rat(num_gcd, den_lcm);  // positive: mpz_gcd/lcm are non-negative
}

Poly Poly::monic() const {
  if (t_.empty()) return *this;
  return scale(Rat(1) / t_.front().second);
}

Rat Poly::eval(const std::map<SymId, Rat>& point) const {
  Rat acc(0);
  for (const auto& [m, c] : t_) {
    Rat v = c;
    for (const auto& f : m.factors()) {
      auto it = point.find(f.sym);
      if (it == point.end())
        throw Error("eval: unbound symbol id " + std::to_string(f.sym));
      v *= rat_pow(it->second, f.exp);
    }
    acc += v;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Exact division
// ---------------------------------------------------------------------------

std::optional<Poly> poly_div_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return Poly{};
  if (b.is_constant()) return a.scale(Rat(1) / b.constant_value());
  const auto& [lbm, lbc] = b.leading();
  Poly r = a;
  std::vector<std::pair<Monomial, Rat>> q;
  while (!r.is_zero()) {
    const auto& [lrm, lrc] = r.leading();
    auto md = Monomial::div(lrm, lbm);
    if (!md) return std::nullopt;  // cannot cancel the leading term
    Rat cq = lrc / lbc;
    q.emplace_back(*md, cq);
    r -= Poly::term(cq, *md) * b;
  }
  return Poly::from_terms(std::move(q));
}

// ---------------------------------------------------------------------------
// Multivariate gcd: monomial and rational content first, then trial
// division, then a primitive pseudo-remainder sequence in a chosen main
// variable with recursive content extraction.
// ---------------------------------------------------------------------------

namespace {

Poly int_primitive(const Poly& p) {
  if (p.is_zero()) return p;
  Rat c = p.rational_content();
  if (sgn(p.leading().second) < 0) c = -c;
  return p.scale(Rat(1) / c);
}

// p as a dense coefficient vector in v (index = power); coefficients do not
// contain v.
std::vector<Poly> univ_view(const Poly& p, SymId v) {
  std::vector<Poly> out(p.degree_of(v) + 1);
  std::vector<std::vector<std::pair<Monomial, Rat>>> buckets(out.size());
  for (const auto& [m, c] : p.terms()) {
    std::uint32_t e = m.degree_of(v);
    auto rest = Monomial::div(m, Monomial::var(v, e));
    buckets[e].emplace_back(std::move(*rest), c);
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = Poly::from_terms(std::move(buckets[i]));
  return out;
}

Poly rebuild(const std::vector<Poly>& coeffs, SymId v) {
  Poly out;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    out += coeffs[i] * Poly::var(v, static_cast<std::uint32_t>(i));
  return out;
}

void trim(std::vector<Poly>& c) {
  while (!c.empty() && c.back().is_zero()) c.pop_back();
}

Poly coeff_content(const std::vector<Poly>& coeffs) {
  Poly g;
  for (const auto& c : coeffs) {
    if (c.is_zero()) continue;
    g = poly_gcd(g, c);
    if (g.is_constant()) return Poly{Rat(1)};
  }
  return g.is_zero() ? Poly{Rat(1)} : g;
}

std::vector<Poly> divide_coeffs(const std::vector<Poly>& coeffs,
                                const Poly& d) {
  std::vector<Poly> out(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    auto q = poly_div_exact(coeffs[i], d);
    if (!q) throw Error("content division failed (internal)");
    out[i] = std::move(*q);
  }
  return out;
}

// Strip the common rational scale of a coefficient vector (keeps mpz sizes
// small along the remainder sequence). Leading sign becomes positive.
void vec_int_primitive(std::vector<Poly>& coeffs) {
  Int num_gcd(0), den_lcm(1);
  for (const auto& p : coeffs)
    for (const auto& [m, c] : p.terms()) {
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(),
              c.get_num().get_mpz_t());
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
              c.get_den().get_mpz_t());
    }
  if (sgn(num_gcd) == 0) return;
  Rat scale = make_rat(den_lcm, num_gcd);
  if (!coeffs.empty() && !coeffs.back().is_zero() &&
      sgn(coeffs.back().leading().second) < 0)
    scale = -scale;
  for (auto& p : coeffs) p = p.scale(scale);
}

// ---------------------------------------------------------------------------
// Evaluation-based heuristic gcd. Substitute a large integer for one
// variable, take the gcd of the images recursively (plain integer gcd at the
// bottom), then read the candidate back off the balanced base-xi digits of
// the image gcd. A candidate is only returned after exact trial division
// against both inputs, so a failed try costs time but never correctness.
// Declines (nullopt) when the evaluation integers would grow absurd; the
// pseudo-remainder sequence below is the fallback.
// ---------------------------------------------------------------------------

Int int_height(const Poly& p) {
  Int h(0);
  for (const auto& [m, c] : p.terms()) {
    Int a = abs(c.get_num());
    if (a > h) h = std::move(a);
  }
  return h;
}

Int int_content(const Poly& p) {
  Int g(0);
  for (const auto& [m, c] : p.terms()) g = gcd(g, c.get_num());
  return g;
}

Poly eval_var(const Poly& p, SymId v, const Int& xi) {
  std::map<std::uint32_t, Int> powers;
  std::vector<std::pair<Monomial, Rat>> terms;
  terms.reserve(p.term_count());
  for (const auto& [m, c] : p.terms()) {
    std::uint32_t e = m.degree_of(v);
    auto it = powers.find(e);
    if (it == powers.end()) {
      Int pw;
      mpz_pow_ui(pw.get_mpz_t(), xi.get_mpz_t(), e);
      it = powers.emplace(e, std::move(pw)).first;
    }
    terms.emplace_back(*Monomial::div(m, Monomial::var(v, e)),
                       c * Rat(it->second));
  }
  return Poly::from_terms(std::move(terms));
}

// balanced remainder in (-xi/2, xi/2]
Int bmod(const Int& n, const Int& xi) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), xi.get_mpz_t());
  if (r * 2 > xi) r -= xi;
  return r;
}

// g as a polynomial in v via xi-adic digits, coefficient-wise
std::optional<Poly> xi_adic_lift(Poly g, SymId v, const Int& xi) {
  Poly out;
  for (std::uint32_t j = 0; !g.is_zero(); ++j) {
    if (j > 4096) return std::nullopt;
    std::vector<std::pair<Monomial, Rat>> digit, rest;
    for (const auto& [m, c] : g.terms()) {
      Int d = bmod(c.get_num(), xi);
      if (sgn(d) != 0) digit.emplace_back(m, Rat(d));
      Int q;
      mpz_divexact(q.get_mpz_t(), Int(c.get_num() - d).get_mpz_t(),
                   xi.get_mpz_t());
      if (sgn(q) != 0) rest.emplace_back(m, Rat(q));
    }
    out += Poly::from_terms(std::move(digit)) * Poly::var(v, j);
    g = Poly::from_terms(std::move(rest));
  }
  return out;
}

// The integer content of an inner-level result is load-bearing: it holds the
// xi-adic digits that outer levels decode into their own variable's powers.
// Content is therefore stripped only by the caller at the very top.
std::optional<Poly> heu_gcd(const Poly& A, const Poly& B) {
  auto sa = A.symbols();
  auto sb = B.symbols();
  std::vector<SymId> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(common));
  if (common.empty()) return Poly(Rat(gcd(int_content(A), int_content(B))));

  SymId v = common.front();
  std::uint32_t best = std::min(A.degree_of(v), B.degree_of(v));
  for (SymId s : common) {
    std::uint32_t d = std::min(A.degree_of(s), B.degree_of(s));
    if (d < best) best = d, v = s;
  }
  std::uint32_t dv = std::max(A.degree_of(v), B.degree_of(v));

  // A large floor keeps the balanced digits comfortably above any gcd
  // coefficient this workload produces, so the first lift is almost always
  // already exact; the trial division still has the final word.
  Int ha = int_height(A), hb = int_height(B);
  Int xi = 2 * std::min(ha, hb) + 29;
  Int floor_xi = Int(1) << 31;
  if (xi < floor_xi) xi = floor_xi;
  for (int tries = 0; tries < 8; ++tries) {
    if (mpz_sizeinbase(xi.get_mpz_t(), 2) * (dv + 1) > 400000)
      return std::nullopt;
    Poly a = eval_var(A, v, xi);
    Poly b = eval_var(B, v, xi);
    if (!a.is_zero() && !b.is_zero()) {
      auto g = heu_gcd(a, b);
      if (!g) return std::nullopt;
      auto lifted = xi_adic_lift(std::move(*g), v, xi);
      if (lifted && !lifted->is_zero() && poly_div_exact(A, *lifted) &&
          poly_div_exact(B, *lifted))
        return lifted;
    }
    xi = xi * 7 / 2 + 17;
  }
  return std::nullopt;
}

// Pseudo-remainder of F by G in the main variable (degF >= degG > 0). Each
// reduction step scales by lc(G); the extra content is stripped by the
// primitive sequence.
std::vector<Poly> prem(std::vector<Poly> R, const std::vector<Poly>& G) {
  const Poly& l = G.back();
  while (R.size() >= G.size() && !R.empty()) {
    Poly lr = R.back();
    std::size_t shift = R.size() - G.size();
    for (std::size_t i = 0; i + 1 < R.size(); ++i) {
      R[i] = R[i] * l;
      if (i >= shift) R[i] -= lr * G[i - shift];
    }
    R.pop_back();  // leading term cancels by construction
    trim(R);
  }
  return R;
}

Poly gcd_in_var(const Poly& a, const Poly& b, SymId v) {
  auto FA = univ_view(a, v);
  auto FB = univ_view(b, v);
  Poly contA = coeff_content(FA);
  Poly contB = coeff_content(FB);
  Poly cont = poly_gcd(contA, contB);
  auto F = divide_coeffs(FA, contA);
  auto G = divide_coeffs(FB, contB);
  if (F.size() < G.size()) std::swap(F, G);
  while (true) {
    auto R = prem(F, G);
    if (R.empty()) {
      // G divides the sequence: gcd is cont * primitive(G)
      return cont * rebuild(G, v);
    }
    if (R.size() == 1) return cont;  // coprime in v
    Poly rc = coeff_content(R);
    R = divide_coeffs(R, rc);
    vec_int_primitive(R);
    F = std::move(G);
    G = std::move(R);
  }
}

}  // namespace

Poly poly_gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  Monomial gm = Monomial::gcd(a.monomial_content(), b.monomial_content());
  Poly A = int_primitive(a.divide_monomial(a.monomial_content()));
  Poly B = int_primitive(b.divide_monomial(b.monomial_content()));
  Poly unit = Poly::term(Rat(1), gm);
  if (A.is_constant() || B.is_constant()) return unit;
  if (A == B) return (unit * A).monic();
  if (poly_div_exact(B, A)) return (unit * A).monic();
  if (poly_div_exact(A, B)) return (unit * B).monic();
  auto sa = A.symbols();
  auto sb = B.symbols();
  std::vector<SymId> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::back_inserter(common));
  if (common.empty()) return unit;
  if (auto h = heu_gcd(A, B)) return (unit * int_primitive(*h)).monic();
  SymId v = common.front();
  std::uint32_t best = std::min(A.degree_of(v), B.degree_of(v));
  for (SymId s : common) {
    std::uint32_t d = std::min(A.degree_of(s), B.degree_of(s));
    if (d < best) best = d, v = s;
  }
  Poly g = gcd_in_var(A, B, v);
  return (unit * g).monic();
}

}  // namespace abaudit
