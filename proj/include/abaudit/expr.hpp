#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "abaudit/ratexpr.hpp"

namespace abaudit {

// ---------------------------------------------------------------------------
// Raw expression trees. The parser produces these; normalize() folds them
// into canonical form. Kept around so tests can evaluate the unnormalized
// tree independently of the canonical algebra.
// ---------------------------------------------------------------------------

struct ExprTree;
using ExprTreePtr = std::shared_ptr<const ExprTree>;

struct ExprTree {
  enum class Op { Num, Sym, Root, Alias, Neg, Add, Sub, Mul, Div, Pow };
  Op op = Op::Num;
  Rat value;            // Num
  SymId sym = kNoSym;   // Sym
  std::string name;     // Alias
  ExprTreePtr a, b;     // operands
  std::int64_t expo = 0;  // Pow exponent (may be negative)

  static ExprTreePtr num(Rat v);
  static ExprTreePtr symbol(SymId s);
  static ExprTreePtr root();
  static ExprTreePtr alias(std::string name);
  static ExprTreePtr neg(ExprTreePtr x);
  static ExprTreePtr binary(Op o, ExprTreePtr x, ExprTreePtr y);
  static ExprTreePtr pow(ExprTreePtr x, std::int64_t e);
};

// ---------------------------------------------------------------------------
// Canonical expression: value = even + odd * root, where root is the table's
// quadratic-extension generator (alpha in concrete tables). Tables without a
// root keep odd == 0 always; in that regime Expr is just a tagged RatExpr.
// ---------------------------------------------------------------------------

class Expr {
 public:
  Expr() : tab_(nullptr) {}
  Expr(const SymbolTable* tab, RatExpr even, RatExpr odd);

  static Expr constant(const SymbolTable* tab, Rat c);
  static Expr sym(const SymbolTable* tab, SymId s);
  static Expr sym(const SymbolTable* tab, const std::string& name);  // resolves aliases and the root
  static Expr root(const SymbolTable* tab);  // requires tab->has_root()

  const SymbolTable* table() const { return tab_; }
  const RatExpr& even() const { return even_; }
  const RatExpr& odd() const { return odd_; }
  bool is_zero() const { return even_.is_zero() && odd_.is_zero(); }
  bool has_root_part() const { return !odd_.is_zero(); }

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator/(const Expr&, const Expr&);
  Expr operator-() const;
  Expr& operator+=(const Expr& o) { *this = *this + o; return *this; }
  Expr& operator-=(const Expr& o) { *this = *this - o; return *this; }
  Expr& operator*=(const Expr& o) { *this = *this * o; return *this; }
  Expr& operator/=(const Expr& o) { *this = *this / o; return *this; }
  Expr pow(std::int64_t e) const;

  // Structural equality; both operands must share a table.
  friend bool operator==(const Expr&, const Expr&);

 private:
  const SymbolTable* tab_;
  RatExpr even_, odd_;
};

// Convenience arithmetic with bare rationals.
Expr operator*(const Rat& c, const Expr& e);
Expr operator+(const Expr& e, const Rat& c);
Expr operator-(const Expr& e, const Rat& c);

// Fold a raw tree into canonical form over tab. Throws DivisionByZero for
// vanishing denominators and Error for malformed trees.
Expr normalize(const SymbolTable* tab, const ExprTreePtr& tree);

// Partial derivative. s must be a coordinate, fiber, or scalar symbol;
// vector atoms and the unit atom raise UnsupportedDerivative. Coordinate
// derivatives apply registered unit-atom rules and the chain rule through
// the root (d root = d(root^2) / (2 root)).
Expr differentiate(const Expr& e, SymId s);

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

// Simultaneous substitution, optionally transferring into another table.
// Symbols without a binding pass through by id when passthrough is set
// (requires the same id to exist in the target table, which is trivially
// true for same-table substitution). Without passthrough every occurring
// symbol must be bound.
//
// If the source table has a root and the expression touches it, root_image
// tells what the root becomes; absent root_image, the root maps to the
// target's root, which is only sound if no bound symbol occurs in the
// source root's square (otherwise the rewrite would silently change
// meaning; that case throws).
struct SubstMap {
  const SymbolTable* target = nullptr;
  std::map<SymId, Expr> bind;
  bool passthrough = true;
  std::optional<Expr> root_image;
};

Expr substitute(const Expr& e, const SubstMap& s);

// ---------------------------------------------------------------------------
// Grading
// ---------------------------------------------------------------------------

// Total y-grade of a monomial; UngradedSymbol if one of its symbols opted out.
int monomial_y_grade(const SymbolTable& tab, const Monomial& m);

// Split into y-grade-homogeneous components. The denominator (even and odd
// share theirs separately) must be y-homogeneous, else GradeError. The root
// counts as grade 1.
std::map<int, Expr> y_grade_split(const Expr& e);

// True iff the expression is a single grade (or zero).
bool is_y_homogeneous(const Expr& e, int* grade_out = nullptr);

// ---------------------------------------------------------------------------
// Exact point evaluation
// ---------------------------------------------------------------------------

// Value in the quadratic extension Q(sqrt(disc)): val = p + q*sqrt(disc).
// normal() folds q into p when disc is a perfect square.
struct RootVal {
  Rat p, q, disc;
  RootVal normal() const;
  bool is_zero() const;
  double to_double() const;
  friend bool operator==(const RootVal&, const RootVal&);
};

// Full exact evaluation at a rational point. Every symbol occurring in e
// must be bound (the unit atom included). The root's square is evaluated
// from the table rewrite; DivisionByZero / SingularPoint on degeneracies.
RootVal eval_point(const Expr& e, const std::map<SymId, Rat>& point);

// ---------------------------------------------------------------------------
// Vector-valued expressions
// ---------------------------------------------------------------------------

// Finitely supported map {vector atom -> scalar coefficient}; represents
// sums like  c1*b^i + c2*y^i. No zero coefficients are stored.
class VecExpr {
 public:
  VecExpr() : tab_(nullptr) {}
  explicit VecExpr(const SymbolTable* tab) : tab_(tab) {}

  const SymbolTable* table() const { return tab_; }
  const std::map<SymId, Expr>& comps() const { return comp_; }
  bool is_zero() const { return comp_.empty(); }
  Expr coeff(SymId atom) const;  // zero expr if absent

  void set(SymId atom, Expr c);  // atom must be a vector symbol

  friend VecExpr operator+(const VecExpr&, const VecExpr&);
  friend VecExpr operator-(const VecExpr&, const VecExpr&);
  friend VecExpr operator*(const Expr& c, const VecExpr&);
  VecExpr operator-() const;
  friend bool operator==(const VecExpr&, const VecExpr&);

 private:
  const SymbolTable* tab_;
  std::map<SymId, Expr> comp_;
};

// Result of collecting a scalar-level expression (vector atoms appearing as
// plain symbols inside polynomials) into vector form. Terms whose vector
// degree exceeds one, or any vector atom inside a denominator, are
// index-inconsistent and land in `illformed` untouched.
struct VecCollect {
  VecExpr vec;
  Expr scalar;  // vector-free residue
  std::vector<Expr> illformed;
  bool clean() const { return illformed.empty() && scalar.is_zero(); }
};

VecCollect collect_vector(const Expr& e);

// Substitute into every coefficient and map vector atoms to vector images
// (identity for atoms not listed).
VecExpr substitute_vec(const VecExpr& v, const SubstMap& scalars,
                       const std::map<SymId, VecExpr>& images);

// Instantiate to an n-component list of scalars: each vector atom is
// replaced by its component expressions in the target algebra.
std::vector<Expr> instantiate(const VecExpr& v, const SubstMap& scalars,
                              const std::map<SymId, std::vector<Expr>>& comps);

// Antisymmetric tensor built from atom pairs: sum over stored (u, v), u < v,
// of coeff * (u^i v^j - v^i u^j).
class BivecExpr {
 public:
  BivecExpr() : tab_(nullptr) {}
  explicit BivecExpr(const SymbolTable* tab) : tab_(tab) {}

  const SymbolTable* table() const { return tab_; }
  const std::map<std::pair<SymId, SymId>, Expr>& comps() const { return comp_; }
  bool is_zero() const { return comp_.empty(); }

  // Accepts any order; (v, u) with coefficient c is stored as (u, v) with -c.
  void add(SymId u, SymId v, Expr c);

  friend BivecExpr operator+(const BivecExpr&, const BivecExpr&);
  friend BivecExpr operator-(const BivecExpr&, const BivecExpr&);
  friend BivecExpr operator*(const Expr& c, const BivecExpr&);
  friend bool operator==(const BivecExpr&, const BivecExpr&);

  BivecExpr substituted(const SubstMap& scalars,
                        const std::map<SymId, VecExpr>& images) const;

  // n x n matrix of components in the target algebra.
  std::vector<std::vector<Expr>> instantiate(
      const SubstMap& scalars,
      const std::map<SymId, std::vector<Expr>>& comps) const;

 private:
  const SymbolTable* tab_;
  std::map<std::pair<SymId, SymId>, Expr> comp_;
};

// ---------------------------------------------------------------------------
// Printing (canonical, parse-compatible)
// ---------------------------------------------------------------------------

std::string to_string(const SymbolTable& tab, const Monomial& m);
std::string to_string(const SymbolTable& tab, const Poly& p);
std::string to_string(const SymbolTable& tab, const RatExpr& r);
std::string to_string(const Expr& e);
std::string to_string(const VecExpr& v);

}  // namespace abaudit
