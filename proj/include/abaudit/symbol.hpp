#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "abaudit/errors.hpp"

namespace abaudit {

class RatExpr;
class Expr;

using SymId = std::uint32_t;
inline constexpr SymId kNoSym = 0xffffffffu;

enum class SymKind : std::uint8_t {
  Coordinate,  // base-manifold coordinate x_j
  Fiber,       // tangent coordinate y_j
  Scalar,      // scalar atom (alpha, beta, b2, ...)
  Vector,      // indexed atom standing for a vector component family
  Unit,        // positive multiplicative unit with registered log-derivatives
};

struct Sym {
  std::string name;
  SymKind kind = SymKind::Scalar;
  int y_grade = 0;     // valid only when graded
  bool graded = true;  // helper atoms may opt out of the grading calculus
};

// Append-only symbol registry. Identity of a symbol is its id; ids are dense,
// assigned in registration order, and that order is also the variable order
// used by the monomial ordering, so re-registering symbols in a different
// order produces a different (but internally consistent) canonical form.
//
// Tables are not copyable: expressions hold plain pointers to the table they
// were built over, so a table must outlive its expressions and keep a stable
// address. Keep tables in shared_ptr at the owning side.
class SymbolTable {
 public:
  SymbolTable() = default;
  SymbolTable(const SymbolTable&) = delete;
  SymbolTable& operator=(const SymbolTable&) = delete;
  ~SymbolTable();

  SymId add(std::string name, SymKind kind, int y_grade);
  SymId add_ungraded(std::string name, SymKind kind);
  SymId add_unit(std::string name);  // at most one unit atom per table

  SymId id(const std::string& name) const;  // kNoSym if unknown
  const Sym& sym(SymId s) const;
  std::size_t size() const { return syms_.size(); }
  SymId unit() const { return unit_; }

  // Quadratic-extension generator ("alpha" in concrete tables). The root is
  // not a member symbol; expressions keep it in a separate odd part and the
  // algebra rewrites root^2 to the registered square. Its y-grade is 1.
  void set_root(std::string name, RatExpr square);
  bool has_root() const { return root_square_ != nullptr; }
  const std::string& root_name() const { return root_name_; }
  const RatExpr& root_square() const;

  // d(unit)/d(coord) = unit * dlog; dlog is an expression over this table.
  void set_unit_rule(SymId coord, Expr dlog);
  const Expr* unit_rule(SymId coord) const;  // nullptr if none registered

  // Identifier that the parser resolves to a stored expression (gamma2).
  void add_alias(std::string name, Expr value);
  const Expr* alias(const std::string& name) const;

 private:
  void check_name_free(const std::string& name) const;

  std::vector<Sym> syms_;
  std::map<std::string, SymId> by_name_;
  SymId unit_ = kNoSym;
  std::string root_name_;
  std::shared_ptr<const RatExpr> root_square_;
  std::map<SymId, std::shared_ptr<const Expr>> unit_rules_;
  std::map<std::string, std::shared_ptr<const Expr>> aliases_;
};

}  // namespace abaudit
