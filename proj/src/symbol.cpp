#include "abaudit/symbol.hpp"

#include "abaudit/expr.hpp"
#include "abaudit/ratexpr.hpp"

namespace abaudit {

SymbolTable::~SymbolTable() = default;

// every name space the parser can hit: member symbols, the root, aliases
void SymbolTable::check_name_free(const std::string& name) const {
  if (name.empty()) throw Error("symbol name must be non-empty");
  if (by_name_.count(name)) throw Error("duplicate symbol name '" + name + "'");
  if (has_root() && root_name_ == name)
    throw Error("name '" + name + "' collides with the root");
  if (aliases_.count(name))
    throw Error("name '" + name + "' collides with an alias");
}

SymId SymbolTable::add(std::string name, SymKind kind, int y_grade) {
  check_name_free(name);
  if (kind == SymKind::Unit) throw Error("register unit atoms through add_unit");
  if (y_grade < 0) throw Error("y-grade must be non-negative");
  SymId id = static_cast<SymId>(syms_.size());
  by_name_.emplace(name, id);
  syms_.push_back(Sym{std::move(name), kind, y_grade, true});
  return id;
}

SymId SymbolTable::add_ungraded(std::string name, SymKind kind) {
  SymId id = add(std::move(name), kind, 0);
  syms_[id].graded = false;
  return id;
}

SymId SymbolTable::add_unit(std::string name) {
  if (unit_ != kNoSym)
    throw Error("a table admits exactly one unit atom; '" +
                syms_[unit_].name + "' is already registered");
  check_name_free(name);
  SymId id = static_cast<SymId>(syms_.size());
  by_name_.emplace(name, id);
  syms_.push_back(Sym{std::move(name), SymKind::Unit, 0, true});
  unit_ = id;
  return id;
}

SymId SymbolTable::id(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? kNoSym : it->second;
}

const Sym& SymbolTable::sym(SymId s) const {
  if (s >= syms_.size()) throw Error("symbol id out of range");
  return syms_[s];
}

void SymbolTable::set_root(std::string name, RatExpr square) {
  if (has_root()) throw Error("root already set on this table");
  check_name_free(name);
  if (square.is_zero()) throw Error("the root's square must be nonzero");
  root_name_ = std::move(name);
  root_square_ = std::make_shared<const RatExpr>(std::move(square));
}

const RatExpr& SymbolTable::root_square() const {
  if (!has_root()) throw Error("table has no root");
  return *root_square_;
}

void SymbolTable::set_unit_rule(SymId coord, Expr dlog) {
  if (unit_ == kNoSym) throw Error("no unit atom registered");
  if (sym(coord).kind != SymKind::Coordinate)
    throw Error("unit rules attach to coordinate symbols only");
  unit_rules_[coord] = std::make_shared<const Expr>(std::move(dlog));
}

const Expr* SymbolTable::unit_rule(SymId coord) const {
  auto it = unit_rules_.find(coord);
  return it == unit_rules_.end() ? nullptr : it->second.get();
}

void SymbolTable::add_alias(std::string name, Expr value) {
  check_name_free(name);
  aliases_[std::move(name)] = std::make_shared<const Expr>(std::move(value));
}

const Expr* SymbolTable::alias(const std::string& name) const {
  auto it = aliases_.find(name);
  return it == aliases_.end() ? nullptr : it->second.get();
}

}  // namespace abaudit
