#pragma once

#include <string_view>

#include "abaudit/expr.hpp"

namespace abaudit {

// Expression grammar (whitespace between tokens is free):
//
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := '-' factor | primary ['^' exponent]
//   primary := integer | identifier | '(' expr ')'
//   exponent:= ['-'] integer | '(' ['-'] integer ')'
//
// '+'/'-' and '*'/'/' associate left; '^' binds tightest and takes a single
// integer exponent (negative allowed). There is no implicit multiplication
// and no floating point: 5/7 is division of integer literals, which the
// canonical algebra folds to the exact rational.
//
// Identifiers resolve against tab: member symbols, then aliases, then the
// root name. Anything else is a ParseError carrying the byte offset.

ExprTreePtr parse_tree(const SymbolTable& tab, std::string_view text);

// parse_tree followed by normalization into the canonical algebra
Expr parse_expr(const SymbolTable* tab, std::string_view text);

}  // namespace abaudit
