#include "abaudit/parser.hpp"

#include <cctype>
#include <string>

namespace abaudit {

namespace {

struct Parser {
  const SymbolTable& tab;
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r' ||
            text[pos] == '\n'))
      ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) throw ParseError(pos, what);
  }

  ExprTreePtr parse_full() {
    ExprTreePtr e = parse_expr();
    if (!at_end()) throw ParseError(pos, "unexpected trailing input");
    return e;
  }

  ExprTreePtr parse_expr() {
    ExprTreePtr e = parse_term();
    for (;;) {
      if (accept('+'))
        e = ExprTree::binary(ExprTree::Op::Add, e, parse_term());
      else if (accept('-'))
        e = ExprTree::binary(ExprTree::Op::Sub, e, parse_term());
      else
        return e;
    }
  }

  ExprTreePtr parse_term() {
    ExprTreePtr e = parse_factor();
    for (;;) {
      if (accept('*'))
        e = ExprTree::binary(ExprTree::Op::Mul, e, parse_factor());
      else if (accept('/'))
        e = ExprTree::binary(ExprTree::Op::Div, e, parse_factor());
      else
        return e;
    }
  }

  ExprTreePtr parse_factor() {
    if (accept('-')) return ExprTree::neg(parse_factor());
    ExprTreePtr e = parse_primary();
    if (accept('^')) e = ExprTree::pow(e, parse_exponent());
    return e;
  }

  ExprTreePtr parse_primary() {
    char c = peek();
    if (c == '(') {
      ++pos;
      ExprTreePtr e = parse_expr();
      expect(')', "expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)))
      return ExprTree::num(Rat(read_integer()));
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_identifier();
    throw ParseError(pos, pos >= text.size() ? "unexpected end of input"
                                             : "unexpected character");
  }

  std::int64_t parse_exponent() {
    bool parens = accept('(');
    bool negative = accept('-');
    char c = peek();
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError(pos, "expected integer exponent after '^'");
    std::size_t start = pos;
    Int v = read_integer();
    if (!v.fits_slong_p() || v.get_si() > (1 << 24))
      throw ParseError(start, "exponent out of range");
    if (parens) expect(')', "expected ')' after exponent");
    std::int64_t e = v.get_si();
    return negative ? -e : e;
  }

  Int read_integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos])))
      ++pos;
    return Int(std::string(text.substr(start, pos - start)), 10);
  }

  ExprTreePtr parse_identifier() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_'))
      ++pos;
    std::string name(text.substr(start, pos - start));
    SymId s = tab.id(name);
    if (s != kNoSym) return ExprTree::symbol(s);
    if (tab.alias(name) != nullptr) return ExprTree::alias(std::move(name));
    if (tab.has_root() && tab.root_name() == name) return ExprTree::root();
    throw ParseError(start, "unknown identifier '" + name + "'");
  }
};

}  // namespace

ExprTreePtr parse_tree(const SymbolTable& tab, std::string_view text) {
  Parser p{tab, text};
  return p.parse_full();
}

Expr parse_expr(const SymbolTable* tab, std::string_view text) {
  if (tab == nullptr) throw Error("null table");
  return normalize(tab, parse_tree(*tab, text));
}

}  // namespace abaudit
