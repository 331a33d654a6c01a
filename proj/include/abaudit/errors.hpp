#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace abaudit {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Division by an expression that normalizes to zero. Carries the offending
// denominator in printable form so reports can show it.
struct DivisionByZero : Error {
  explicit DivisionByZero(const std::string& denom)
      : Error("division by zero: denominator normalizes to 0" +
              (denom.empty() ? std::string{} : " (" + denom + ")")),
        denominator(denom) {}
  std::string denominator;
};

// Asked to differentiate by a symbol kind that has no derivation rule
// (vector atoms, the unit atom itself).
struct UnsupportedDerivative : Error {
  explicit UnsupportedDerivative(const std::string& sym)
      : Error("unsupported derivative with respect to '" + sym + "'") {}
};

// A grading operation met a symbol that carries no y-grade.
struct UngradedSymbol : Error {
  explicit UngradedSymbol(const std::string& sym)
      : Error("symbol '" + sym + "' carries no y-grade") {}
};

// A grade decomposition was asked for an expression whose denominator is not
// y-homogeneous, so "the" grade of a component is undefined.
struct GradeError : Error {
  explicit GradeError(const std::string& what) : Error(what) {}
};

// Text could not be parsed. offset is a byte offset into the input.
struct ParseError : Error {
  ParseError(std::size_t at, const std::string& what)
      : Error("parse error at byte " + std::to_string(at) + ": " + what),
        offset(at) {}
  std::size_t offset;
};

// A scenario file parsed but its content is unusable (asymmetric metric,
// singular point, bad dimensions, ...).
struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// A sample point turned out degenerate for the requested computation
// (vanishing denominator, perfect-square quadratic form, ...).
struct SingularPoint : Error {
  explicit SingularPoint(const std::string& what) : Error(what) {}
};

}  // namespace abaudit
