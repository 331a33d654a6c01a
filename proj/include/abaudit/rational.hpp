#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace abaudit {

// Exact arbitrary-precision rational. All coefficient arithmetic in the
// library goes through this type; no floating point enters a canonical form.
using Rat = mpq_class;
using Int = mpz_class;

// Safe constructor: canonicalizes num/den (mpq_class does not do that for
// two-argument construction).
inline Rat make_rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat make_rat(const Int& num, const Int& den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Exact square root if q is a perfect square of a rational, nullopt otherwise.
std::optional<Rat> rat_sqrt(const Rat& q);

Rat rat_pow(const Rat& base, std::uint32_t e);

inline bool is_square(const Rat& q) { return rat_sqrt(q).has_value(); }

// Canonical printing: "-5/7", "3", "0". parse-compatible with the expression
// grammar (a/b is division of integer literals, which yields the same value).
std::string rat_to_string(const Rat& q);

}  // namespace abaudit
