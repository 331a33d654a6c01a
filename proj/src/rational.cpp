#include "abaudit/rational.hpp"

namespace abaudit {

std::optional<Rat> rat_sqrt(const Rat& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (sgn(q) == 0) return Rat(0);
  // canonical mpq: positive denominator, gcd(num, den) = 1, so q is a square
  // iff numerator and denominator are squares.
  const Int& n = q.get_num();
  const Int& d = q.get_den();
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
  if (mpz_perfect_square_p(d.get_mpz_t()) == 0) return std::nullopt;
  Int rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return make_rat(rn, rd);
}

Rat rat_pow(const Rat& base, std::uint32_t e) {
  Int n, d;
  mpz_pow_ui(n.get_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), base.get_den().get_mpz_t(), e);
  return make_rat(n, d);  // canonical since base was
}

std::string rat_to_string(const Rat& q) {
  return q.get_str();  // "a" or "a/b", canonical
}

}  // namespace abaudit
