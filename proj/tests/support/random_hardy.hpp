#pragma once

#include <random>

#include "hardynil/hardy.hpp"

namespace testsupport {

using hardynil::Coefficient;
using hardynil::Rational;
using hardynil::hardy::HardyExpr;
using hardynil::hardy::Term;

/// Random sum of up to `max_terms` monomials, exponents p/q in [-3, 3] with
/// q <= 4, log powers in [-2, 2], small rational coefficients.
inline HardyExpr random_expr(std::mt19937_64& rng, int max_terms = 6) {
  std::uniform_int_distribution<int> nterms(1, max_terms), den(1, 4), logp(-2, 2), cnum(-9, 9), cden(1, 5);
  std::vector<Term> terms;
  const int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    const int q = den(rng);
    std::uniform_int_distribution<int> num(-3 * q, 3 * q);
    int c = cnum(rng);
    if (c == 0) c = 1;
    terms.push_back({Coefficient(Rational(c, cden(rng))), Rational(num(rng), q), logp(rng)});
  }
  return HardyExpr(std::move(terms));
}

}  // namespace testsupport
