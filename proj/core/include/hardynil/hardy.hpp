#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hardynil/constants.hpp"
#include "hardynil/double_double.hpp"
#include "hardynil/rational.hpp"

/// Exact calculus on finite sums  c * t^a * (log t)^b  with rational a and
/// integer b.  This family is closed under differentiation and every pair of
/// its members is comparable by growth, which is all the equidistribution
/// machinery downstream needs.
namespace hardynil::hardy {

/// Growth class of t^power * (log t)^logpow.  Ordered lexicographically, which
/// is exactly the asymptotic order of these monomials.  logpow is rational so
/// that roots such as |f^(k)|^(-1/k) stay representable.
struct GrowthOrder {
  Rational power;
  Rational logpow;

  friend bool operator==(const GrowthOrder&, const GrowthOrder&) = default;
  friend std::strong_ordering operator<=>(const GrowthOrder& x, const GrowthOrder& y) {
    if (x.power != y.power) return x.power < y.power ? std::strong_ordering::less : std::strong_ordering::greater;
    if (x.logpow != y.logpow) return x.logpow < y.logpow ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  std::string to_string() const;
};

struct Term {
  Coefficient coeff;  // never zero inside a HardyExpr
  Rational power;
  int logpow = 0;

  GrowthOrder order() const { return {power, Rational(logpow)}; }
  bool is_constant() const { return power == 0 && logpow == 0; }
  /// Nonnegative integer power and no log factor.
  bool is_polynomial_monomial() const { return logpow == 0 && power >= 0 && is_integer(power); }
  friend bool operator==(const Term&, const Term&) = default;
};

/// Normalized sum of terms: like terms merged, zero terms dropped, sorted by
/// strictly decreasing growth.  The empty sum is the zero function.
class HardyExpr {
 public:
  HardyExpr() = default;
  explicit HardyExpr(std::vector<Term> terms);

  static HardyExpr monomial(Coefficient c, Rational power, int logpow = 0);
  static HardyExpr constant(Coefficient c) { return monomial(std::move(c), 0, 0); }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Fastest-growing term.  Precondition: not the zero function.
  const Term& dominant() const;
  GrowthOrder growth() const { return dominant().order(); }
  /// Coefficient of the constant term (zero if absent).
  Coefficient constant_term() const;

  HardyExpr operator-() const;
  friend HardyExpr operator+(const HardyExpr& f, const HardyExpr& g);
  friend HardyExpr operator-(const HardyExpr& f, const HardyExpr& g) { return f + (-g); }
  friend HardyExpr operator*(const Rational& s, const HardyExpr& f);
  friend bool operator==(const HardyExpr&, const HardyExpr&) = default;

  double evaluate(double t) const;
  DD evaluate(DD t) const;

  /// Canonical text: decreasing growth, exponents as p/q in lowest terms.
  /// Re-parses to an equal expression.
  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

/// Pre-converted form for hot loops: coefficients in double-double, exponents
/// as machine integers.  Evaluation at integer n is exact whenever n^a is an
/// integer (perfect powers), so floors of integer-valued sequences are exact.
class Evaluator {
 public:
  Evaluator() = default;
  explicit Evaluator(const HardyExpr& f);

  DD operator()(DD t) const;
  DD at(std::int64_t n) const;
  double operator()(double t) const;

 private:
  struct Compiled {
    DD coeff;
    std::int64_t num;
    std::int64_t den;
    int logpow;
  };
  std::vector<Compiled> terms_;
  bool needs_log_ = false;
};

/// Grammar:  expr := term (('+'|'-') term)*
///           term := [coeff ['*']] ['t' ['^' exponent]] ['*' 'log(t)' ['^' integer]]
///           coeff := rational | decimal | constant name | '(' expr-of-constants ')'
/// Exponents may be wrapped in braces or parentheses: t^{3/2}, t^(-1), t^2.
HardyExpr parse(std::string_view text);

HardyExpr differentiate(const HardyExpr& f);
HardyExpr differentiate(const HardyExpr& f, int times);

enum class Ordering { less, equivalent, greater };

struct Comparison {
  Ordering order;
  /// lim f/g when f ~ g.
  std::optional<double> ratio;
  /// Same, when the dominant coefficients are rationally proportional.
  std::optional<Rational> exact_ratio;
};

/// Growth comparison.  Throws PreconditionError if g is the zero function.
Comparison compare(const HardyExpr& f, const HardyExpr& g);

enum class Tendency { plus_infinity, minus_infinity, finite, zero };

struct GrowthClassification {
  Tendency tends_to;
  /// Limit value when tends_to is finite (or zero).
  Coefficient limit;
  /// Smallest integer k >= 0 with f(t) << t^k.
  int polynomial_growth_degree;
  bool is_sublinear;
  bool is_subfractional;
  bool is_strongly_nonpolynomial;
  /// Exactly a polynomial in t.
  bool is_polynomial;
};

GrowthClassification classify(const HardyExpr& f);

struct Decomposition {
  HardyExpr poly_part;
  HardyExpr snp_part;
};

/// Splits off the terms with nonnegative integer power and no log factor.
Decomposition decompose(const HardyExpr& f);

struct P1Result {
  bool holds;
  std::optional<Rational> witness_epsilon;
};

/// |f - p| / t^eps -> infinity for every p in Z[t], for some eps > 0.
P1Result check_P1(const HardyExpr& f);

struct P2Result {
  bool holds;
  std::optional<Coefficient> limit;
};

/// lim f(t) exists and is finite.
P2Result check_P2(const HardyExpr& f);

struct GrowthBasis {
  /// Elements with distinct, nontrivial non-polynomial growth.
  std::vector<HardyExpr> snp_basis;
  /// Elements of the form polynomial + o(1).
  std::vector<HardyExpr> poly_basis;
  /// inputs[i] = sum_j coeff_matrix[i][j] * basis[j], basis = snp_basis ++ poly_basis.
  std::vector<std::vector<Rational>> coeff_matrix;

  std::vector<HardyExpr> basis() const;
};

/// Basis of the span of linearly independent inputs, obtained by repeatedly
/// cancelling equal non-polynomial growth.  Throws PreconditionError on
/// linearly dependent input or when two equal-growth leading coefficients are
/// not rationally proportional.
GrowthBasis growth_basis(std::span<const HardyExpr> inputs);

struct IndependentSubset {
  std::vector<std::size_t> indices;
  /// inputs[i] = sum_j expansion[i][j] * inputs[indices[j]].
  std::vector<std::vector<Rational>> expansion;
};

/// Maximal linearly independent subset (first-come order) by exact Gaussian
/// elimination on term coefficients.
IndependentSubset independent_subset(std::span<const HardyExpr> inputs);

enum class Mod1Kind { equidistributed, converges_nonzero, converges_zero_signed };

struct Mod1Class {
  Mod1Kind kind;
  /// {lim f} in (0,1), for converges_nonzero.
  std::optional<double> limit_frac;
  /// converges_zero_signed: +1 when f decreases to its integer limit
  /// ({f} -> 0+), -1 when it increases ({f} -> 1-), 0 when f is constant.
  int approach = 0;
  /// Eventual sign of {f(n)} - 1/2 for converges_zero_signed.
  int frac_offset_sign = 0;
};

/// Mod-1 behaviour of the sequence f(n).  Throws PreconditionError when
/// neither check_P1 nor check_P2 holds.
Mod1Class classify_mod1(const HardyExpr& f);

/// Smallest t0 >= start such that for all t >= t0 the dominant term of f
/// strictly outweighs the sum of the others (so f has the sign of its
/// dominant term).  Searches powers of two up to `limit`; nullopt if none.
std::optional<double> dominance_threshold(const HardyExpr& f, double start = 2.0, double limit = 1e300);

}  // namespace hardynil::hardy
