#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "hardynil/hardy.hpp"
#include "hardynil/orbits.hpp"

namespace hardynil::averages {

using hardy::HardyExpr;
using orbits::Complex;
using orbits::TestFunction;

enum class Closure { full, undeclared };

/// One factor b_i^{a_i(n)} x_i on its own unitriangular group, tested
/// against F_i.
struct Factor {
  nilpotent::Unitriangular<DD> generator;
  HardyExpr function;
  nilpotent::Unitriangular<DD> base_point;  // identity when dim() == 0
  TestFunction test = TestFunction::one();
};

/// Multi-factor experiment, realized block-diagonally: factor i is block i.
struct AverageExperiment {
  std::vector<Factor> factors;
  orbits::FloorMode floor_mode = orbits::FloorMode::real;
  orbits::Precision precision = orbits::Precision::double_double;
  std::int64_t n_cap = 10'000'000;
  unsigned threads = 0;
  Closure declared_closure = Closure::undeclared;

  orbits::OrbitConfig orbit_config() const;
  /// Checks group shapes and test-function shapes; throws PreconditionError.
  void validate() const;
};

/// Product of the Haar integrals of the F_i, or nothing when the closure is
/// undeclared.
std::optional<Complex> predicted_limit(const AverageExperiment& exp);

/// (1/N) sum_{n<=N} prod_i F_i(point of factor i at n).
Complex multiple_average(const AverageExperiment& exp, std::int64_t n);

struct ConvergenceRow {
  std::int64_t n = 0;
  Complex value;
  std::optional<Complex> limit;
  /// |value - limit|; NaN without a limit.
  double abs_err = 0;
  /// |A_N - A_{floor(N/2)}|.
  double cauchy_inc = 0;
};

struct ConvergenceSeries {
  std::vector<ConvergenceRow> rows;
  /// `N,re(A_N),im(A_N),re(limit),im(limit),abs_err,cauchy_inc`; limit
  /// columns are empty when undeclared.
  void write_csv(std::ostream& os) const;
};

/// One pass over n = 1..max(grid); N strictly increasing.
ConvergenceSeries convergence_series(const AverageExperiment& exp, std::span<const std::int64_t> grid);

/// floor(a2(n)) - floor(a1(n)) - floor(c), c = lim (a2 - a1).  Throws
/// PreconditionError unless a2 - a1 has a finite limit.  For n at or past
/// floor_threshold the value lies in {-1, 0, 1, 2}; a value outside
/// {0, +-1, +-2} there raises PrecisionError.
int floor_discrepancy(const HardyExpr& a1, const HardyExpr& a2, std::int64_t n);

/// First n past which a2 - a1 is monotone and within 1 of its limit.
std::int64_t floor_threshold(const HardyExpr& a1, const HardyExpr& a2);

/// Linear relations among the exponent functions and the growth basis of
/// an independent subset.
struct DependencyReport {
  hardy::IndependentSubset subset;
  hardy::GrowthBasis basis;
};

DependencyReport dependency_report(std::span<const HardyExpr> functions);

}  // namespace hardynil::averages
