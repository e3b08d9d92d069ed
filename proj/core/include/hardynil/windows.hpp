#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hardynil/double_double.hpp"
#include "hardynil/hardy.hpp"

namespace hardynil::windows {

using hardy::GrowthOrder;
using hardy::HardyExpr;

/// Growth bounds of the class S(f, k): sub-linear windows L with
///   |f^(k)|^(-1/k)  <=  L  <  |f^(k+1)|^(-1/(k+1)).
struct ClassBounds {
  int k = 0;
  GrowthOrder lower;
  GrowthOrder upper;
  bool lower_inclusive = true;
  /// lower < upper.
  bool nonempty() const { return lower < upper; }
};

/// Requires f strongly non-polynomial with f >> t^delta, and f^(k) -> 0.
/// Throws PreconditionError otherwise.
ClassBounds class_bounds(const HardyExpr& f, int k);

/// Whether L lies in S(f, k) (and L << t).
bool member(const HardyExpr& window, const HardyExpr& f, int k);

struct WindowPlan {
  Rational gamma;  // L(t) = t^gamma
  std::vector<HardyExpr> inputs;
  std::vector<int> orders;

  HardyExpr window() const { return HardyExpr::monomial(1, gamma); }
  /// L(N) in double-double.
  DD window_at(std::int64_t n) const;
  /// member(window(), inputs[i], orders[i]) for every i.
  bool valid() const;
};

struct WindowSearchOptions {
  /// Candidates below this are skipped; the search starts at the root 1/2 of
  /// the Stern-Brocot tree on (0, 1).
  Rational gamma_min{1, 2};
  int depth_cap = 64;
  std::size_t candidate_budget = std::size_t{1} << 20;
  /// Require |f^(k)|^(-1/k) to grow strictly slower than L, so that the top
  /// Taylor coefficient L^k f^(k)/k! diverges.
  bool strict_lower = true;
  /// Smallest admissible order k (e.g. above the degree of polynomial parts).
  int min_order = 1;
};

/// Level-order walk of the Stern-Brocot tree on (0, 1), ascending within each
/// level; returns the first t^gamma that lies in some S(f_i, k_i) for every i.
/// Throws PreconditionError when an input is not admissible or the budget is
/// exhausted.
WindowPlan find_common_window(std::span<const HardyExpr> fs, const WindowSearchOptions& options = {});

/// Orders k_i with t^gamma in S(f_i, k_i), if they all exist.
std::optional<std::vector<int>> orders_for(std::span<const HardyExpr> fs, const Rational& gamma,
                                           const WindowSearchOptions& options = {});

/// Degree-k Taylor polynomial of f at N, q_j = f^(j)(N)/j!, with a certified
/// bound on |f(N+h) - q(h)| for 0 <= h <= L.
struct TaylorWindow {
  std::int64_t base = 0;
  std::vector<DD> coeffs;
  double remainder_bound = 0.0;

  DD operator()(DD h) const;
};

/// Throws PreconditionError unless |f^(k+1)| is provably non-increasing on
/// [N, infinity) (dominance of leading terms of f^(k+1) and f^(k+2)).
TaylorWindow taylor_window(const HardyExpr& f, std::int64_t n, int k, double window_length);

}  // namespace hardynil::windows
