#include "hardynil/windows.hpp"

#include <cmath>

#include "hardynil/errors.hpp"

namespace hardynil::windows {

using hardy::classify;
using hardy::differentiate;
using hardy::Tendency;

namespace {

void require_admissible(const HardyExpr& f) {
  if (f.is_zero()) throw PreconditionError("window: zero function");
  const auto cls = classify(f);
  if (!cls.is_strongly_nonpolynomial)
    throw PreconditionError("window: " + f.to_string() + " is not strongly non-polynomial");
  if (f.dominant().power <= 0)
    throw PreconditionError("window: " + f.to_string() + " does not dominate a positive power of t");
}

GrowthOrder inverse_root(const HardyExpr& deriv, int k) {
  const auto& d = deriv.dominant();
  return {-d.power / k, Rational(-d.logpow) / k};
}

/// Successive derivatives of one function, extended on demand.
class DerivativeTable {
 public:
  explicit DerivativeTable(HardyExpr f) { table_.push_back(std::move(f)); }
  const HardyExpr& operator[](int k) {
    while (static_cast<int>(table_.size()) <= k) table_.push_back(differentiate(table_.back()));
    return table_[static_cast<std::size_t>(k)];
  }

 private:
  std::vector<HardyExpr> table_;
};

bool order_usable(DerivativeTable& d, int k) {
  const HardyExpr& fk = d[k];
  return !fk.is_zero() && classify(fk).tends_to == Tendency::zero && !d[k + 1].is_zero();
}

std::optional<int> order_containing(DerivativeTable& d, const GrowthOrder& g, const WindowSearchOptions& opt) {
  int k = std::max(opt.min_order, 1);
  while (!order_usable(d, k)) {
    ++k;
    if (k > 4096) return std::nullopt;
  }
  for (; k <= 4096; ++k) {
    const GrowthOrder lower = inverse_root(d[k], k);
    const GrowthOrder upper = inverse_root(d[k + 1], k + 1);
    const bool above_lower = opt.strict_lower ? lower < g : lower <= g;
    if (above_lower && g < upper) return k;
    if (lower > g) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

ClassBounds class_bounds(const HardyExpr& f, int k) {
  require_admissible(f);
  if (k < 1) throw PreconditionError("class_bounds: order must be positive");
  const HardyExpr fk = differentiate(f, k);
  if (fk.is_zero() || classify(fk).tends_to != Tendency::zero)
    throw PreconditionError("class_bounds: order " + std::to_string(k) + " too small, f^(k) of " + f.to_string() +
                            " does not tend to 0");
  const HardyExpr fk1 = differentiate(fk);
  return {k, inverse_root(fk, k), inverse_root(fk1, k + 1), true};
}

bool member(const HardyExpr& window, const HardyExpr& f, int k) {
  if (window.is_zero()) return false;
  const ClassBounds b = class_bounds(f, k);
  const GrowthOrder g = window.growth();
  if (!(g < GrowthOrder{1, 0})) return false;
  return b.lower <= g && g < b.upper;
}

DD WindowPlan::window_at(std::int64_t n) const { return window().evaluate(DD(n)); }

bool WindowPlan::valid() const {
  const HardyExpr L = window();
  for (std::size_t i = 0; i < inputs.size(); ++i)
    if (!member(L, inputs[i], orders[i])) return false;
  return true;
}

std::optional<std::vector<int>> orders_for(std::span<const HardyExpr> fs, const Rational& gamma,
                                           const WindowSearchOptions& options) {
  std::vector<int> orders;
  for (const auto& f : fs) {
    require_admissible(f);
    DerivativeTable d(f);
    auto k = order_containing(d, GrowthOrder{gamma, 0}, options);
    if (!k) return std::nullopt;
    orders.push_back(*k);
  }
  return orders;
}

namespace {

/// Set of gamma with t^gamma in one class, as an interval on the exponent.
struct GammaInterval {
  Rational lo, hi;
  bool lo_open, hi_open;
  int k;
};

GammaInterval to_interval(const GrowthOrder& lower, const GrowthOrder& upper, bool strict, int k) {
  // (gamma, 0) > (p, l)  iff  gamma > p, or gamma == p and l < 0.
  GammaInterval iv{lower.power, upper.power, true, true, k};
  iv.lo_open = lower.logpow > 0 || (lower.logpow == 0 && strict);
  // (gamma, 0) < (p, l)  iff  gamma < p, or gamma == p and l > 0.
  iv.hi_open = !(upper.logpow > 0);
  return iv;
}

bool empty(const GammaInterval& iv) {
  return iv.lo > iv.hi || (iv.lo == iv.hi && (iv.lo_open || iv.hi_open));
}

bool above_lo(const Rational& x, const GammaInterval& iv) { return iv.lo_open ? x > iv.lo : x >= iv.lo; }
bool below_hi(const Rational& x, const GammaInterval& iv) { return iv.hi_open ? x < iv.hi : x <= iv.hi; }

/// Lazily enumerated classes of one function in ascending order.
class ClassSequence {
 public:
  ClassSequence(const HardyExpr& f, const WindowSearchOptions& opt) : d_(f), strict_(opt.strict_lower) {
    k_ = std::max(opt.min_order, 1);
    while (!order_usable(d_, k_)) ++k_;
  }
  GammaInterval next() {
    const int k = k_++;
    return to_interval(inverse_root(d_[k], k), inverse_root(d_[k + 1], k + 1), strict_, k);
  }

 private:
  DerivativeTable d_;
  bool strict_;
  int k_ = 1;
};

struct SternBrocotHit {
  Rational value;
  int depth;
};

/// Shallowest node of the Stern-Brocot tree on (0, 1) inside iv (root 1/2 at
/// depth 1), or nothing within the depth cap.
std::optional<SternBrocotHit> simplest_in(const GammaInterval& iv, int depth_cap, std::size_t& steps) {
  BigInt ln = 0, ld = 1, rn = 1, rd = 1;
  for (int depth = 1; depth <= depth_cap; ++depth) {
    ++steps;
    const Rational m(BigInt(ln + rn), BigInt(ld + rd));
    if (above_lo(m, iv) && below_hi(m, iv)) return SternBrocotHit{m, depth};
    if (!above_lo(m, iv)) {
      ln = numerator(m);
      ld = denominator(m);
    } else {
      rn = numerator(m);
      rd = denominator(m);
    }
  }
  return std::nullopt;
}

}  // namespace

WindowPlan find_common_window(std::span<const HardyExpr> fs, const WindowSearchOptions& options) {
  if (fs.empty()) throw PreconditionError("find_common_window: no inputs");
  for (const auto& f : fs) require_admissible(f);
  std::vector<ClassSequence> seqs;
  std::vector<GammaInterval> cur;
  for (const auto& f : fs) {
    seqs.emplace_back(f, options);
    cur.push_back(seqs.back().next());
  }

  // Sweep the intersections of the per-function class partitions in
  // ascending order; in each one the first node met by a level-order walk
  // (ascending within a level) is its shallowest node.  Any node at depth d
  // is at most d/(d+1), which bounds how far the sweep must go.
  std::optional<SternBrocotHit> best;
  std::vector<int> best_orders;
  std::size_t steps = 0;
  for (;;) {
    GammaInterval meet = cur[0];
    for (const auto& iv : cur) {
      if (iv.lo > meet.lo || (iv.lo == meet.lo && iv.lo_open)) {
        meet.lo = iv.lo;
        meet.lo_open = iv.lo_open;
      }
      if (iv.hi < meet.hi || (iv.hi == meet.hi && iv.hi_open)) {
        meet.hi = iv.hi;
        meet.hi_open = iv.hi_open;
      }
    }
    if (meet.lo < options.gamma_min) {
      meet.lo = options.gamma_min;
      meet.lo_open = false;
    }
    if (best && meet.lo >= Rational(best->depth, best->depth + 1)) break;
    const int depth_bound = best ? best->depth : options.depth_cap;
    if (meet.lo >= Rational(depth_bound, depth_bound + 1)) break;
    if (!empty(meet)) {
      if (auto hit = simplest_in(meet, depth_bound, steps)) {
        if (!best || hit->depth < best->depth) {
          best = hit;
          best_orders.clear();
          for (const auto& iv : cur) best_orders.push_back(iv.k);
        }
      }
    }
    if (steps > options.candidate_budget)
      throw PreconditionError("find_common_window: candidate budget " + std::to_string(options.candidate_budget) +
                              " exhausted");
    // Advance every sequence whose current class ends first.
    const GammaInterval* first_end = &cur[0];
    for (const auto& iv : cur)
      if (iv.hi < first_end->hi || (iv.hi == first_end->hi && iv.hi_open && !first_end->hi_open)) first_end = &iv;
    const Rational end = first_end->hi;
    const bool end_open = first_end->hi_open;
    for (std::size_t i = 0; i < cur.size(); ++i)
      if (cur[i].hi == end && cur[i].hi_open == end_open) cur[i] = seqs[i].next();
  }
  if (!best)
    throw PreconditionError("find_common_window: no common window up to depth " + std::to_string(options.depth_cap));
  return {best->value, {fs.begin(), fs.end()}, std::move(best_orders)};
}

DD TaylorWindow::operator()(DD h) const {
  DD acc(0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * h + *it;
  return acc;
}

TaylorWindow taylor_window(const HardyExpr& f, std::int64_t n, int k, double window_length) {
  if (k < 1) throw PreconditionError("taylor_window: order must be positive");
  if (n < 2) throw PreconditionError("taylor_window: base point must be at least 2");
  TaylorWindow out;
  out.base = n;
  DD factorial(1.0);
  HardyExpr d = f;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) {
      d = differentiate(d);
      factorial *= DD(static_cast<double>(j));
    }
    out.coeffs.push_back(hardy::Evaluator(d).at(n) / factorial);
  }
  const HardyExpr g = differentiate(d);
  if (g.is_zero()) return out;  // f is a polynomial of degree <= k
  const HardyExpr g1 = differentiate(g);
  if (!g1.is_zero()) {
    const auto tg = hardy::dominance_threshold(g);
    const auto tg1 = hardy::dominance_threshold(g1);
    if (!tg || !tg1 || *tg > static_cast<double>(n) || *tg1 > static_cast<double>(n))
      throw PreconditionError("taylor_window: N = " + std::to_string(n) + " is below the threshold where |f^(" +
                              std::to_string(k + 1) + ")| is provably monotone");
    if (g.dominant().coeff.sign() * g1.dominant().coeff.sign() >= 0)
      throw PreconditionError("taylor_window: |f^(" + std::to_string(k + 1) + ")| is eventually increasing");
  }
  factorial *= DD(static_cast<double>(k + 1));
  const DD gn = abs(hardy::Evaluator(g).at(n));
  const DD bound = gn * powi(DD(window_length), k + 1) / factorial;
  out.remainder_bound = bound.to_double() * (1.0 + 1e-12);
  return out;
}

}  // namespace hardynil::windows
