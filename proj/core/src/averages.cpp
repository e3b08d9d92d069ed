#include "hardynil/averages.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "hardynil/errors.hpp"

namespace hardynil::averages {

using orbits::OrbitConfig;
using orbits::OrbitSample;

OrbitConfig AverageExperiment::orbit_config() const {
  OrbitConfig cfg;
  cfg.floor_mode = floor_mode;
  cfg.precision = precision;
  cfg.n_cap = n_cap;
  cfg.threads = threads;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    const int d = f.generator.dim();
    cfg.block_dims.push_back(d);
    cfg.generators.push_back({i, f.generator});
    cfg.functions.push_back(f.function);
    cfg.base_point.blocks.push_back(f.base_point.dim() == 0 ? nilpotent::Unitriangular<DD>::identity(d)
                                                           : f.base_point);
  }
  return cfg;
}

void AverageExperiment::validate() const {
  if (factors.empty()) throw PreconditionError("average: no factors");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& f = factors[i];
    const int d = f.generator.dim();
    if (d < 2) throw PreconditionError("average: factor " + std::to_string(i) + " has no group");
    if (f.base_point.dim() != 0 && f.base_point.dim() != d)
      throw PreconditionError("average: factor " + std::to_string(i) + " base point dimension mismatch");
    f.test.check_shape(static_cast<std::size_t>(d * (d - 1) / 2), static_cast<std::size_t>(d - 1));
  }
  orbit_config().validate();
}

std::optional<Complex> predicted_limit(const AverageExperiment& exp) {
  if (exp.declared_closure != Closure::full) return std::nullopt;
  Complex p(1.0, 0.0);
  for (const auto& f : exp.factors) p *= f.test.integral();
  return p;
}

ConvergenceSeries convergence_series(const AverageExperiment& exp, std::span<const std::int64_t> grid) {
  exp.validate();
  if (grid.empty()) throw PreconditionError("average: empty N grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1) throw PreconditionError("average: N must be at least 1");
    if (i > 0 && grid[i] <= grid[i - 1]) throw PreconditionError("average: N grid must be strictly increasing");
  }
  const OrbitConfig cfg = exp.orbit_config();
  const orbits::OrbitEngine engine(cfg);

  std::vector<std::int64_t> at(grid.begin(), grid.end());
  for (std::int64_t n : grid)
    if (n / 2 >= 1) at.push_back(n / 2);
  std::sort(at.begin(), at.end());
  at.erase(std::unique(at.begin(), at.end()), at.end());

  struct Slice {
    std::size_t coord, horiz, coord_len, horiz_len;
  };
  std::vector<Slice> slices;
  for (std::size_t b = 0; b < cfg.block_dims.size(); ++b) {
    const auto d = static_cast<std::size_t>(cfg.block_dims[b]);
    slices.push_back({cfg.coord_offset(b), cfg.horizontal_offset(b), d * (d - 1) / 2, d - 1});
  }
  const auto sums = orbits::prefix_sums(engine, at, 1, [&](const OrbitSample& s, Complex* out) {
    Complex v(1.0, 0.0);
    for (std::size_t i = 0; i < slices.size(); ++i) {
      const auto& sl = slices[i];
      v *= exp.factors[i].test(std::span<const double>(s.coords).subspan(sl.coord, sl.coord_len),
                               std::span<const double>(s.horiz).subspan(sl.horiz, sl.horiz_len));
    }
    *out = v;
  });
  auto average_at = [&](std::int64_t n) {
    const auto pos = static_cast<std::size_t>(std::lower_bound(at.begin(), at.end(), n) - at.begin());
    return sums[pos][0] / static_cast<double>(n);
  };

  const auto limit = predicted_limit(exp);
  ConvergenceSeries out;
  for (std::int64_t n : grid) {
    ConvergenceRow row;
    row.n = n;
    row.value = average_at(n);
    row.limit = limit;
    row.abs_err = limit ? std::abs(row.value - *limit) : std::numeric_limits<double>::quiet_NaN();
    row.cauchy_inc = n / 2 >= 1 ? std::abs(row.value - average_at(n / 2)) : std::numeric_limits<double>::quiet_NaN();
    out.rows.push_back(row);
  }
  return out;
}

Complex multiple_average(const AverageExperiment& exp, std::int64_t n) {
  const std::int64_t grid[] = {n};
  return convergence_series(exp, grid).rows.front().value;
}

void ConvergenceSeries::write_csv(std::ostream& os) const {
  os << "N,re(A_N),im(A_N),re(limit),im(limit),abs_err,cauchy_inc\n";
  char buf[32];
  auto put = [&](double v) {
    if (std::isnan(v)) return;
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    os << std::string_view(buf, static_cast<std::size_t>(r.ptr - buf));
  };
  for (const auto& r : rows) {
    os << r.n << ',';
    put(r.value.real());
    os << ',';
    put(r.value.imag());
    os << ',';
    if (r.limit) put(r.limit->real());
    os << ',';
    if (r.limit) put(r.limit->imag());
    os << ',';
    put(r.abs_err);
    os << ',';
    put(r.cauchy_inc);
    os << '\n';
  }
}

// ------------------------------------------------------------ floors

namespace {

struct Difference {
  HardyExpr d;
  Coefficient limit;
  BigInt floor_limit;
};

Difference difference(const HardyExpr& a1, const HardyExpr& a2) {
  HardyExpr d = a2 - a1;
  const auto p2 = hardy::check_P2(d);
  if (!p2.holds)
    throw PreconditionError("floor_discrepancy: " + d.to_string() + " has no finite limit");
  const Coefficient c = p2.limit ? *p2.limit : Coefficient(0);
  BigInt fl;
  if (c.is_rational()) {
    fl = floor_of(c.rational_part());
  } else {
    const DD v = c.to_dd();
    if (dist_to_int(v) < 1e-25) throw PrecisionError("floor_discrepancy: limit too close to an integer");
    fl = BigInt(static_cast<long long>(floor(v).to_double()));
  }
  return {std::move(d), c, fl};
}

}  // namespace

int floor_discrepancy(const HardyExpr& a1, const HardyExpr& a2, std::int64_t n) {
  if (n < 1) throw PreconditionError("floor_discrepancy: n must be at least 1");
  const Difference diff = difference(a1, a2);
  // Both floors come from one value of a1(n) so that a2 = a1 exactly gives 0.
  const DD x = hardy::Evaluator(a1).at(n);
  const DD y = diff.d.is_zero() ? DD(0.0) : hardy::Evaluator(diff.d).at(n);
  const DD e = floor(x + y) - floor(x) - DD(static_cast<double>(diff.floor_limit));
  const double v = e.to_double();
  if (std::abs(v) > 1e9) throw PrecisionError("floor_discrepancy: value out of range");
  const int out = static_cast<int>(v);
  if ((out < -2 || out > 2) && n >= floor_threshold(a1, a2))
    throw PrecisionError("floor_discrepancy: e(" + std::to_string(n) + ") = " + std::to_string(out) +
                         " outside {0, +-1, +-2}");
  return out;
}

std::int64_t floor_threshold(const HardyExpr& a1, const HardyExpr& a2) {
  const Difference diff = difference(a1, a2);
  const HardyExpr rest = diff.d - HardyExpr::constant(diff.limit);
  if (rest.is_zero()) return 1;
  // Past the dominance threshold of the derivative, rest is monotone and so
  // |rest| decreases to 0.
  const HardyExpr deriv = hardy::differentiate(rest);
  double t = 2.0;
  if (!deriv.is_zero()) {
    const auto td = hardy::dominance_threshold(deriv);
    if (!td) throw PreconditionError("floor_threshold: no monotone range found");
    t = std::max(t, *td);
  }
  while (abs(rest.evaluate(DD(t))) >= DD(1.0)) {
    t *= 2;
    if (t > 1e18) throw PreconditionError("floor_threshold: no threshold below 1e18");
  }
  return static_cast<std::int64_t>(std::ceil(t));
}

DependencyReport dependency_report(std::span<const HardyExpr> functions) {
  DependencyReport r;
  r.subset = hardy::independent_subset(functions);
  std::vector<HardyExpr> chosen;
  for (std::size_t i : r.subset.indices) chosen.push_back(functions[i]);
  r.basis = hardy::growth_basis(chosen);
  return r;
}

}  // namespace hardynil::averages
