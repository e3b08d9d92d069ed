#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hardynil/constants.hpp"
#include "hardynil/errors.hpp"
#include "hardynil/orbits.hpp"

using namespace hardynil;
using namespace hardynil::orbits;

namespace {

HardyExpr P(const char* s) { return hardy::parse(s); }

OrbitConfig torus(DD alpha, const char* f) {
  OrbitConfig cfg;
  cfg.block_dims = {2};
  Unitriangular<DD> b(2);
  b(0, 1) = alpha;
  cfg.generators.push_back({0, b});
  cfg.functions.push_back(P(f));
  return cfg;
}

Unitriangular<DD> heis(DD x, DD y, DD z) {
  Unitriangular<DD> b(3);
  b(0, 1) = x;
  b(1, 2) = y;
  b(0, 2) = z;
  return b;
}

/// Anchored-box discrepancy by direct counting.
double brute_discrepancy(const std::vector<std::vector<double>>& pts, int grid) {
  const std::size_t dim = pts.front().size();
  std::vector<int> m(dim, 1);
  double worst = 0.0;
  for (;;) {
    double vol = 1.0;
    for (int x : m) vol *= static_cast<double>(x) / grid;
    std::size_t inside = 0;
    for (const auto& p : pts) {
      bool in = true;
      for (std::size_t j = 0; j < dim; ++j) in = in && p[j] < static_cast<double>(m[j]) / grid;
      inside += in;
    }
    worst = std::max(worst, std::abs(static_cast<double>(inside) / pts.size() - vol));
    std::size_t pos = 0;
    while (pos < dim && m[pos] == grid) m[pos++] = 1;
    if (pos == dim) break;
    ++m[pos];
  }
  return worst;
}

}  // namespace

TEST(Orbits, WeylSumClosedForm) {
  const DD alpha = value(Constant::phi);
  const auto cfg = torus(alpha, "t");
  const int m[] = {1};
  const double a = alpha.to_double();
  for (std::int64_t n : {1, 7, 1000, 4097}) {
    const double expected = std::abs(std::sin(std::numbers::pi * n * a) / std::sin(std::numbers::pi * a)) / n;
    EXPECT_NEAR(std::abs(weyl_sum(cfg, m, n)), expected, 1e-12) << n;
  }
}

TEST(Orbits, RationalResonance) {
  const auto cfg = torus(DD(1.0) / DD(3.0), "t");
  const int m[] = {3};
  EXPECT_NEAR(std::abs(weyl_sum(cfg, m, 3000)), 1.0, 1e-9);
  const int zero[] = {0};
  EXPECT_EQ(weyl_sum(cfg, zero, 10), Complex(1.0, 0.0));
}

TEST(Orbits, WeylSeriesMatchesSingleCalls) {
  const auto cfg = torus(value(Constant::sqrt2), "t^{3/2}");
  const int m[] = {2};
  const std::int64_t grid[] = {5, 1024, 1025, 5000};
  const auto series = weyl_series(cfg, m, grid);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(series[i], weyl_sum(cfg, m, grid[i]));
}

TEST(Orbits, SumsIndependentOfThreadCount) {
  auto cfg = torus(value(Constant::phi), "t^{3/2}");
  const int m[] = {1};
  const std::int64_t grid[] = {100, 50'000};
  cfg.threads = 1;
  const auto one = weyl_series(cfg, m, grid);
  cfg.threads = 4;
  const auto four = weyl_series(cfg, m, grid);
  EXPECT_EQ(one, four);
}

TEST(Orbits, WeylSumAgainstDirectSum) {
  const auto cfg = torus(value(Constant::e), "t^{3/2}");
  const int m[] = {1};
  const std::int64_t n = 3000;
  Complex direct(0, 0);
  for (std::int64_t k = 1; k <= n; ++k) {
    const DD theta = value(Constant::e) * DD(static_cast<double>(k)) * sqrt(DD(static_cast<double>(k)));
    const double f = frac(theta).to_double();
    direct += Complex(std::cos(2 * std::numbers::pi * f), std::sin(2 * std::numbers::pi * f));
  }
  EXPECT_LT(std::abs(weyl_sum(cfg, m, n) - direct / static_cast<double>(n)), 1e-10);
}

TEST(Orbits, HeisenbergPointIsIntegerPower) {
  OrbitConfig cfg;
  cfg.block_dims = {3};
  const auto b = heis(value(Constant::phi), value(Constant::sqrt2), DD(0.0));
  cfg.generators.push_back({0, b});
  cfg.functions.push_back(P("2*t"));
  const auto s = orbit_point(cfg, 4);
  const auto expected = nilpotent::reduce_mod_lattice(nilpotent::power_int(b, 8));
  ASSERT_EQ(s.coords.size(), 3u);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(s.coords[j], expected.coords[j].to_double(), 1e-13);
  ASSERT_EQ(s.horiz.size(), 2u);
  EXPECT_NEAR(s.horiz[0], frac(DD(8.0) * value(Constant::phi)).to_double(), 1e-13);
}

TEST(Orbits, DoublePrecisionAgreesAtSmallN) {
  OrbitConfig cfg;
  cfg.block_dims = {3};
  cfg.generators.push_back({0, heis(value(Constant::phi), value(Constant::sqrt2), DD(0.25))});
  cfg.functions.push_back(P("t^{3/2}"));
  auto lo = cfg;
  lo.precision = Precision::double_precision;
  for (std::int64_t n : {1, 10, 100}) {
    const auto a = orbit_point(cfg, n), b = orbit_point(lo, n);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(a.coords[j], b.coords[j], 1e-8);
  }
}

TEST(Orbits, IntegerPartMode) {
  auto cfg = torus(value(Constant::sqrt2), "t^{3/2}");
  cfg.floor_mode = FloorMode::integer_part;
  const OrbitEngine engine(cfg);
  EXPECT_EQ(engine.exponent(0, 4), DD(8.0));
  EXPECT_EQ(engine.exponent(0, 5), DD(11.0));
  const auto s = engine.sample(5);
  EXPECT_NEAR(s.horiz[0], frac(DD(11.0) * value(Constant::sqrt2)).to_double(), 1e-14);
}

TEST(Orbits, PrecisionCap) {
  auto cfg = torus(DD(0.5), "t");
  cfg.n_cap = 100;
  const OrbitEngine engine(cfg);
  EXPECT_NO_THROW(engine.sample(100));
  EXPECT_THROW(engine.sample(101), PrecisionError);
}

TEST(Orbits, ConfigValidation) {
  OrbitConfig cfg = torus(DD(0.5), "t");
  cfg.functions.push_back(P("t"));
  EXPECT_THROW(cfg.validate(), PreconditionError);
  OrbitConfig h;
  h.block_dims = {3};
  h.generators = {{0, heis(DD(1.0), DD(0.0), DD(0.0))}, {0, heis(DD(0.0), DD(1.0), DD(0.0))}};
  h.functions = {P("t"), P("t")};
  EXPECT_THROW(h.validate(), PreconditionError);  // do not commute
  h.generators[1] = {0, heis(DD(2.0), DD(0.0), DD(0.5))};
  EXPECT_NO_THROW(h.validate());
  h.generators[1].block = 1;
  EXPECT_THROW(h.validate(), PreconditionError);
}

TEST(Discrepancy, SingleSample) {
  const std::vector<std::vector<double>> pts{{0.45}};
  EXPECT_NEAR(box_discrepancy(pts, 10), 0.5, 1e-15);
}

TEST(Discrepancy, MatchesBruteForce) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> pts(1 + trial * 13, std::vector<double>(2 + trial % 2));
    for (auto& p : pts)
      for (auto& x : p) x = u(rng);
    EXPECT_NEAR(box_discrepancy(pts, 5), brute_discrepancy(pts, 5), 1e-12);
  }
}

TEST(Discrepancy, LatticeIsSmall) {
  const int m = 100;
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) pts.push_back({(i + 0.5) / m, (j + 0.5) / m});
  EXPECT_LE(box_discrepancy(pts, 10), 1.0 / m);
}

TEST(Discrepancy, RandomPointsSmall) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> pts(100'000, std::vector<double>(3));
  for (auto& p : pts)
    for (auto& x : p) x = u(rng);
  EXPECT_LE(box_discrepancy(pts, 8), 0.01);
}

TEST(Discrepancy, SeriesMatchesPointList) {
  auto cfg = torus(value(Constant::phi), "t^{3/2}");
  const std::int64_t ns[] = {10, 2000};
  const auto series = discrepancy_series(cfg, 16, ns);
  const OrbitEngine engine(cfg);
  std::vector<std::vector<double>> pts;
  for (std::int64_t n = 1; n <= 2000; ++n) {
    pts.push_back(engine.sample(n).coords);
    if (n == 10) EXPECT_DOUBLE_EQ(series[0], box_discrepancy(pts, 16));
  }
  EXPECT_DOUBLE_EQ(series[1], box_discrepancy(pts, 16));
  EXPECT_THROW(DiscrepancyAccumulator(2, 4).value(), PreconditionError);
}

TEST(Binomial, Examples) {
  const std::vector<Rational> sq{0, 0, 1};
  EXPECT_EQ(to_binomial_basis(sq).coeffs, (std::vector<Rational>{0, 1, 2}));
  const std::vector<Rational> quarter{0, 0, Rational(1, 4)};
  EXPECT_EQ(to_binomial_basis(quarter).coeffs, (std::vector<Rational>{0, Rational(1, 4), Rational(1, 2)}));
}

TEST(Binomial, EvaluatesLikeMonomials) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-9, 9), den(1, 6), deg(0, 8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rational> mono(static_cast<std::size_t>(deg(rng) + 1));
    for (auto& x : mono) x = Rational(c(rng), den(rng));
    const auto b = to_binomial_basis(mono);
    for (int n = 0; n <= 12; ++n) {
      Rational lhs = 0, rhs = 0, pw = 1;
      for (const auto& x : mono) {
        lhs += x * pw;
        pw *= n;
      }
      BigInt binom = 1;
      for (std::size_t i = 0; i < b.coeffs.size(); ++i) {
        rhs += b.coeffs[i] * binom;
        binom = binom * (n - static_cast<int>(i)) / static_cast<int>(i + 1);
      }
      ASSERT_EQ(lhs, rhs);
    }
    auto back = from_binomial_basis(b);
    back.resize(mono.size(), Rational(0));
    EXPECT_EQ(back, mono);
  }
}

TEST(Binomial, DoubleDoubleMatchesExact) {
  const std::vector<Rational> mono{Rational(1, 3), Rational(-5, 7), Rational(2, 9), Rational(1, 11)};
  std::vector<DD> dd;
  for (const auto& x : mono) dd.push_back(to_dd(x));
  const auto exact = to_binomial_basis(mono);
  const auto approx = to_binomial_basis(std::span<const DD>(dd));
  for (std::size_t i = 0; i < exact.coeffs.size(); ++i)
    EXPECT_NEAR((approx.coeffs[i] - to_dd(exact.coeffs[i])).to_double(), 0.0, 1e-30);
}

TEST(CInftyNorm, Examples) {
  const std::vector<Rational> quarter{0, 0, Rational(1, 4)};
  EXPECT_EQ(cinfty_norm(to_binomial_basis(quarter), Rational(10)), Rational(50));
  const std::vector<Rational> integral{Rational(1, 2), 3, -7};
  EXPECT_EQ(cinfty_norm(to_binomial_basis(integral), Rational(1000)), Rational(0));
  BinomialPolynomial<Rational> lin{{0, Rational(3, 10)}};
  EXPECT_EQ(cinfty_norm(lin, Rational(10)), Rational(3));
  BinomialPolynomial<DD> lin_dd{{DD(0.0), DD(0.3)}};
  EXPECT_NEAR(cinfty_norm(lin_dd, 10.0), 3.0, 1e-14);
  EXPECT_THROW(cinfty_norm(lin, Rational(0)), PreconditionError);
}

TEST(Obstruction, IrrationalTorusGrows) {
  const auto cfg = torus(value(Constant::phi), "t^{3/2}");
  const auto plan = windows::find_common_window(std::vector<HardyExpr>{P("t^{3/2}")});
  const auto small = obstruction_search(cfg, plan, 1000, 8);
  const auto large = obstruction_search(cfg, plan, 100'000, 8);
  EXPECT_EQ(large.frequencies, 16u);
  EXPECT_GE(large.min_norm, 100.0);
  EXPECT_GT(large.min_norm, small.min_norm);
  EXPECT_EQ(large.argmin.size(), 1u);
}

TEST(Obstruction, TrivialGeneratorIsObstructed) {
  const auto cfg = torus(DD(0.0), "t^{3/2}");
  const auto plan = windows::find_common_window(std::vector<HardyExpr>{P("t^{3/2}")});
  EXPECT_EQ(obstruction_search(cfg, plan, 10'000, 3).min_norm, 0.0);
}

TEST(Obstruction, RationalPolynomialResonance) {
  const auto cfg = torus(DD(1.0) / DD(3.0), "t^2");
  const windows::WindowPlan plan{Rational(1, 2), {}, {}};
  const auto r = obstruction_search(cfg, plan, 10'000, 4);
  EXPECT_NEAR(r.min_norm, 0.0, 1e-9);
  EXPECT_EQ(std::abs(r.argmin[0]), 3);
}

TEST(Obstruction, NeedsPlanEntry) {
  const auto cfg = torus(value(Constant::phi), "t^{3/2}");
  const windows::WindowPlan plan{Rational(1, 2), {}, {}};
  EXPECT_THROW(obstruction_search(cfg, plan, 10'000, 2), PreconditionError);
}

TEST(TestFunctions, ParseAndIntegrals) {
  EXPECT_EQ(TestFunction::parse("one"), TestFunction::one());
  const auto h = TestFunction::parse("hchar:1,-2");
  EXPECT_EQ(h.id(), "hchar:1,-2");
  EXPECT_FALSE(h.coordinate_level());
  EXPECT_EQ(h.integral(), Complex(0, 0));
  EXPECT_EQ(TestFunction::parse("hchar:0,0").integral(), Complex(1, 0));
  EXPECT_EQ(TestFunction::parse("bump:1,0,2").integral(), Complex(0.25, 0));
  EXPECT_TRUE(TestFunction::parse("cchar:0,0,1").coordinate_level());
  EXPECT_THROW(TestFunction::parse("wave:1"), PreconditionError);
  EXPECT_THROW(TestFunction::parse("hchar:1,x"), PreconditionError);
  EXPECT_THROW(TestFunction::parse("hchar:"), PreconditionError);
  EXPECT_THROW(h.check_shape(3, 3), PreconditionError);
  EXPECT_NO_THROW(h.check_shape(3, 2));
}

TEST(TestFunctions, BumpIntegralByQuadrature) {
  const auto f = TestFunction::parse("bump:2,0,1");
  const int m = 40;
  double acc = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double c[] = {(i + 0.5) / m, (j + 0.5) / m, (k + 0.5) / m};
        acc += f(c, {}).real();
      }
  EXPECT_NEAR(acc / (m * m * m), f.integral().real(), 1e-12);
}

TEST(TestFunctions, WindowAverage) {
  const auto cfg = torus(value(Constant::phi), "t");
  EXPECT_EQ(window_average(cfg, TestFunction::one(), 1000, 50), Complex(1.0, 0.0));
  const auto chi = TestFunction::parse("hchar:1");
  Complex direct(0, 0);
  for (std::int64_t n = 1000; n <= 1050; ++n) {
    const double f = frac(DD(static_cast<double>(n)) * value(Constant::phi)).to_double();
    direct += Complex(std::cos(2 * std::numbers::pi * f), std::sin(2 * std::numbers::pi * f));
  }
  EXPECT_LT(std::abs(window_average(cfg, chi, 1000, 50) - direct / 51.0), 1e-12);
}

TEST(Samples, CsvLayout) {
  OrbitConfig cfg;
  cfg.block_dims = {3};
  cfg.generators.push_back({0, heis(value(Constant::phi), value(Constant::sqrt2), DD(0.0))});
  cfg.functions.push_back(P("t"));
  std::ostringstream os;
  write_samples_csv(os, cfg, 1, 3);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "n,coord_1,coord_2,coord_3,horiz_1,horiz_2");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
  }
  EXPECT_EQ(rows, 3);
}
