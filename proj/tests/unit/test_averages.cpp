#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hardynil/averages.hpp"
#include "hardynil/constants.hpp"
#include "hardynil/errors.hpp"

using namespace hardynil;
using namespace hardynil::averages;

namespace {

HardyExpr P(const char* s) { return hardy::parse(s); }

nilpotent::Unitriangular<DD> heis(DD x, DD y, DD z = DD(0.0)) {
  nilpotent::Unitriangular<DD> b(3);
  b(0, 1) = x;
  b(1, 2) = y;
  b(0, 2) = z;
  return b;
}

nilpotent::Unitriangular<DD> circle(DD alpha) {
  nilpotent::Unitriangular<DD> b(2);
  b(0, 1) = alpha;
  return b;
}

AverageExperiment torus_experiment(const char* f, const char* test) {
  AverageExperiment exp;
  exp.factors.push_back({circle(value(Constant::phi)), P(f), {}, TestFunction::parse(test)});
  return exp;
}

AverageExperiment heis_pair() {
  AverageExperiment exp;
  const auto b = heis(value(Constant::phi), value(Constant::sqrt2));
  exp.factors.push_back({b, P("t^{3/2}"), {}, TestFunction::parse("hchar:1,0")});
  exp.factors.push_back({b, P("t*log(t)"), {}, TestFunction::parse("hchar:0,1")});
  exp.declared_closure = Closure::full;
  return exp;
}

}  // namespace

TEST(Averages, ConstantIntegrand) {
  auto exp = heis_pair();
  for (auto& f : exp.factors) f.test = TestFunction::one();
  const std::int64_t grid[] = {1, 10, 100, 1000};
  const auto s = convergence_series(exp, grid);
  ASSERT_EQ(s.rows.size(), 4u);
  for (const auto& r : s.rows) EXPECT_EQ(r.value, Complex(1.0, 0.0));
  for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(s.rows[i].cauchy_inc, 0.0);
  EXPECT_TRUE(std::isnan(s.rows[0].cauchy_inc));
  EXPECT_EQ(*s.rows[3].limit, Complex(1.0, 0.0));
}

TEST(Averages, SingleTorusMatchesWeylSum) {
  const auto exp = torus_experiment("t^{3/2}", "hchar:1");
  const int m[] = {1};
  const std::int64_t grid[] = {10, 1000, 1500, 20'000};
  const auto s = convergence_series(exp, grid);
  const auto w = orbits::weyl_series(exp.orbit_config(), m, grid);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(s.rows[i].value, w[i]);
    EXPECT_EQ(multiple_average(exp, grid[i]), w[i]);
  }
}

TEST(Averages, PredictedLimits) {
  auto exp = heis_pair();
  EXPECT_EQ(*predicted_limit(exp), Complex(0.0, 0.0));
  exp.factors[0].test = TestFunction::parse("bump:1,1,1");
  exp.factors[1].test = TestFunction::parse("bump:0,2,1");
  EXPECT_EQ(*predicted_limit(exp), Complex(1.0 / 32, 0.0));
  exp.declared_closure = Closure::undeclared;
  EXPECT_FALSE(predicted_limit(exp).has_value());
}

TEST(Averages, ProductOfIntegralsSmallAtModerateN) {
  const std::int64_t grid[] = {1000, 100'000};
  const auto s = convergence_series(heis_pair(), grid);
  EXPECT_LT(s.rows[1].abs_err, 0.05);
}

TEST(Averages, FloorModeConsistentOnIntegerPolynomials) {
  AverageExperiment exp;
  const auto b = heis(value(Constant::phi), value(Constant::sqrt2), DD(0.125));
  exp.factors.push_back({b, P("t^2"), {}, TestFunction::parse("bump:1,2,1")});
  exp.factors.push_back({b, P("3*t"), {}, TestFunction::parse("cchar:1,1,1")});
  auto floored = exp;
  floored.floor_mode = orbits::FloorMode::integer_part;
  const std::int64_t grid[] = {100, 3000};
  const auto a = convergence_series(exp, grid), c = convergence_series(floored, grid);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(a.rows[i].value, c.rows[i].value);
}

TEST(Averages, FloorModeDiffersOffIntegers) {
  auto exp = torus_experiment("t^{3/2}", "hchar:1");
  auto floored = exp;
  floored.floor_mode = orbits::FloorMode::integer_part;
  EXPECT_NE(multiple_average(exp, 1000), multiple_average(floored, 1000));
}

TEST(Averages, BasePointShiftOnTorus) {
  // b^{a(n)} b^m x: a character picks up the constant phase e(m alpha).
  auto exp = torus_experiment("t^{3/2}", "hchar:1");
  auto shifted = exp;
  const int m = 5;
  shifted.factors[0].base_point = nilpotent::power_int(exp.factors[0].generator, m);
  const double phase = 2 * std::numbers::pi * frac(DD(m) * value(Constant::phi)).to_double();
  const Complex expected = std::polar(1.0, phase) * multiple_average(exp, 5000);
  EXPECT_LT(std::abs(multiple_average(shifted, 5000) - expected), 1e-12);
}

TEST(Averages, BasePointShiftBoundedByLipschitz) {
  // Small base-point moves change a Lipschitz average by at most Lip * shift.
  AverageExperiment exp;
  exp.factors.push_back({heis(value(Constant::phi), value(Constant::sqrt2)), P("t^{3/2}"), {},
                         TestFunction::parse("hchar:1,1")});
  auto moved = exp;
  moved.factors[0].base_point = heis(DD(1e-3), DD(2e-3));
  const double lip = 2 * std::numbers::pi * 2;
  EXPECT_LE(std::abs(multiple_average(exp, 4000) - multiple_average(moved, 4000)), lip * 2e-3);
}

TEST(Averages, IndependentOfThreadCount) {
  auto exp = heis_pair();
  const std::int64_t grid[] = {100, 40'000};
  exp.threads = 1;
  const auto a = convergence_series(exp, grid);
  exp.threads = 3;
  const auto b = convergence_series(exp, grid);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(a.rows[i].value, b.rows[i].value);
}

TEST(Averages, Preconditions) {
  auto exp = heis_pair();
  const std::int64_t bad[] = {10, 10};
  EXPECT_THROW(convergence_series(exp, bad), PreconditionError);
  exp.factors[0].test = TestFunction::parse("hchar:1");
  EXPECT_THROW(multiple_average(exp, 10), PreconditionError);
  EXPECT_THROW(multiple_average(AverageExperiment{}, 10), PreconditionError);
}

TEST(Averages, CsvLayout) {
  const std::int64_t grid[] = {10, 100};
  std::ostringstream os;
  convergence_series(torus_experiment("t", "hchar:1"), grid).write_csv(os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "N,re(A_N),im(A_N),re(limit),im(limit),abs_err,cauchy_inc");
  std::getline(is, line);
  EXPECT_EQ(line.substr(0, 3), "10,");
  EXPECT_NE(line.find(",,,,"), std::string::npos);  // undeclared: no limit, no error
}

TEST(FloorDiscrepancy, EqualFunctions) {
  for (std::int64_t n = 1; n < 2000; n += 37) EXPECT_EQ(floor_discrepancy(P("t^{3/2}"), P("t^{3/2}"), n), 0);
  EXPECT_EQ(floor_threshold(P("t^{3/2}"), P("t^{3/2}")), 1);
}

TEST(FloorDiscrepancy, HalfPlusReciprocal) {
  using Big = boost::multiprecision::cpp_dec_float_50;
  const auto a1 = P("t^{3/2}"), a2 = P("t^{3/2} + 1/2 + t^(-1)");
  for (std::int64_t n = 2; n <= 5000; ++n) {
    const Big x = Big(n) * boost::multiprecision::sqrt(Big(n));
    const Big y = x + Big(1) / 2 + Big(1) / Big(n);
    const int expected = static_cast<int>(boost::multiprecision::floor(y) - boost::multiprecision::floor(x));
    ASSERT_EQ(floor_discrepancy(a1, a2, n), expected) << n;
    ASSERT_TRUE(expected == 0 || expected == 1);
  }
}

TEST(FloorDiscrepancy, IntegerShift) {
  const auto a1 = P("t^{3/2}"), a2 = P("t^{3/2} + 3");
  for (std::int64_t n = 1; n < 3000; n += 7) EXPECT_EQ(floor_discrepancy(a1, a2, n), 0);
}

TEST(FloorDiscrepancy, IrrationalLimit) {
  using Big = boost::multiprecision::cpp_dec_float_50;
  const auto a1 = P("t*log(t)"), a2 = P("t*log(t) + phi - t^{-1/2}");
  const std::int64_t t0 = floor_threshold(a1, a2);
  const Big phi = (1 + boost::multiprecision::sqrt(Big(5))) / 2;
  for (std::int64_t n = t0; n < t0 + 3000; ++n) {
    const Big x = Big(n) * boost::multiprecision::log(Big(n));
    const Big y = x + phi - 1 / boost::multiprecision::sqrt(Big(n));
    const int expected = static_cast<int>(boost::multiprecision::floor(y) - boost::multiprecision::floor(x)) - 1;
    ASSERT_EQ(floor_discrepancy(a1, a2, n), expected) << n;
    ASSERT_GE(expected, -1);
    ASSERT_LE(expected, 2);
  }
}

TEST(FloorDiscrepancy, RequiresFiniteLimit) {
  EXPECT_THROW(floor_discrepancy(P("t^{3/2}"), P("t^{3/2} + log(t)"), 10), PreconditionError);
  EXPECT_THROW(floor_threshold(P("t"), P("t^2")), PreconditionError);
}

TEST(Dependencies, PointwiseInstance) {
  const std::vector<HardyExpr> fs{P("t*log(t)"), P("t^{3/2}"), P("t^{3/2} + t*log(t)")};
  const auto r = dependency_report(fs);
  EXPECT_EQ(r.subset.indices, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.subset.expansion[2], (std::vector<Rational>{1, 1}));
  EXPECT_EQ(r.basis.snp_basis.size(), 2u);
}
