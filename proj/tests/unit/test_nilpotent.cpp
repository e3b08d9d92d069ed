#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hardynil/errors.hpp"
#include "hardynil/nilpotent.hpp"

using namespace hardynil;
using namespace hardynil::nilpotent;

namespace {

using U = Unitriangular<double>;
using X = LieElement<double>;

U heis(double x, double y, double z) {
  const std::vector<double> v{x, z, y};  // row-major: (0,1), (0,2), (1,2)
  return U::from_entries(3, v);
}

U random_element(std::mt19937_64& rng, int d, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  U g(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) g(i, j) = u(rng);
  return g;
}

U random_lattice(std::mt19937_64& rng, int d) {
  std::uniform_int_distribution<int> u(-3, 3);
  U g(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) g(i, j) = u(rng);
  return g;
}

/// Plain O(d^3) dense product including the diagonal, as an oracle.
U dense_product(const U& a, const U& b) {
  const int d = a.dim();
  auto full = [d](const U& g, int i, int j) { return i == j ? 1.0 : (i < j ? g(i, j) : 0.0); };
  U r(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      double s = 0;
      for (int l = 0; l < d; ++l) s += full(a, i, l) * full(b, l, j);
      r(i, j) = s;
    }
  return r;
}

}  // namespace

TEST(NilpotentMultiply, IdentityAndInverse) {
  std::mt19937_64 rng(1);
  for (int d = 2; d <= 5; ++d) {
    const U g = random_element(rng, d, 2.0);
    EXPECT_EQ(g * U::identity(d), g);
    EXPECT_LT(max_abs_diff(g * g.inverse(), U::identity(d)), 1e-14);
    EXPECT_LT(max_abs_diff(g.inverse() * g, U::identity(d)), 1e-14);
  }
}

TEST(NilpotentMultiply, HeisenbergLaw) {
  const U p = heis(1.5, -2.0, 0.25) * heis(0.5, 3.0, 1.0);
  EXPECT_DOUBLE_EQ(p(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(p(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(p(0, 2), 0.25 + 1.0 + 1.5 * 3.0);
}

TEST(NilpotentMultiply, MatchesDenseProductAndAssociates) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + trial % 4;
    const U a = random_element(rng, d, 3.0), b = random_element(rng, d, 3.0), c = random_element(rng, d, 3.0);
    EXPECT_LT(max_abs_diff(a * b, dense_product(a, b)), 1e-12);
    EXPECT_LT(max_abs_diff((a * b) * c, a * (b * c)), 1e-12);
  }
}

TEST(NilpotentMultiply, DimensionMismatchThrows) {
  EXPECT_THROW(U(3) * U(4), PreconditionError);
}

TEST(NilpotentExpLog, HeisenbergExample) {
  const std::vector<double> v{1.0, 0.0, 1.0};
  const U g = exp(X::from_entries(3, v));
  EXPECT_DOUBLE_EQ(g(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(g(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(g(0, 2), 0.5);
  EXPECT_EQ(log(U::identity(4)), X(4));
}

TEST(NilpotentExpLog, RoundTrip) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 2 + trial % 4;
    const U g = random_element(rng, d, 1.0);
    EXPECT_LT(max_abs_diff(exp(log(g)), g), 1e-12);
    const X x = log(g);
    EXPECT_LT(max_abs_diff(log(exp(x)), x), 1e-12);
  }
}

TEST(NilpotentPower, HeisenbergClosedForm) {
  const U b = heis(1.0, 1.0, 0.0);
  for (double s : {-2.5, -1.0, 0.0, 0.3, 1.0, 2.0, 7.25}) {
    const U p = power_real(b, s);
    EXPECT_NEAR(p(0, 1), s, 1e-14);
    EXPECT_NEAR(p(1, 2), s, 1e-14);
    EXPECT_NEAR(p(0, 2), s * s / 2 - s / 2, 1e-13);
  }
  EXPECT_LT(max_abs_diff(power_real(b, 1.0), b), 1e-15);
}

TEST(NilpotentPower, IntegerPowersMatchRepeatedProducts) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 3;
    const U b = random_element(rng, d, 0.7);
    U acc = U::identity(d);
    for (int m = 1; m <= 8; ++m) {
      acc = acc * b;
      EXPECT_LT(max_abs_diff(power_real(b, double(m)), acc), 1e-12);
      EXPECT_LT(max_abs_diff(power_int(b, m), acc), 1e-12);
    }
  }
}

TEST(NilpotentPower, OneParameterSubgroupLaw) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 2 + trial % 4;
    const U b = random_element(rng, d, 1.0);
    const double s = u(rng), t = u(rng);
    EXPECT_LT(max_abs_diff(power_real(b, s + t), power_real(b, s) * power_real(b, t)), 1e-12);
  }
}

TEST(NilpotentCommutator, TrivialForPowersOfOneElement) {
  const U b = heis(0.3, 0.7, 0.1);
  EXPECT_LT(max_abs_diff(commutator(power_real(b, 2.5), power_real(b, -1.25)), U::identity(3)), 1e-14);
  const U c = commutator(heis(1, 0, 0), heis(0, 1, 0));
  EXPECT_DOUBLE_EQ(c(0, 2), 1.0);
}

TEST(NilpotentReduce, LatticeElementsReduceToOrigin) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 4;
    const U g = random_lattice(rng, d);
    const auto r = reduce_mod_lattice(g);
    for (double c : r.coords) EXPECT_EQ(c, 0.0);
    EXPECT_LT(max_abs_diff(r.witness, g.inverse()), 1e-12);
  }
}

TEST(NilpotentReduce, HeisenbergExample) {
  const auto r = reduce_mod_lattice(heis(2.3, 0.7, 0.0));
  ASSERT_EQ(r.coords.size(), 3u);
  EXPECT_NEAR(r.coords[0], 0.3, 1e-15);  // (0,1)
  EXPECT_NEAR(r.coords[1], 0.7, 1e-15);  // (1,2)
  EXPECT_NEAR(r.coords[2], 0.0, 1e-15);  // (0,2)
}

TEST(NilpotentReduce, AgreesWithBruteForceSearch) {
  // Oracle: scan integer Heisenberg gamma with small entries for the unique
  // one putting g * gamma in [0,1)^3.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int trial = 0; trial < 50; ++trial) {
    const U g = heis(u(rng), u(rng), u(rng));
    int hits = 0;
    U found(3);
    for (int a = -4; a <= 4; ++a)
      for (int b = -4; b <= 4; ++b)
        for (int c = -16; c <= 16; ++c) {
          const U h = g * heis(a, b, c);
          if (h(0, 1) >= 0 && h(0, 1) < 1 && h(1, 2) >= 0 && h(1, 2) < 1 && h(0, 2) >= 0 && h(0, 2) < 1) {
            ++hits;
            found = h;
          }
        }
    ASSERT_EQ(hits, 1);
    EXPECT_LT(max_abs_diff(reduce_mod_lattice(g).reduced, found), 1e-12);
  }
}

TEST(NilpotentReduce, RightInvariantAndIdempotent) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 2 + trial % 4;
    const U g = random_element(rng, d, 5.0);
    const auto r = reduce_mod_lattice(g);
    for (double c : r.coords) {
      EXPECT_GE(c, 0.0);
      EXPECT_LT(c, 1.0);
    }
    EXPECT_LT(max_abs_diff(g * r.witness, r.reduced), 1e-12);
    const auto shifted = reduce_mod_lattice(g * random_lattice(rng, d));
    for (std::size_t i = 0; i < r.coords.size(); ++i) {
      // Coordinates live on the circle; compare modulo 1.
      double diff = std::abs(shifted.coords[i] - r.coords[i]);
      diff = std::min(diff, 1.0 - diff);
      EXPECT_LT(diff, 1e-12);
    }
    EXPECT_EQ(reduce_mod_lattice(r.reduced).coords, r.coords);
  }
}

TEST(NilpotentReduce, HaarIsPreservedByLeftTranslation) {
  // Uniform Malcev coordinates pushed forward by x -> g x and re-reduced stay
  // uniform: chi-square on a 4^3 grid, 64 cells, 40000 points.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  const U g = heis(0.37, 1.91, -0.42);
  constexpr int grid = 4, n = 40000;
  std::vector<int> counts(grid * grid * grid, 0);
  for (int i = 0; i < n; ++i) {
    const auto r = reduce_mod_lattice(g * heis(u(rng), u(rng), u(rng)));
    int cell = 0;
    for (double c : r.coords) cell = cell * grid + std::min(grid - 1, int(c * grid));
    ++counts[cell];
  }
  const double expected = double(n) / counts.size();
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 63 degrees of freedom: mean 63, sd ~11.2; 120 is beyond 5 sd.
  EXPECT_LT(chi2, 120.0);
}

TEST(NilpotentHorizontal, ProjectionIsHomomorphism) {
  EXPECT_EQ(horizontal_projection(U::identity(4)), std::vector<double>(3, 0.0));
  const auto h = horizontal_projection(heis(2.25, -0.5, 7.0));
  EXPECT_DOUBLE_EQ(h[0], 0.25);
  EXPECT_DOUBLE_EQ(h[1], 0.5);
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + trial % 4;
    const U a = random_element(rng, d, 3.0), b = random_element(rng, d, 3.0);
    const auto pa = horizontal_projection(a), pb = horizontal_projection(b), pab = horizontal_projection(a * b);
    for (std::size_t i = 0; i < pab.size(); ++i) {
      double diff = std::abs(std::fmod(pa[i] + pb[i], 1.0) - pab[i]);
      diff = std::min(diff, 1.0 - diff);
      EXPECT_LT(diff, 1e-12);
    }
  }
}

TEST(NilpotentSerialize, RoundTrip) {
  const U g = heis(0.1, -2.5, 1e-20);
  EXPECT_EQ(to_string(g), "3;0.1,1e-20,-2.5");
  EXPECT_EQ(parse_element<double>(to_string(g)), g);
  using UD = Unitriangular<DD>;
  UD h(4);
  h(0, 3) = DD(1.0) / DD(3.0);
  h(1, 2) = sqrt(DD(2.0));
  const UD back = parse_element<DD>(to_string(h));
  EXPECT_LT(max_abs_diff(back, h), 1e-31);
  EXPECT_THROW(parse_element<double>("3;1,2"), ParseError);
  EXPECT_THROW(parse_element<double>("x;1"), ParseError);
  EXPECT_THROW(parse_element<double>("2;abc"), ParseError);
}

TEST(NilpotentDD, LargePowersKeepFractionalPrecision) {
  // b^s with s = 10^9 + 1/3: the (0,2) entry is about s^2/2 ~ 5e17; double-double
  // keeps its fractional part accurate to ~1e-14, checked against the exact
  // closed form s^2/2 - s/2 evaluated in double-double.
  using UD = Unitriangular<DD>;
  UD b(3);
  b(0, 1) = DD(1.0);
  b(1, 2) = DD(1.0);
  const DD s = DD(1e9) + DD(1.0) / DD(3.0);
  const UD p = power_real(b, s);
  const DD expected = s * s / DD(2.0) - s / DD(2.0);
  EXPECT_LT(std::abs((p(0, 2) - expected).to_double()), 1e-13);
  const auto r = reduce_mod_lattice(p);
  EXPECT_NEAR(r.coords[0].to_double(), 1.0 / 3, 1e-15);
  // Clearing (1,2) by m = 10^9 subtracts m times the already reduced (0,1) entry.
  const DD m(1e9);
  EXPECT_NEAR(r.coords[2].to_double(), frac(expected - m * (s - m)).to_double(), 1e-12);
}

TEST(NilpotentBlocks, ProductGroupConcatenatesCoordinates) {
  using B = BlockElement<double>;
  const std::vector<int> dims{3, 2};
  B g = B::identity(dims);
  g.blocks[0] = heis(1.25, 0.5, 2.75);
  g.blocks[1](0, 1) = -0.25;
  EXPECT_EQ(g.coord_count(), 4u);
  EXPECT_EQ(g.horizontal_dim(), 3u);
  const auto r = reduce_mod_lattice(g);
  EXPECT_EQ(r.coords.size(), 4u);
  EXPECT_DOUBLE_EQ(r.coords[0], 0.25);
  EXPECT_DOUBLE_EQ(r.coords[3], 0.75);
  EXPECT_EQ(horizontal_projection(g), (std::vector<double>{0.25, 0.5, 0.75}));
  const B sq = g * g;
  EXPECT_EQ(sq.blocks[0], g.blocks[0] * g.blocks[0]);
}
