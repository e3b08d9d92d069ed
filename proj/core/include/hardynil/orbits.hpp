#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardynil/double_double.hpp"
#include "hardynil/hardy.hpp"
#include "hardynil/nilpotent.hpp"
#include "hardynil/rational.hpp"
#include "hardynil/windows.hpp"

namespace hardynil::orbits {

using hardy::HardyExpr;
using nilpotent::BlockElement;
using nilpotent::Unitriangular;
using Complex = std::complex<double>;

enum class FloorMode { real, integer_part };
enum class Precision { double_precision, double_double };

/// Orbit n -> b_1^{a_1(n)} ... b_k^{a_k(n)} x Gamma on a product of
/// unitriangular groups.  Generator i lives in block generators[i].block.
struct OrbitConfig {
  struct Generator {
    std::size_t block = 0;
    Unitriangular<DD> element;
  };

  std::vector<int> block_dims;
  std::vector<Generator> generators;
  std::vector<HardyExpr> functions;  // one per generator
  BlockElement<DD> base_point;       // identity when empty
  FloorMode floor_mode = FloorMode::real;
  Precision precision = Precision::double_double;
  /// Largest n accepted; beyond it double-double exponents lose the
  /// fractional accuracy the statistics need.
  std::int64_t n_cap = 10'000'000;
  /// Worker threads for chunked evaluation; 0 means hardware concurrency.
  unsigned threads = 0;

  std::size_t coord_count() const;
  std::size_t horizontal_dim() const;
  /// Offsets of block b inside the concatenated coordinate / horizontal lists.
  std::size_t coord_offset(std::size_t block) const;
  std::size_t horizontal_offset(std::size_t block) const;
  /// Horizontal projection of generator i embedded in the full torus.
  std::vector<DD> generator_horizontal(std::size_t i) const;
  /// Throws PreconditionError on shape errors or non-commuting generators
  /// sharing a block.
  void validate() const;
};

struct OrbitSample {
  std::int64_t n = 0;
  std::vector<double> coords;  // Malcev coordinates, in [0, 1)
  std::vector<double> horiz;   // horizontal torus point, in [0, 1)
};

/// Precompiled orbit evaluator (generator logarithms, function evaluators).
class OrbitEngine {
 public:
  explicit OrbitEngine(const OrbitConfig& cfg);

  const OrbitConfig& config() const { return cfg_; }
  /// Exponent of generator i at n (floored in integer-part mode).
  DD exponent(std::size_t i, std::int64_t n) const;
  OrbitSample sample(std::int64_t n) const;
  /// Writes into `out`, reusing its storage.
  void sample_into(std::int64_t n, OrbitSample& out) const;

 private:
  OrbitConfig cfg_;
  std::vector<hardy::Evaluator> evals_;
  std::vector<nilpotent::LieElement<DD>> logs_dd_;
  std::vector<nilpotent::LieElement<double>> logs_d_;
  BlockElement<double> base_d_;
};

OrbitSample orbit_point(const OrbitConfig& cfg, std::int64_t n);

/// Leaf size of the summation tree; prefix sums are aligned so that leaf j
/// covers n in [j*kLeaf + 1, (j+1)*kLeaf].
inline constexpr std::int64_t kLeaf = 1024;

/// Sums per-sample values over n = 1..N_max and reports the prefix sums at
/// requested N.  Leaves are summed left to right, leaves are combined by a
/// fixed binary tree, so results do not depend on the thread count.
/// `value` maps a sample to a vector of `width` complex numbers.
std::vector<std::vector<Complex>> prefix_sums(const OrbitEngine& engine, std::span<const std::int64_t> at,
                                              std::size_t width,
                                              const std::function<void(const OrbitSample&, Complex*)>& value,
                                              const std::function<void(const OrbitSample&)>& observe = {});

/// (1/N) sum_{n<=N} e(m . horiz(n)).
Complex weyl_sum(const OrbitConfig& cfg, std::span<const int> m, std::int64_t n);
/// Same at every N in an ascending grid, one pass.
std::vector<Complex> weyl_series(const OrbitConfig& cfg, std::span<const int> m, std::span<const std::int64_t> grid);

/// Histogram of samples on a grid^dim lattice of cells; discrepancy over
/// anchored boxes prod [0, m_i / grid).
class DiscrepancyAccumulator {
 public:
  DiscrepancyAccumulator(std::size_t dim, int grid);
  void add(std::span<const double> point);
  std::int64_t count() const { return count_; }
  /// max over anchored boxes of |fraction inside - volume|.  Throws
  /// PreconditionError when empty.
  double value() const;

 private:
  std::size_t dim_;
  int grid_;
  std::vector<std::int64_t> cells_;
  std::int64_t count_ = 0;
};

double box_discrepancy(std::span<const std::vector<double>> points, int grid);

/// Discrepancy of the Malcev coordinates of n = 1..N at each grid N.
std::vector<double> discrepancy_series(const OrbitConfig& cfg, int grid, std::span<const std::int64_t> ns);

/// p(n) = sum_i a_i binom(n, i).
template <class T>
struct BinomialPolynomial {
  std::vector<T> coeffs;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// Exact change of basis from monomials c_0..c_d (Stirling numbers of the
/// second kind): a_i = i! sum_j S(j, i) c_j.
BinomialPolynomial<Rational> to_binomial_basis(std::span<const Rational> monomial);
BinomialPolynomial<DD> to_binomial_basis(std::span<const DD> monomial);
/// Inverse change of basis (signed Stirling numbers of the first kind).
std::vector<Rational> from_binomial_basis(const BinomialPolynomial<Rational>& p);

/// max_{i>=1} N^i ||a_i||_{R/Z}.
Rational cinfty_norm(const BinomialPolynomial<Rational>& p, const Rational& n);
double cinfty_norm(const BinomialPolynomial<DD>& p, double n);

struct ObstructionReport {
  std::int64_t n = 0;
  double window_length = 0;
  double min_norm = 0;
  std::vector<int> argmin;
  std::size_t frequencies = 0;
};

/// Minimum over nonzero integer frequencies k, |k|_inf <= m_max, of the
/// C^inf[L(N)] norm of sum_i (k . u_i)(q_{i,N}(h) + p_{i,N}(h)): q from the
/// window's Taylor data for the non-polynomial parts, p_{i,N}(h) = p_i(N+h)
/// for polynomial parts, sub-fractional parts treated as constant.
ObstructionReport obstruction_search(const OrbitConfig& cfg, const windows::WindowPlan& plan, std::int64_t n,
                                     int m_max);

/// Registered test functions on the orbit sample of one factor.
///   "one"             constant 1
///   "hchar:m1,m2,.."  e(m . horiz), a horizontal character
///   "cchar:m1,m2,.."  e(m . coords), discontinuous on X (coordinate level)
///   "bump:m1,m2,.."   prod_j (1 - cos(2 pi m_j x_j)) / 2 over coords
class TestFunction {
 public:
  enum class Kind { one, horizontal_character, coordinate_character, bump };

  static TestFunction parse(std::string_view id);
  static TestFunction one() { return TestFunction(Kind::one, {}); }

  Kind kind() const { return kind_; }
  const std::vector<int>& frequencies() const { return freq_; }
  bool coordinate_level() const { return kind_ == Kind::coordinate_character || kind_ == Kind::bump; }
  std::string id() const;
  Complex operator()(std::span<const double> coords, std::span<const double> horiz) const;
  /// Haar integral over the full nilmanifold.
  Complex integral() const;
  /// Checks frequency length against the factor's dimensions.
  void check_shape(std::size_t coord_count, std::size_t horizontal_dim) const;

  friend bool operator==(const TestFunction&, const TestFunction&) = default;

 private:
  TestFunction(Kind k, std::vector<int> f) : kind_(k), freq_(std::move(f)) {}
  Kind kind_;
  std::vector<int> freq_;
};

/// Average of F over n in [N, N + L], F evaluated on the whole sample.
Complex window_average(const OrbitConfig& cfg, const TestFunction& f, std::int64_t n, std::int64_t window_length);

/// CSV dump `n,coord_1..coord_m,horiz_1..horiz_{d-1}` of n = first..last.
void write_samples_csv(std::ostream& os, const OrbitConfig& cfg, std::int64_t first, std::int64_t last);

}  // namespace hardynil::orbits
