#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "hardynil/double_double.hpp"
#include "hardynil/rational.hpp"

namespace hardynil {

/// Named real constants allowed in coefficients and generator entries.
enum class Constant { sqrt2 = 0, phi = 1, pi = 2, e = 3 };

struct ConstantInfo {
  Constant id;
  std::string_view name;
  std::string_view decimal;  // 40 significant digits
  bool irrational;
};

const std::array<ConstantInfo, 4>& constant_registry();
std::optional<Constant> find_constant(std::string_view name);
const ConstantInfo& info(Constant c);
DD value(Constant c);

/// A real number in the Q-span of {1, sqrt2, phi, pi, e}.  Component 0 is the
/// rational part.  The basis is treated as Q-linearly independent, which makes
/// zero and integrality tests exact.
class Coefficient {
 public:
  static constexpr std::size_t kBasisSize = 5;

  Coefficient() = default;
  Coefficient(Rational q);  // NOLINT: rationals embed
  Coefficient(int q) : Coefficient(Rational(q)) {}  // NOLINT
  static Coefficient named(Constant c, Rational scale = 1);

  const Rational& component(std::size_t i) const { return parts_[i]; }
  const Rational& rational_part() const { return parts_[0]; }

  bool is_zero() const;
  /// Only the rational component is nonzero.
  bool is_rational() const;
  bool is_integer() const;
  /// Number of nonzero basis components.
  int support_size() const;

  /// Exact ratio this / other when the two are rationally proportional.
  std::optional<Rational> ratio_to(const Coefficient& other) const;

  DD to_dd() const;
  double to_double() const { return to_dd().to_double(); }
  /// Sign of the real value; 0 only for the zero coefficient.
  int sign() const;

  Coefficient operator-() const;
  friend Coefficient operator+(const Coefficient& a, const Coefficient& b);
  friend Coefficient operator-(const Coefficient& a, const Coefficient& b) { return a + (-b); }
  friend Coefficient operator*(const Coefficient& a, const Rational& s);
  friend Coefficient operator*(const Rational& s, const Coefficient& a) { return a * s; }
  friend bool operator==(const Coefficient& a, const Coefficient& b) { return a.parts_ == b.parts_; }

  /// Text accepted back by the expression parser, e.g. "3/2", "sqrt2",
  /// "-1/2*pi", "(1 + sqrt2)".
  std::string to_string() const;

 private:
  std::array<Rational, kBasisSize> parts_{};
};

}  // namespace hardynil
