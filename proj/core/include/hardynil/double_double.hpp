#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace hardynil {

/// Unevaluated sum of two doubles, |lo| <= ulp(hi)/2.  Roughly 31 significant
/// decimal digits.  The basic kernels follow the usual error-free
/// transformations (two_sum, two_prod via fma).
class DD {
 public:
  constexpr DD() = default;
  constexpr DD(double x) : hi_(x), lo_(0.0) {}  // NOLINT: implicit by design of the numeric tower
  constexpr DD(int x) : hi_(x), lo_(0.0) {}     // NOLINT
  DD(std::int64_t x);                           // NOLINT
  constexpr DD(double hi, double lo) : hi_(hi), lo_(lo) {}

  constexpr double hi() const { return hi_; }
  constexpr double lo() const { return lo_; }
  constexpr double to_double() const { return hi_ + lo_; }

  static DD two_sum(double a, double b);
  static DD two_prod(double a, double b);

  friend DD operator-(DD x) { return {-x.hi_, -x.lo_}; }
  friend DD operator+(DD x, DD y);
  friend DD operator-(DD x, DD y) { return x + (-y); }
  friend DD operator*(DD x, DD y);
  friend DD operator/(DD x, DD y);

  DD& operator+=(DD y) { return *this = *this + y; }
  DD& operator-=(DD y) { return *this = *this - y; }
  DD& operator*=(DD y) { return *this = *this * y; }
  DD& operator/=(DD y) { return *this = *this / y; }

  friend bool operator==(DD x, DD y) { return x.hi_ == y.hi_ && x.lo_ == y.lo_; }
  friend std::partial_ordering operator<=>(DD x, DD y) {
    if (auto c = x.hi_ <=> y.hi_; c != 0) return c;
    return x.lo_ <=> y.lo_;
  }

 private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

DD abs(DD x);
DD floor(DD x);
DD sqrt(DD x);
DD exp(DD x);
DD log(DD x);
DD ldexp(DD x, int e);
/// x^k for integer k by repeated squaring.
DD powi(DD x, std::int64_t k);
/// Fractional part x - floor(x), in [0, 1).
DD frac(DD x);
/// Distance to the nearest integer, in [0, 1/2].
double dist_to_int(DD x);
bool isfinite(DD x);

/// Parses a plain decimal literal ("-12.5e3", "0.1") to DD accuracy.
/// Throws std::invalid_argument on malformed input.
DD parse_decimal(std::string_view text);

/// Shortest round-trippable rendering is not attempted; `digits` significant
/// digits are printed in scientific or fixed form.
std::string to_string(DD x, int digits = 32);

namespace dd_const {
inline constexpr DD pi{3.141592653589793116e+00, 1.224646799147353207e-16};
inline constexpr DD two_pi{6.283185307179586232e+00, 2.449293598294706414e-16};
inline constexpr DD ln2{6.931471805599452862e-01, 2.319046813846299558e-17};
}  // namespace dd_const

}  // namespace hardynil
