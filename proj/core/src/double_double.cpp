#include "hardynil/double_double.hpp"

#include <cctype>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace hardynil {

namespace {

inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  double e = b - (s - a);
  return {s, e};
}

}  // namespace

DD::DD(std::int64_t x) {
  hi_ = static_cast<double>(x);
  lo_ = static_cast<double>(x - static_cast<std::int64_t>(hi_));
}

DD DD::two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

DD DD::two_prod(double a, double b) {
  double p = a * b;
  double e = std::fma(a, b, -p);
  return {p, e};
}

DD operator+(DD x, DD y) {
  DD s = DD::two_sum(x.hi_, y.hi_);
  DD t = DD::two_sum(x.lo_, y.lo_);
  double lo = s.lo_ + t.hi_;
  s = quick_two_sum(s.hi_, lo);
  lo = s.lo_ + t.lo_;
  return quick_two_sum(s.hi_, lo);
}

DD operator*(DD x, DD y) {
  DD p = DD::two_prod(x.hi_, y.hi_);
  double lo = p.lo_ + (x.hi_ * y.lo_ + x.lo_ * y.hi_);
  return quick_two_sum(p.hi_, lo);
}

DD operator/(DD x, DD y) {
  double q1 = x.hi_ / y.hi_;
  DD r = x - y * DD(q1);
  double q2 = r.hi_ / y.hi_;
  r = r - y * DD(q2);
  double q3 = r.hi_ / y.hi_;
  DD q = quick_two_sum(q1, q2);
  return q + DD(q3);
}

DD abs(DD x) { return x.hi() < 0.0 ? -x : x; }

DD floor(DD x) {
  double hi = std::floor(x.hi());
  double lo = 0.0;
  if (hi == x.hi()) {
    lo = std::floor(x.lo());
    return DD::two_sum(hi, lo);
  }
  return {hi, lo};
}

DD frac(DD x) {
  DD f = x - floor(x);
  // Rounding in the subtraction can land exactly on 1.
  if (f.hi() >= 1.0) f = f - DD(1.0);
  if (f.hi() < 0.0) f = f + DD(1.0);
  return f;
}

double dist_to_int(DD x) {
  double f = frac(x).to_double();
  return f > 0.5 ? 1.0 - f : f;
}

bool isfinite(DD x) { return std::isfinite(x.hi()) && std::isfinite(x.lo()); }

DD ldexp(DD x, int e) { return {std::ldexp(x.hi(), e), std::ldexp(x.lo(), e)}; }

DD sqrt(DD x) {
  if (x.hi() <= 0.0) {
    if (x.hi() == 0.0) return DD(0.0);
    return DD(std::numeric_limits<double>::quiet_NaN());
  }
  double r = 1.0 / std::sqrt(x.hi());
  double h = x.hi() * r;
  DD hh = DD::two_prod(h, h);
  DD diff = x - hh;
  return DD::two_sum(h, diff.hi() * (r * 0.5));
}

DD powi(DD x, std::int64_t k) {
  if (k < 0) return DD(1.0) / powi(x, -k);
  DD result(1.0);
  DD base = x;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

DD exp(DD x) {
  if (x.hi() > 709.0) return DD(std::numeric_limits<double>::infinity());
  if (x.hi() < -745.0) return DD(0.0);
  if (x.hi() == 0.0 && x.lo() == 0.0) return DD(1.0);

  double k = std::nearbyint(x.hi() / dd_const::ln2.hi());
  DD r = x - dd_const::ln2 * DD(k);
  constexpr int kSquarings = 10;
  r = ldexp(r, -kSquarings);

  // expm1 of the reduced argument by Taylor series.
  DD s = r;
  DD term = r;
  for (int i = 2; i < 30; ++i) {
    term = term * r / DD(static_cast<double>(i));
    s += term;
    if (std::abs(term.hi()) < 1e-34 * std::abs(s.hi())) break;
  }
  for (int i = 0; i < kSquarings; ++i) s = ldexp(s, 1) + s * s;
  s += DD(1.0);
  return ldexp(s, static_cast<int>(k));
}

DD log(DD x) {
  if (x.hi() <= 0.0) return DD(std::numeric_limits<double>::quiet_NaN());
  if (x.hi() == 1.0 && x.lo() == 0.0) return DD(0.0);
  // One Newton step on exp(y) = x doubles the accuracy of the double seed.
  DD y(std::log(x.hi()));
  y = y + x * exp(-y) - DD(1.0);
  return y;
}

DD parse_decimal(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  DD value(0.0);
  int digits = 0;
  int scale = 0;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      value = value * DD(10.0) + DD(static_cast<double>(c - '0'));
      ++digits;
      if (seen_point) --scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (digits == 0) throw std::invalid_argument("malformed decimal literal: " + std::string(text));
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    std::size_t start = i;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
    if (i == text.size()) throw std::invalid_argument("malformed exponent: " + std::string(text));
    for (std::size_t j = i; j < text.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(text[j])))
        throw std::invalid_argument("malformed exponent: " + std::string(text));
    scale += std::stoi(std::string(text.substr(start)));
    i = text.size();
  }
  if (i != text.size()) throw std::invalid_argument("trailing characters in decimal literal: " + std::string(text));
  if (scale > 0) value *= powi(DD(10.0), scale);
  if (scale < 0) value /= powi(DD(10.0), -scale);
  return negative ? -value : value;
}

std::string to_string(DD x, int digits) {
  if (!isfinite(x)) return std::to_string(x.hi());
  if (x.hi() == 0.0) return "0";
  std::string out;
  if (x.hi() < 0.0) {
    out = "-";
    x = -x;
  }
  int e10 = static_cast<int>(std::floor(std::log10(x.hi())));
  DD m = e10 >= 0 ? x / powi(DD(10.0), e10) : x * powi(DD(10.0), -e10);
  if (m.hi() >= 10.0) {
    m /= DD(10.0);
    ++e10;
  } else if (m.hi() < 1.0) {
    m *= DD(10.0);
    --e10;
  }
  std::string mant;
  for (int i = 0; i < digits; ++i) {
    int d = static_cast<int>(std::floor(m.hi()));
    if (d < 0) d = 0;
    if (d > 9) d = 9;
    mant.push_back(static_cast<char>('0' + d));
    m = (m - DD(static_cast<double>(d))) * DD(10.0);
  }
  out += mant.substr(0, 1);
  out += '.';
  out += mant.substr(1);
  out += 'e';
  out += std::to_string(e10);
  return out;
}

}  // namespace hardynil
