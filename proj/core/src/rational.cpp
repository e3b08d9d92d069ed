#include "hardynil/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace hardynil {

namespace mp = boost::multiprecision;

BigInt floor_of(const Rational& q) {
  BigInt n = mp::numerator(q);
  BigInt d = mp::denominator(q);
  BigInt f = n / d;  // truncates toward zero
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

std::string to_string(const Rational& q) {
  if (is_integer(q)) return mp::numerator(q).str();
  return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational { throw std::invalid_argument("malformed rational: " + std::string(text)); };
  if (text.empty()) return fail();
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    ++i;
  }
  auto digits = [&](std::size_t& pos) {
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    return text.substr(start, pos - start);
  };
  std::string_view whole = digits(i);
  if (i == text.size()) {
    if (whole.empty()) return fail();
    Rational r{BigInt(std::string(whole))};
    return negative ? Rational(-r) : r;
  }
  if (text[i] == '/') {
    ++i;
    std::string_view den = digits(i);
    if (whole.empty() || den.empty() || i != text.size()) return fail();
    BigInt d(std::string{den});
    if (d == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    Rational r(BigInt(std::string(whole)), d);
    return negative ? Rational(-r) : r;
  }
  if (text[i] == '.') {
    ++i;
    std::string_view fracpart = digits(i);
    if ((whole.empty() && fracpart.empty()) || i != text.size()) return fail();
    BigInt num(std::string(whole.empty() ? "0" : whole) + std::string(fracpart));
    BigInt den = mp::pow(BigInt(10), static_cast<unsigned>(fracpart.size()));
    Rational r(num, den);
    return negative ? Rational(-r) : r;
  }
  return fail();
}

DD to_dd(const BigInt& n) {
  // Leading double, then the exact remainder.
  double hi = static_cast<double>(n);
  if (!std::isfinite(hi)) return DD(hi);
  BigInt rest = n - BigInt(hi);
  return DD::two_sum(hi, static_cast<double>(rest));
}

DD to_dd(const Rational& q) {
  return to_dd(mp::numerator(q)) / to_dd(mp::denominator(q));
}

std::int64_t to_int64(const BigInt& n) {
  if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer does not fit in 64 bits: " + n.str());
  return static_cast<std::int64_t>(n);
}

}  // namespace hardynil
