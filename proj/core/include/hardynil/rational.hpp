#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "hardynil/double_double.hpp"

namespace hardynil {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline bool is_integer(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

/// Largest integer <= q.
BigInt floor_of(const Rational& q);

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational& q);

/// Accepts "p", "p/q", "-p/q" and plain decimals such as "0.25" (converted
/// exactly).  Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

DD to_dd(const BigInt& n);
DD to_dd(const Rational& q);
inline double to_double(const Rational& q) { return to_dd(q).to_double(); }

/// Narrowing conversion; throws std::overflow_error if out of range.
std::int64_t to_int64(const BigInt& n);

}  // namespace hardynil
