#include "hardynil/constants.hpp"

#include <stdexcept>

namespace hardynil {

const std::array<ConstantInfo, 4>& constant_registry() {
  static const std::array<ConstantInfo, 4> registry{{
      {Constant::sqrt2, "sqrt2", "1.414213562373095048801688724209698078570", true},
      {Constant::phi, "phi", "1.618033988749894848204586834365638117720", true},
      {Constant::pi, "pi", "3.141592653589793238462643383279502884197", true},
      {Constant::e, "e", "2.718281828459045235360287471352662497757", true},
  }};
  return registry;
}

std::optional<Constant> find_constant(std::string_view name) {
  for (const auto& c : constant_registry())
    if (c.name == name) return c.id;
  return std::nullopt;
}

const ConstantInfo& info(Constant c) { return constant_registry()[static_cast<std::size_t>(c)]; }

DD value(Constant c) {
  static const std::array<DD, 4> values = [] {
    std::array<DD, 4> v;
    for (const auto& ci : constant_registry()) v[static_cast<std::size_t>(ci.id)] = parse_decimal(ci.decimal);
    return v;
  }();
  return values[static_cast<std::size_t>(c)];
}

Coefficient::Coefficient(Rational q) { parts_[0] = std::move(q); }

Coefficient Coefficient::named(Constant c, Rational scale) {
  Coefficient out;
  out.parts_[static_cast<std::size_t>(c) + 1] = std::move(scale);
  return out;
}

bool Coefficient::is_zero() const {
  for (const auto& p : parts_)
    if (p != 0) return false;
  return true;
}

bool Coefficient::is_rational() const {
  for (std::size_t i = 1; i < kBasisSize; ++i)
    if (parts_[i] != 0) return false;
  return true;
}

bool Coefficient::is_integer() const { return is_rational() && hardynil::is_integer(parts_[0]); }

int Coefficient::support_size() const {
  int n = 0;
  for (const auto& p : parts_) n += p != 0;
  return n;
}

std::optional<Rational> Coefficient::ratio_to(const Coefficient& other) const {
  std::optional<Rational> ratio;
  for (std::size_t i = 0; i < kBasisSize; ++i) {
    const bool a = parts_[i] != 0;
    const bool b = other.parts_[i] != 0;
    if (a != b) return std::nullopt;
    if (!a) continue;
    Rational r = parts_[i] / other.parts_[i];
    if (ratio && *ratio != r) return std::nullopt;
    ratio = r;
  }
  return ratio;
}

DD Coefficient::to_dd() const {
  DD sum = hardynil::to_dd(parts_[0]);
  for (const auto& ci : constant_registry()) {
    const auto& p = parts_[static_cast<std::size_t>(ci.id) + 1];
    if (p != 0) sum += hardynil::to_dd(p) * value(ci.id);
  }
  return sum;
}

int Coefficient::sign() const {
  if (is_zero()) return 0;
  if (is_rational()) return parts_[0] > 0 ? 1 : -1;
  DD v = to_dd();
  return v.hi() > 0.0 ? 1 : (v.hi() < 0.0 ? -1 : 0);
}

Coefficient Coefficient::operator-() const {
  Coefficient out = *this;
  for (auto& p : out.parts_) p = -p;
  return out;
}

Coefficient operator+(const Coefficient& a, const Coefficient& b) {
  Coefficient out = a;
  for (std::size_t i = 0; i < Coefficient::kBasisSize; ++i) out.parts_[i] += b.parts_[i];
  return out;
}

Coefficient operator*(const Coefficient& a, const Rational& s) {
  Coefficient out = a;
  for (auto& p : out.parts_) p *= s;
  return out;
}

std::string Coefficient::to_string() const {
  std::vector<std::string> pieces;
  if (parts_[0] != 0) pieces.push_back(hardynil::to_string(parts_[0]));
  for (const auto& ci : constant_registry()) {
    const auto& p = parts_[static_cast<std::size_t>(ci.id) + 1];
    if (p == 0) continue;
    if (p == 1)
      pieces.emplace_back(ci.name);
    else if (p == -1)
      pieces.push_back("-" + std::string(ci.name));
    else
      pieces.push_back(hardynil::to_string(p) + "*" + std::string(ci.name));
  }
  if (pieces.empty()) return "0";
  if (pieces.size() == 1) return pieces.front();
  std::string out = "(" + pieces.front();
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (pieces[i].front() == '-')
      out += " - " + pieces[i].substr(1);
    else
      out += " + " + pieces[i];
  }
  return out + ")";
}

}  // namespace hardynil
