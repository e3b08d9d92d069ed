#include "hardynil/nilpotent.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "hardynil/errors.hpp"

namespace hardynil::nilpotent {

namespace {

double to_double(double x) { return x; }
double to_double(DD x) { return x.to_double(); }
double floor_of(double x) { return std::floor(x); }
DD floor_of(DD x) { return floor(x); }

std::string scalar_string(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}
std::string scalar_string(DD x) { return hardynil::to_string(x, 33); }

template <class T>
T parse_scalar(std::string_view s) {
  if constexpr (std::is_same_v<T, DD>) {
    return parse_decimal(s);
  } else {
    return parse_decimal(s).to_double();
  }
}

/// x - floor(x) forced into [0, 1) (the subtraction can round up to 1).
template <class T>
std::pair<T, T> split_floor(T x) {
  T m = floor_of(x);
  T r = x - m;
  if (r >= T(1.0)) {
    m = m + T(1.0);
    r = r - T(1.0);
  }
  if (r < T(0.0)) r = T(0.0);
  return {m, r};
}

}  // namespace

template <class T>
StrictUpper<T>::StrictUpper(int d) : d_(d), m_(static_cast<std::size_t>(d * d), T(0.0)) {
  if (d < 1) throw PreconditionError("unitriangular dimension must be positive");
}

template <class T>
std::vector<T> StrictUpper<T>::entries() const {
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(d_ * (d_ - 1) / 2));
  for (int i = 0; i < d_; ++i)
    for (int j = i + 1; j < d_; ++j) out.push_back((*this)(i, j));
  return out;
}

template <class T>
void StrictUpper<T>::set_entries(std::span<const T> values) {
  if (values.size() != static_cast<std::size_t>(d_ * (d_ - 1) / 2))
    throw PreconditionError("expected " + std::to_string(d_ * (d_ - 1) / 2) + " strictly upper entries, got " +
                            std::to_string(values.size()));
  std::size_t k = 0;
  for (int i = 0; i < d_; ++i)
    for (int j = i + 1; j < d_; ++j) (*this)(i, j) = values[k++];
}

template <class T>
LieElement<T> LieElement<T>::from_entries(int d, std::span<const T> values) {
  LieElement x(d);
  x.set_entries(values);
  return x;
}

template <class T>
LieElement<T> LieElement<T>::operator+(const LieElement& y) const {
  if (y.d_ != this->d_) throw PreconditionError("dimension mismatch");
  LieElement r = *this;
  for (std::size_t i = 0; i < r.m_.size(); ++i) r.m_[i] = r.m_[i] + y.m_[i];
  return r;
}

template <class T>
LieElement<T> LieElement<T>::operator-(const LieElement& y) const {
  return *this + T(-1.0) * y;
}

template <class T>
LieElement<T> LieElement<T>::operator*(const LieElement& y) const {
  const int d = this->d_;
  if (y.d_ != d) throw PreconditionError("dimension mismatch");
  LieElement r(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 2; j < d; ++j) {
      T acc(0.0);
      for (int l = i + 1; l < j; ++l) acc = acc + (*this)(i, l) * y(l, j);
      r(i, j) = acc;
    }
  return r;
}

template <class T>
Unitriangular<T> Unitriangular<T>::from_entries(int d, std::span<const T> values) {
  Unitriangular g(d);
  g.set_entries(values);
  return g;
}

template <class T>
Unitriangular<T> Unitriangular<T>::operator*(const Unitriangular& h) const {
  const int d = this->d_;
  if (h.d_ != d)
    throw PreconditionError("multiply: dimension mismatch (" + std::to_string(d) + " vs " + std::to_string(h.d_) + ")");
  Unitriangular r(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      T acc = (*this)(i, j) + h(i, j);
      for (int l = i + 1; l < j; ++l) acc = acc + (*this)(i, l) * h(l, j);
      r(i, j) = acc;
    }
  return r;
}

template <class T>
LieElement<T> Unitriangular<T>::nilpotent_part() const {
  LieElement<T> n(this->d_);
  for (int i = 0; i < this->d_; ++i)
    for (int j = i + 1; j < this->d_; ++j) n(i, j) = (*this)(i, j);
  return n;
}

template <class T>
Unitriangular<T> Unitriangular<T>::inverse() const {
  // Back substitution on g * h = I, column by column.
  const int d = this->d_;
  Unitriangular h(d);
  for (int j = 0; j < d; ++j)
    for (int i = j - 1; i >= 0; --i) {
      T acc = (*this)(i, j);
      for (int l = i + 1; l < j; ++l) acc = acc + (*this)(i, l) * h(l, j);
      h(i, j) = -acc;
    }
  return h;
}

template <class T>
LieElement<T> log(const Unitriangular<T>& g) {
  const LieElement<T> n = g.nilpotent_part();
  LieElement<T> acc = n;
  LieElement<T> power = n;
  for (int j = 2; j < g.dim(); ++j) {
    power = power * n;
    const T c = T(j % 2 == 0 ? -1.0 : 1.0) / T(static_cast<double>(j));
    acc = acc + c * power;
  }
  return acc;
}

template <class T>
Unitriangular<T> exp(const LieElement<T>& x) {
  const int d = x.dim();
  LieElement<T> acc = x;
  LieElement<T> power = x;
  T factorial(1.0);
  for (int j = 2; j < d; ++j) {
    power = power * x;
    factorial = factorial * T(static_cast<double>(j));
    acc = acc + (T(1.0) / factorial) * power;
  }
  Unitriangular<T> g(d);
  for (int i = 0; i < d; ++i)
    for (int k = i + 1; k < d; ++k) g(i, k) = acc(i, k);
  return g;
}

template <class T>
Unitriangular<T> power_real(const Unitriangular<T>& b, const T& s) {
  return exp(s * log(b));
}

template <class T>
Unitriangular<T> power_int(const Unitriangular<T>& b, long long m) {
  if (m < 0) return power_int(b.inverse(), -m);
  Unitriangular<T> result(b.dim()), base = b;
  while (m > 0) {
    if (m & 1) result = result * base;
    base = base * base;
    m >>= 1;
  }
  return result;
}

template <class T>
Unitriangular<T> commutator(const Unitriangular<T>& g, const Unitriangular<T>& h) {
  return g * h * g.inverse() * h.inverse();
}

template <class T>
double max_abs_diff(const StrictUpper<T>& a, const StrictUpper<T>& b) {
  if (a.dim() != b.dim()) throw PreconditionError("dimension mismatch");
  double worst = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i + 1; j < a.dim(); ++j) worst = std::max(worst, std::abs(to_double(a(i, j) - b(i, j))));
  return worst;
}

std::vector<std::pair<int, int>> malcev_order(int d) {
  std::vector<std::pair<int, int>> out;
  for (int o = 1; o < d; ++o)
    for (int i = 0; i + o < d; ++i) out.emplace_back(i, i + o);
  return out;
}

template <class T>
Reduction<T> reduce_mod_lattice(const Unitriangular<T>& g) {
  const int d = g.dim();
  Reduction<T> r{g, Unitriangular<T>(d), {}};
  Unitriangular<T>& x = r.reduced;
  Unitriangular<T>& w = r.witness;
  for (auto [i, j] : malcev_order(d)) {
    const auto [m, rest] = split_floor(x(i, j));
    if (m == T(0.0)) continue;
    // Right-multiplying by E_{ij}(-m) adds -m * column i to column j.
    x(i, j) = rest;
    for (int row = 0; row < i; ++row) x(row, j) = x(row, j) - m * x(row, i);
    w(i, j) = w(i, j) - m;
    for (int row = 0; row < i; ++row) w(row, j) = w(row, j) - m * w(row, i);
  }
  r.coords.reserve(static_cast<std::size_t>(d * (d - 1) / 2));
  for (auto [i, j] : malcev_order(d)) r.coords.push_back(x(i, j));
  return r;
}

template <class T>
std::vector<T> horizontal_projection(const Unitriangular<T>& g) {
  std::vector<T> out;
  for (int i = 0; i + 1 < g.dim(); ++i) out.push_back(split_floor(g(i, i + 1)).second);
  return out;
}

template <class T>
std::string to_string(const StrictUpper<T>& g) {
  std::string out = std::to_string(g.dim()) + ";";
  bool first = true;
  for (const T& v : g.entries()) {
    if (!first) out += ",";
    first = false;
    out += scalar_string(v);
  }
  return out;
}

template <class T>
Unitriangular<T> parse_element(std::string_view text) {
  const auto semi = text.find(';');
  if (semi == std::string_view::npos) throw ParseError("expected 'd;' prefix", 0);
  int d = 0;
  const auto res = std::from_chars(text.data(), text.data() + semi, d);
  if (res.ec != std::errc() || res.ptr != text.data() + semi || d < 1) throw ParseError("bad dimension", 0);
  std::vector<T> values;
  std::size_t pos = semi + 1;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    try {
      values.push_back(parse_scalar<T>(text.substr(pos, comma - pos)));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), pos);
    }
    pos = comma + 1;
  }
  if (values.size() != static_cast<std::size_t>(d * (d - 1) / 2))
    throw ParseError("expected " + std::to_string(d * (d - 1) / 2) + " entries", text.size());
  return Unitriangular<T>::from_entries(d, values);
}

template <class T>
BlockElement<T> BlockElement<T>::identity(std::span<const int> dims) {
  BlockElement g;
  for (int d : dims) g.blocks.emplace_back(d);
  return g;
}

template <class T>
BlockElement<T> BlockElement<T>::operator*(const BlockElement& h) const {
  if (h.blocks.size() != blocks.size()) throw PreconditionError("multiply: block count mismatch");
  BlockElement r;
  r.blocks.reserve(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) r.blocks.push_back(blocks[i] * h.blocks[i]);
  return r;
}

template <class T>
std::vector<int> BlockElement<T>::dims() const {
  std::vector<int> out;
  for (const auto& b : blocks) out.push_back(b.dim());
  return out;
}

template <class T>
std::size_t BlockElement<T>::coord_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += static_cast<std::size_t>(b.dim() * (b.dim() - 1) / 2);
  return n;
}

template <class T>
std::size_t BlockElement<T>::horizontal_dim() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += static_cast<std::size_t>(b.dim() - 1);
  return n;
}

template <class T>
BlockReduction<T> reduce_mod_lattice(const BlockElement<T>& g) {
  BlockReduction<T> out;
  for (const auto& b : g.blocks) {
    Reduction<T> r = reduce_mod_lattice(b);
    out.reduced.blocks.push_back(std::move(r.reduced));
    out.coords.insert(out.coords.end(), r.coords.begin(), r.coords.end());
  }
  return out;
}

template <class T>
std::vector<T> horizontal_projection(const BlockElement<T>& g) {
  std::vector<T> out;
  for (const auto& b : g.blocks) {
    const auto h = horizontal_projection(b);
    out.insert(out.end(), h.begin(), h.end());
  }
  return out;
}

#define HARDYNIL_INSTANTIATE(T)                                                                  \
  template class StrictUpper<T>;                                                                 \
  template class LieElement<T>;                                                                  \
  template class Unitriangular<T>;                                                               \
  template struct BlockElement<T>;                                                               \
  template LieElement<T> log(const Unitriangular<T>&);                                           \
  template Unitriangular<T> exp(const LieElement<T>&);                                           \
  template Unitriangular<T> power_real(const Unitriangular<T>&, const T&);                       \
  template Unitriangular<T> power_int(const Unitriangular<T>&, long long);                       \
  template Unitriangular<T> commutator(const Unitriangular<T>&, const Unitriangular<T>&);        \
  template double max_abs_diff(const StrictUpper<T>&, const StrictUpper<T>&);                    \
  template Reduction<T> reduce_mod_lattice(const Unitriangular<T>&);                             \
  template std::vector<T> horizontal_projection(const Unitriangular<T>&);                        \
  template std::string to_string(const StrictUpper<T>&);                                         \
  template Unitriangular<T> parse_element<T>(std::string_view);                                  \
  template BlockReduction<T> reduce_mod_lattice(const BlockElement<T>&);                         \
  template std::vector<T> horizontal_projection(const BlockElement<T>&);

HARDYNIL_INSTANTIATE(double)
HARDYNIL_INSTANTIATE(DD)

#undef HARDYNIL_INSTANTIATE

}  // namespace hardynil::nilpotent
