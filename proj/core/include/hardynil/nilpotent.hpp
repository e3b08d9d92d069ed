#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hardynil/double_double.hpp"

/// Unitriangular d x d matrices: the group G, its Lie algebra, the lattice
/// Gamma of integer matrices and the fundamental domain [0,1)^{d(d-1)/2} in
/// Malcev coordinates.  Scalars are double or DD.
namespace hardynil::nilpotent {

/// Strictly upper entries of a d x d matrix, dense row-major storage.
template <class T>
class StrictUpper {
 public:
  StrictUpper() = default;
  explicit StrictUpper(int d);

  int dim() const { return d_; }
  const T& operator()(int i, int j) const { return m_[static_cast<std::size_t>(i * d_ + j)]; }
  T& operator()(int i, int j) { return m_[static_cast<std::size_t>(i * d_ + j)]; }

  /// Row-major list of the d(d-1)/2 strictly upper entries.
  std::vector<T> entries() const;
  void set_entries(std::span<const T> values);

  friend bool operator==(const StrictUpper&, const StrictUpper&) = default;

 protected:
  int d_ = 0;
  std::vector<T> m_;
};

/// Nilpotent matrix X (zero diagonal).
template <class T>
class LieElement : public StrictUpper<T> {
 public:
  using StrictUpper<T>::StrictUpper;
  static LieElement from_entries(int d, std::span<const T> values);

  LieElement operator+(const LieElement& y) const;
  LieElement operator-(const LieElement& y) const;
  friend LieElement operator*(const T& s, const LieElement& x) {
    LieElement r = x;
    for (auto& v : r.m_) v = s * v;
    return r;
  }
  /// Matrix product (still strictly upper).
  LieElement operator*(const LieElement& y) const;
};

/// I + N with N strictly upper.
template <class T>
class Unitriangular : public StrictUpper<T> {
 public:
  using StrictUpper<T>::StrictUpper;
  static Unitriangular identity(int d) { return Unitriangular(d); }
  static Unitriangular from_entries(int d, std::span<const T> values);

  Unitriangular operator*(const Unitriangular& h) const;
  Unitriangular inverse() const;
  /// Strictly upper part N = g - I.
  LieElement<T> nilpotent_part() const;
};

template <class T>
LieElement<T> log(const Unitriangular<T>& g);
template <class T>
Unitriangular<T> exp(const LieElement<T>& x);
/// b^s = exp(s log b).
template <class T>
Unitriangular<T> power_real(const Unitriangular<T>& b, const T& s);
/// b^m by repeated squaring, m >= 0.
template <class T>
Unitriangular<T> power_int(const Unitriangular<T>& b, long long m);
/// g h g^-1 h^-1.
template <class T>
Unitriangular<T> commutator(const Unitriangular<T>& g, const Unitriangular<T>& h);

template <class T>
double max_abs_diff(const StrictUpper<T>& a, const StrictUpper<T>& b);

/// (i, j) pairs in Malcev order: offset j - i ascending, then i ascending.
std::vector<std::pair<int, int>> malcev_order(int d);

template <class T>
struct Reduction {
  /// g * witness, every entry in [0, 1).
  Unitriangular<T> reduced;
  /// Integer unitriangular matrix.
  Unitriangular<T> witness;
  /// Entries of `reduced` in Malcev order.
  std::vector<T> coords;
};

/// Right-multiplies by elementary integer matrices E_{i,i+o}(-floor(entry)),
/// offset o ascending.  Clearing an offset-o entry only touches entries of
/// larger offset.
template <class T>
Reduction<T> reduce_mod_lattice(const Unitriangular<T>& g);

/// Superdiagonal entries mod 1: the image in G / ([G,G] Gamma).
template <class T>
std::vector<T> horizontal_projection(const Unitriangular<T>& g);

/// "d;" followed by the row-major strictly upper entries, comma separated.
template <class T>
std::string to_string(const StrictUpper<T>& g);
/// Parses the format above.  Throws ParseError.
template <class T>
Unitriangular<T> parse_element(std::string_view text);

/// Direct product of unitriangular groups, realized block-diagonally.
/// Coordinates and horizontal coordinates are the per-block lists
/// concatenated in block order.
template <class T>
struct BlockElement {
  std::vector<Unitriangular<T>> blocks;

  static BlockElement identity(std::span<const int> dims);
  BlockElement operator*(const BlockElement& h) const;
  std::vector<int> dims() const;
  std::size_t coord_count() const;
  std::size_t horizontal_dim() const;
};

template <class T>
struct BlockReduction {
  BlockElement<T> reduced;
  std::vector<T> coords;
};

template <class T>
BlockReduction<T> reduce_mod_lattice(const BlockElement<T>& g);
template <class T>
std::vector<T> horizontal_projection(const BlockElement<T>& g);

extern template class StrictUpper<double>;
extern template class StrictUpper<DD>;
extern template class LieElement<double>;
extern template class LieElement<DD>;
extern template class Unitriangular<double>;
extern template class Unitriangular<DD>;
extern template struct BlockElement<double>;
extern template struct BlockElement<DD>;

}  // namespace hardynil::nilpotent
