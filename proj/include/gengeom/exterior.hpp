#pragma once

#include "gengeom/core.hpp"

#include <bit>
#include <cstdint>
#include <map>

namespace gengeom {

// Multi-index over an ordered basis: bit j set <=> basis covector j present.
using Mask = std::uint64_t;

template <class Scalar>
using DenseForm = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using SparseForm = std::map<Mask, Scalar>;

inline int degree(Mask m) { return std::popcount(m); }

inline Mask bit(int i) { return Mask(1) << i; }

inline Mask full_mask(int m) { return m >= 64 ? ~Mask(0) : bit(m) - 1; }

// (-1)^(number of set bits below i)
inline double sign_below(Mask m, int i) { return (std::popcount(m & (bit(i) - 1)) & 1) ? -1.0 : 1.0; }

// e^I ^ e^J = wedge_sign(I, J) e^(I|J); 0 when they overlap.
inline double wedge_sign(Mask i, Mask j) {
  if (i & j) return 0.0;
  int inv = 0;
  for (Mask rest = j; rest; rest &= rest - 1) {
    int b = std::countr_zero(rest);
    inv += std::popcount(b + 1 >= 64 ? Mask(0) : (i >> (b + 1)));
  }
  return (inv & 1) ? -1.0 : 1.0;
}

template <class Scalar>
void wedge_into(int i, const DenseForm<Scalar>& f, Scalar coef, DenseForm<Scalar>& out) {
  const Mask b = bit(i);
  for (Index m = 0; m < f.size(); ++m) {
    const Mask mm = static_cast<Mask>(m);
    if ((mm & b) || f(m) == Scalar(0)) continue;
    out(static_cast<Index>(mm | b)) += coef * sign_below(mm, i) * f(m);
  }
}

template <class Scalar>
void iota_into(int i, const DenseForm<Scalar>& f, Scalar coef, DenseForm<Scalar>& out) {
  const Mask b = bit(i);
  for (Index m = 0; m < f.size(); ++m) {
    const Mask mm = static_cast<Mask>(m);
    if (!(mm & b) || f(m) == Scalar(0)) continue;
    out(static_cast<Index>(mm ^ b)) += coef * sign_below(mm, i) * f(m);
  }
}

template <class Scalar>
DenseForm<Scalar> wedge(int i, const DenseForm<Scalar>& f) {
  DenseForm<Scalar> out = DenseForm<Scalar>::Zero(f.size());
  wedge_into(i, f, Scalar(1), out);
  return out;
}

template <class Scalar>
DenseForm<Scalar> iota(int i, const DenseForm<Scalar>& f) {
  DenseForm<Scalar> out = DenseForm<Scalar>::Zero(f.size());
  iota_into(i, f, Scalar(1), out);
  return out;
}

template <class Scalar>
DenseForm<Scalar> wedge(const DenseForm<Scalar>& a, const DenseForm<Scalar>& b) {
  DenseForm<Scalar> out = DenseForm<Scalar>::Zero(a.size());
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i) == Scalar(0)) continue;
    for (Index j = 0; j < b.size(); ++j) {
      if (b(j) == Scalar(0)) continue;
      double s = wedge_sign(static_cast<Mask>(i), static_cast<Mask>(j));
      if (s != 0.0) out(i | j) += s * a(i) * b(j);
    }
  }
  return out;
}

// Coefficient of the full mask in a ^ b, over m generators.
template <class Scalar>
Scalar top_of_wedge(const DenseForm<Scalar>& a, const DenseForm<Scalar>& b, int m) {
  const Mask full = full_mask(m);
  Scalar acc(0);
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i) == Scalar(0)) continue;
    const Mask c = full ^ static_cast<Mask>(i);
    acc += wedge_sign(static_cast<Mask>(i), c) * a(i) * b(static_cast<Index>(c));
  }
  return acc;
}

// Derivation extension of a linear map on covectors: e^b -> sum_a A(a, b) e^a.
template <class Scalar>
DenseForm<Scalar> apply_derivation(const Mat& a, const DenseForm<Scalar>& f) {
  const int m = static_cast<int>(a.rows());
  DenseForm<Scalar> out = DenseForm<Scalar>::Zero(f.size());
  for (Index idx = 0; idx < f.size(); ++idx) {
    if (f(idx) == Scalar(0)) continue;
    const Mask mm = static_cast<Mask>(idx);
    for (int b = 0; b < m; ++b) {
      if (!(mm & bit(b))) continue;
      const Mask rest = mm ^ bit(b);
      const double sb = sign_below(mm, b);
      for (int i = 0; i < m; ++i) {
        if (a(i, b) == 0.0 || (rest & bit(i))) continue;
        out(static_cast<Index>(rest | bit(i))) += a(i, b) * sb * sign_below(rest, i) * f(idx);
      }
    }
  }
  return out;
}

}  // namespace gengeom
