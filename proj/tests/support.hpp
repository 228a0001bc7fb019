#pragma once

#include "gengeom/curvature.hpp"
#include "gengeom/exterior.hpp"
#include "gengeom/genmetric.hpp"
#include "gengeom/liealg.hpp"
#include "gengeom/spinor.hpp"

#include <cmath>
#include <random>
#include <string>

namespace support {

using namespace gengeom;

#ifndef GENGEOM_CONFIG_DIR
#define GENGEOM_CONFIG_DIR "configs"
#endif

inline std::string config_path(const std::string& name) { return std::string(GENGEOM_CONFIG_DIR) + "/" + name; }

// Hand-rolled generators over a seeded engine.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Vec vec(Index n) {
    Vec v(n);
    for (Index i = 0; i < n; ++i) v(i) = uniform();
    return v;
  }
  Mat mat(Index r, Index c) {
    Mat m(r, c);
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < c; ++j) m(i, j) = uniform();
    return m;
  }
  Spinor spinor(int rank) {
    Spinor f(Index(1) << rank);
    for (Index i = 0; i < f.size(); ++i) f(i) = cplx(uniform(), uniform());
    return f;
  }
  Spinor homogeneous(int rank, int degree) {
    Spinor f = Spinor::Zero(Index(1) << rank);
    for (Index i = 0; i < f.size(); ++i)
      if (gengeom::degree(static_cast<Mask>(i)) == degree) f(i) = cplx(uniform(), uniform());
    return f;
  }

 private:
  std::mt19937_64 rng_;
};

// Hyperbolic space R^{r,r} seen through a random frame T, with L1, L2 the images of the two standard halves.
inline LagrangianSplitting random_splitting(Gen& g, int r) {
  const Index n = 2 * r;
  Mat h = Mat::Zero(n, n);
  h.topRightCorner(r, r) = Mat::Identity(r, r);
  h.bottomLeftCorner(r, r) = Mat::Identity(r, r);
  Mat t = Mat::Identity(n, n) + 0.3 * g.mat(n, n);
  Mat ti = t.inverse();
  Mat ambient = t.transpose() * h * t;
  return LagrangianSplitting(0.5 * (ambient + ambient.transpose()), ti.leftCols(r), ti.rightCols(r));
}

// Killing form over the trace form tr(XY) of the defining representation.
inline double killing_over_trace_su(int n) { return 2.0 * n; }
inline double killing_over_trace_so(int p, int q) { return p + q - 2.0; }

// *e^I from xi ^ *eta = <xi, eta> omega, solved one basis covector at a time by brute force over all masks.
inline Spinor hodge_basis_oracle(Mask i, const Vec& eta, double volume) {
  const int m = static_cast<int>(eta.size());
  const Index dim = Index(1) << m;
  Spinor out = Spinor::Zero(dim);
  double inner = 1.0;
  for (int k = 0; k < m; ++k)
    if (i & bit(k)) inner /= eta(k);
  Spinor ei = Spinor::Zero(dim);
  ei(static_cast<Index>(i)) = 1.0;
  for (Index j = 0; j < dim; ++j) {
    Spinor ej = Spinor::Zero(dim);
    ej(j) = 1.0;
    // coefficient x on e^J satisfies top(e^I ^ x e^J) = inner * volume
    cplx top = top_of_wedge<cplx>(ei, ej, m);
    if (std::abs(top) > 0.5) out(j) = inner * volume / top;
  }
  return out;
}

// Random V+ of the same rank near a base metric: span(e_a + V- phi).
inline GeneralizedMetric random_vplus(Gen& g, const GeneralizedMetric& base, double scale) {
  Mat phi = scale * g.mat(base.rank(), base.dim() - base.rank());
  return deform(base, phi, 1.0);
}

}  // namespace support
