#pragma once

#include "gengeom/core.hpp"
#include "gengeom/exterior.hpp"

#include <utility>
#include <vector>

namespace gengeom {

using Spinor = CVec;

constexpr int kMaxSpinorRank = 16;

// V = L1 + L2 with both isotropic; spinors live on Lambda L1.
class LagrangianSplitting {
 public:
  // volume: coefficient on the full L1 monomial of the reference volume form used by top().
  LagrangianSplitting(Mat ambient, Mat l1, Mat l2, double volume = 1.0);

  Index dim() const { return ambient_.rows(); }
  int rank() const { return static_cast<int>(l1_.cols()); }
  Index spinor_dim() const { return Index(1) << rank(); }
  const Mat& ambient() const { return ambient_; }
  const Mat& l1() const { return l1_; }
  const Mat& l2() const { return l2_; }
  const Mat& pairing_block() const { return pairing_; }
  double volume() const { return volume_; }

  // u = L1 x + L2 y; returns x and the contraction weights z = pairing_block * y.
  std::pair<Vec, Vec> decompose(const Vec& u) const;

 private:
  Mat ambient_, l1_, l2_, pairing_, solve_;
  double volume_;
};

enum class Parity { zero, even, odd, mixed };

Parity parity(const Spinor& f, double tol = 1e-12);
// 1 for even, i for odd; throws on mixed parity.
cplx nu(const Spinor& f, double tol = 1e-12);

Spinor clifford_apply(const LagrangianSplitting& s, const Vec& u, const Spinor& f);
CMat clifford_matrix(const LagrangianSplitting& s, const Vec& u);

// i^|a| a
Spinor theta(const Spinor& f);
// ((theta a) ^ b)^top, measured against the reference volume form.
cplx mukai_pairing(const Spinor& a, const Spinor& b, double volume = 1.0);

// Volume form of the ordered frame: coefficient on e^1 ^ ... ^ e^m.
// diag_metric holds K(E_i, E_i) for the basis vectors dual to the covectors e^i.
double hodge_volume(const Vec& diag_metric, int orientation = 1);
// xi ^ *eta = <xi, eta> omega.
Spinor hodge(const Spinor& f, const Vec& diag_metric, int orientation = 1);

// R = 2^(n/2) e_1 ... e_n for a G-orthonormal oriented frame of V+.
Spinor r_vplus_apply(const LagrangianSplitting& s, const Mat& frame, const Spinor& f);
// Sign of R^2 computed from the Clifford relation: (-1)^(n(n-1)/2 + q).
int r_square_sign(const LagrangianSplitting& s, const Mat& frame);
Spinor self_dual_project(const LagrangianSplitting& s, const Mat& frame, const Spinor& fhat);

// Orthonormal basis (columns) of the common kernel of the given operators.
Mat invariant_forms(const std::vector<Mat>& ops, double tol = 1e-9);
CMat common_kernel(const std::vector<CMat>& ops, Index dim, double tol = 1e-9);
// { A : u A = 0 for all u in span(j) }
CMat annihilator_invariants(const LagrangianSplitting& s, const Mat& j, double tol = 1e-9);

// Dense matrix of the derivation extension of a map on covectors.
Mat lie_action_matrix(const Mat& a);

}  // namespace gengeom
