#include "gengeom/spinor.hpp"

#include <cmath>

namespace gengeom {

namespace {

int rank_of(const Spinor& f) {
  const Index n = f.size();
  if (n < 1 || (n & (n - 1))) throw Error(ErrorKind::invalid_dimension, "spinor length must be a power of two");
  return std::countr_zero(static_cast<Mask>(n));
}

cplx i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

Vec frame_norms(const LagrangianSplitting& s, const Mat& frame) {
  if (frame.rows() != s.dim()) throw Error(ErrorKind::invalid_dimension, "frame does not live in the split space");
  Mat gram = frame.transpose() * s.ambient() * frame;
  Vec d = gram.diagonal();
  Mat off = gram - Mat(d.asDiagonal());
  bool ok = off.size() == 0 || off.cwiseAbs().maxCoeff() < 1e-10;
  for (Index i = 0; i < d.size() && ok; ++i) ok = std::abs(std::abs(d(i)) - 1.0) < 1e-10;
  if (!ok) throw Error(ErrorKind::degenerate, "frame is not orthonormal");
  return d;
}

template <class MatT>
MatT kernel_of(const MatT& stacked, Index dim, double tol) {
  Eigen::BDCSVD<MatT> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double scale = sv.size() ? std::max(1.0, sv(0)) : 1.0;
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol * scale) ++rank;
  return svd.matrixV().rightCols(dim - rank);
}

}  // namespace

LagrangianSplitting::LagrangianSplitting(Mat ambient, Mat l1, Mat l2, double volume)
    : ambient_(std::move(ambient)), l1_(std::move(l1)), l2_(std::move(l2)), volume_(volume) {
  const Index n = ambient_.rows();
  if (ambient_.cols() != n || n % 2) throw Error(ErrorKind::invalid_dimension, "ambient space must be even-dimensional");
  if (l1_.rows() != n || l2_.rows() != n || l1_.cols() != n / 2 || l2_.cols() != n / 2)
    throw Error(ErrorKind::invalid_dimension, "Lagrangian frames must be n x n/2");
  if (n / 2 > kMaxSpinorRank) throw Error(ErrorKind::invalid_dimension, "spinor space exceeds the dense storage cap");
  if (volume_ == 0.0 || !std::isfinite(volume_)) throw Error(ErrorKind::invalid_argument, "volume must be finite and nonzero");
  double scale = std::max(1.0, ambient_.cwiseAbs().maxCoeff());
  if (n > 0) {
    double iso = std::max((l1_.transpose() * ambient_ * l1_).cwiseAbs().maxCoeff(),
                          (l2_.transpose() * ambient_ * l2_).cwiseAbs().maxCoeff());
    if (iso > 1e-10 * scale) throw Error(ErrorKind::invalid_argument, "splitting subspaces are not isotropic");
  }
  pairing_ = l1_.transpose() * ambient_ * l2_;
  Mat both(n, n);
  both << l1_, l2_;
  Eigen::FullPivLU<Mat> lu(both);
  if (n > 0 && (!lu.isInvertible() || Eigen::FullPivLU<Mat>(pairing_).rank() < n / 2))
    throw Error(ErrorKind::degenerate, "pairing block is singular");
  solve_ = n > 0 ? Mat(lu.inverse()) : Mat(0, 0);
}

std::pair<Vec, Vec> LagrangianSplitting::decompose(const Vec& u) const {
  if (u.size() != dim()) throw Error(ErrorKind::invalid_dimension, "vector does not match the split space");
  Vec c = solve_ * u;
  const Index m = rank();
  return {c.head(m), pairing_ * c.tail(m)};
}

Parity parity(const Spinor& f, double tol) {
  bool even = false, odd = false;
  for (Index i = 0; i < f.size(); ++i) {
    if (std::abs(f(i)) <= tol) continue;
    (degree(static_cast<Mask>(i)) % 2 ? odd : even) = true;
  }
  if (even && odd) return Parity::mixed;
  if (even) return Parity::even;
  if (odd) return Parity::odd;
  return Parity::zero;
}

cplx nu(const Spinor& f, double tol) {
  switch (parity(f, tol)) {
    case Parity::mixed: throw Error(ErrorKind::parity, "spinor has mixed parity");
    case Parity::odd: return {0.0, 1.0};
    default: return {1.0, 0.0};
  }
}

Spinor clifford_apply(const LagrangianSplitting& s, const Vec& u, const Spinor& f) {
  if (f.size() != s.spinor_dim()) throw Error(ErrorKind::invalid_dimension, "spinor does not match the splitting");
  auto [x, z] = s.decompose(u);
  Spinor out = Spinor::Zero(f.size());
  for (int i = 0; i < s.rank(); ++i) {
    if (x(i) != 0.0) wedge_into<cplx>(i, f, x(i), out);
    if (z(i) != 0.0) iota_into<cplx>(i, f, z(i), out);
  }
  return out;
}

CMat clifford_matrix(const LagrangianSplitting& s, const Vec& u) {
  const Index n = s.spinor_dim();
  CMat out(n, n);
  for (Index j = 0; j < n; ++j) out.col(j) = clifford_apply(s, u, Spinor::Unit(n, j));
  return out;
}

Spinor theta(const Spinor& f) {
  Spinor out(f.size());
  for (Index i = 0; i < f.size(); ++i) out(i) = i_power(degree(static_cast<Mask>(i))) * f(i);
  return out;
}

cplx mukai_pairing(const Spinor& a, const Spinor& b, double volume) {
  if (a.size() != b.size()) throw Error(ErrorKind::invalid_dimension, "spinors differ in length");
  return top_of_wedge<cplx>(theta(a), b, rank_of(a)) / volume;
}

double hodge_volume(const Vec& diag_metric, int orientation) {
  double k = orientation < 0 ? -1.0 : 1.0;
  for (Index i = 0; i < diag_metric.size(); ++i) {
    double d = diag_metric(i);
    if (d == 0.0 || !std::isfinite(d)) throw Error(ErrorKind::degenerate, "metric is degenerate");
    k *= (d < 0 ? -1.0 : 1.0) * std::sqrt(std::abs(d));
  }
  return k;
}

Spinor hodge(const Spinor& f, const Vec& diag_metric, int orientation) {
  const int m = rank_of(f);
  if (diag_metric.size() != m) throw Error(ErrorKind::invalid_dimension, "metric does not match the form degree range");
  const double kappa = hodge_volume(diag_metric, orientation);
  const Mask full = full_mask(m);
  Spinor out = Spinor::Zero(f.size());
  for (Index i = 0; i < f.size(); ++i) {
    if (f(i) == cplx(0.0)) continue;
    const Mask mi = static_cast<Mask>(i);
    double w = kappa * wedge_sign(mi, full ^ mi);
    for (int b = 0; b < m; ++b)
      if (mi & bit(b)) w /= diag_metric(b);
    out(static_cast<Index>(full ^ mi)) += w * f(i);
  }
  return out;
}

Spinor r_vplus_apply(const LagrangianSplitting& s, const Mat& frame, const Spinor& f) {
  frame_norms(s, frame);
  Spinor out = f;
  for (Index a = frame.cols() - 1; a >= 0; --a) out = clifford_apply(s, frame.col(a), out);
  return std::pow(2.0, 0.5 * static_cast<double>(frame.cols())) * out;
}

int r_square_sign(const LagrangianSplitting& s, const Mat& frame) {
  Vec d = frame_norms(s, frame);
  const Index n = frame.cols();
  long flips = n * (n - 1) / 2;
  for (Index i = 0; i < n; ++i)
    if (d(i) < 0) ++flips;
  return flips % 2 ? -1 : 1;
}

Spinor self_dual_project(const LagrangianSplitting& s, const Mat& frame, const Spinor& fhat) {
  if (r_square_sign(s, frame) < 0) throw Error(ErrorKind::signature, "R squares to -1; no self-dual spinors");
  return fhat + r_vplus_apply(s, frame, fhat);
}

Mat invariant_forms(const std::vector<Mat>& ops, double tol) {
  if (ops.empty()) throw Error(ErrorKind::invalid_argument, "no operators given; dimension unknown");
  const Index n = ops.front().cols();
  Mat stacked(n * static_cast<Index>(ops.size()), n);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    if (ops[k].rows() != n || ops[k].cols() != n) throw Error(ErrorKind::invalid_dimension, "operators must be square and equal-sized");
    stacked.middleRows(static_cast<Index>(k) * n, n) = ops[k];
  }
  return kernel_of(stacked, n, tol);
}

CMat common_kernel(const std::vector<CMat>& ops, Index dim, double tol) {
  if (ops.empty()) return CMat::Identity(dim, dim);
  Index rows = 0;
  for (const auto& op : ops) {
    if (op.cols() != dim) throw Error(ErrorKind::invalid_dimension, "operator width mismatch");
    rows += op.rows();
  }
  CMat stacked(rows, dim);
  Index at = 0;
  for (const auto& op : ops) {
    stacked.middleRows(at, op.rows()) = op;
    at += op.rows();
  }
  return kernel_of(stacked, dim, tol);
}

CMat annihilator_invariants(const LagrangianSplitting& s, const Mat& j, double tol) {
  if (j.rows() != s.dim()) throw Error(ErrorKind::invalid_dimension, "J does not live in the split space");
  double iso = j.cols() ? (j.transpose() * s.ambient() * j).cwiseAbs().maxCoeff() : 0.0;
  if (iso > 1e-10 * std::max(1.0, s.ambient().cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::invalid_argument, "J is not isotropic");
  std::vector<CMat> ops;
  for (Index k = 0; k < j.cols(); ++k) ops.push_back(clifford_matrix(s, j.col(k)));
  return common_kernel(ops, s.spinor_dim(), tol);
}

Mat lie_action_matrix(const Mat& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::invalid_dimension, "action must be square");
  if (a.rows() > kMaxSpinorRank) throw Error(ErrorKind::invalid_dimension, "form space exceeds the dense storage cap");
  const Index n = Index(1) << a.rows();
  Mat out(n, n);
  for (Index j = 0; j < n; ++j) out.col(j) = apply_derivation<double>(a, DenseForm<double>::Unit(n, j));
  return out;
}

}  // namespace gengeom
