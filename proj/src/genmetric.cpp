#include "gengeom/genmetric.hpp"

#include <algorithm>
#include <cmath>

namespace gengeom {

namespace {

constexpr double kDegenerateTol = 1e-12;
constexpr double kEigenTol = 1e-10;

void require_nondegenerate(const Mat& ambient, const Mat& span, const char* what) {
  if (gram_margin(ambient, span) < kDegenerateTol)
    throw Error(ErrorKind::degenerate, std::string(what) + ": pairing restricted to the subspace is degenerate");
}

}  // namespace

double gram_margin(const Mat& ambient, const Mat& span) {
  if (span.cols() == 0) return 1.0;
  Mat s = span;
  for (Index j = 0; j < s.cols(); ++j) {
    double nrm = s.col(j).norm();
    if (nrm == 0.0) return 0.0;
    s.col(j) /= nrm;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(ambient);
  double scale = es.eigenvalues().cwiseAbs().maxCoeff();
  Mat gram = s.transpose() * ambient * s;
  Eigen::JacobiSVD<Mat> svd(gram);
  return svd.singularValues().minCoeff() / scale;
}

GeneralizedMetric::GeneralizedMetric(Mat ambient_metric, Mat span_plus, std::optional<Mat> span_minus)
    : ambient_(std::move(ambient_metric)), span_plus_(std::move(span_plus)) {
  const Index n = ambient_.rows();
  const Index r = span_plus_.cols();
  if (span_plus_.rows() != n || r < 1 || r >= n)
    throw Error(ErrorKind::invalid_dimension, "V+ frame must have n rows and 1 <= r < n columns");
  require_nondegenerate(ambient_, span_plus_, "V+");
  if (span_minus) {
    span_minus_ = std::move(*span_minus);
    if (span_minus_.rows() != n || span_minus_.cols() != n - r)
      throw Error(ErrorKind::invalid_dimension, "V- frame must be n x (n - r)");
    double cross = (span_plus_.transpose() * ambient_ * span_minus_).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, span_plus_.norm() * span_minus_.norm() * ambient_.norm());
    if (cross > 1e-10 * scale) throw Error(ErrorKind::invalid_argument, "V- frame is not orthogonal to V+");
  } else {
    Eigen::HouseholderQR<Mat> qr(ambient_ * span_plus_);
    Mat q = qr.householderQ();
    span_minus_ = q.rightCols(n - r);
  }
  require_nondegenerate(ambient_, span_minus_, "V-");
  gram_plus_ = span_plus_.transpose() * ambient_ * span_plus_;
  gram_minus_ = span_minus_.transpose() * ambient_ * span_minus_;
  gram_plus_ = 0.5 * (gram_plus_ + gram_plus_.transpose());
  gram_minus_ = 0.5 * (gram_minus_ + gram_minus_.transpose());
  gram_plus_inv_ = gram_plus_.inverse();
  gram_minus_inv_ = gram_minus_.inverse();
  p_plus_ = span_plus_ * gram_plus_inv_ * span_plus_.transpose() * ambient_;
}

std::pair<int, int> signature(const Mat& gram) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (gram + gram.transpose()));
  const Vec& ev = es.eigenvalues();
  double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  int p = 0, q = 0;
  for (Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) < kEigenTol * scale) throw Error(ErrorKind::degenerate, "near-zero eigenvalue in Gram matrix");
    (ev(i) > 0 ? p : q)++;
  }
  return {p, q};
}

std::pair<int, int> signature(const GeneralizedMetric& v) { return signature(v.gram_plus()); }

ResidualReport metric_check(const GeneralizedMetric& v) {
  const Mat& p = v.projector_plus();
  const Mat& g = v.ambient();
  Mat m = v.projector_minus();
  Mat refl = v.reflection();
  const Index n = v.dim();
  ResidualReport r(1e-10);
  r.add("self_adjoint", (p.transpose() * g - g * p).cwiseAbs().maxCoeff());
  r.add("idempotent", (p * p - p).cwiseAbs().maxCoeff());
  r.add("minus_orthogonal", (v.span_plus().transpose() * g * m).cwiseAbs().maxCoeff());
  r.add("partition", (p + m - Mat::Identity(n, n)).cwiseAbs().maxCoeff());
  r.add("reflection_square", (refl * refl - Mat::Identity(n, n)).cwiseAbs().maxCoeff());
  return r;
}

GeneralizedMetric vplus_of_double(const DoubleAlgebra& d) {
  if (!d.grading) throw Error(ErrorKind::grading, "double carries no grading");
  const auto& gr = *d.grading;
  if (gr.indices1.empty()) throw Error(ErrorKind::degenerate, "a1 is zero; V+ would be empty");
  const Index n = d.base.dim();
  const Index r = static_cast<Index>(gr.indices1.size());
  const Index r0 = static_cast<Index>(gr.indices0.size());
  Mat vp = Mat::Zero(2 * n, r);
  Mat vm = Mat::Zero(2 * n, 2 * n - r);
  for (Index j = 0; j < r; ++j) {
    Index i = gr.indices1[static_cast<std::size_t>(j)];
    vp(i, j) = 1.0;
    vp(n + i, j) = 1.0;
    vm(i, j) = 1.0;
    vm(n + i, j) = -1.0;
  }
  for (Index j = 0; j < r0; ++j) {
    Index i = gr.indices0[static_cast<std::size_t>(j)];
    vm(i, r + j) = 1.0;
    vm(n + i, r + r0 + j) = 1.0;
  }
  return GeneralizedMetric(d.algebra.metric(), vp, vm);
}

IsotropicSubalgebra s_of_double(const DoubleAlgebra& d) {
  if (!d.grading) throw Error(ErrorKind::grading, "double carries no grading");
  const Index n = d.base.dim();
  const auto& idx = d.grading->indices0;
  Mat s = Mat::Zero(2 * n, static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) s(idx[j], static_cast<Index>(j)) = 1.0;
  return IsotropicSubalgebra(d.algebra, s);
}

IsotropicSubalgebra::IsotropicSubalgebra(const QuadraticLieAlgebra& g, Mat span)
    : span_(std::move(span)), invariants_(1e-9) {
  if (span_.rows() != g.dim()) throw Error(ErrorKind::invalid_dimension, "s frame does not match the algebra");
  const Index k = span_.cols();
  double iso = k ? (span_.transpose() * g.metric() * span_).cwiseAbs().maxCoeff() : 0.0;
  double closure = 0.0, unimod = 0.0;
  if (k) {
    auto qr = span_.colPivHouseholderQr();
    std::vector<Mat> coeff;
    for (Index i = 0; i < k; ++i) {
      Mat images(g.dim(), k);
      Mat adi = g.ad(Vec(span_.col(i)));
      for (Index j = 0; j < k; ++j) images.col(j) = adi * span_.col(j);
      Mat c = qr.solve(images);
      closure = std::max(closure, (span_ * c - images).cwiseAbs().maxCoeff());
      unimod = std::max(unimod, std::abs(c.trace()));
    }
  }
  invariants_.add("isotropy", iso, 1e-10);
  invariants_.add("closure", closure, 1e-9);
  invariants_.add("unimodular", unimod, 1e-9);
}

ResidualReport admissible_check(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const IsotropicSubalgebra& s) {
  double orth = 0.0, inv = 0.0;
  const Mat m = v.projector_minus();
  for (Index i = 0; i < s.dim(); ++i) {
    Vec si = s.span().col(i);
    Mat adi = g.ad(si);
    for (Index a = 0; a < v.rank(); ++a) {
      Vec va = v.span_plus().col(a);
      orth = std::max(orth, std::abs(g.pairing(si, va)));
      inv = std::max(inv, (m * (adi * va)).norm());
    }
  }
  ResidualReport r(1e-10);
  r.add("orthogonality", orth);
  r.add("invariance", inv);
  return r;
}

GeneralizedMetric deform(const GeneralizedMetric& v, const Mat& phi, double eps) {
  if (phi.rows() != v.rank() || phi.cols() != v.dim() - v.rank())
    throw Error(ErrorKind::invalid_dimension, "deformation must be r x (n - r)");
  Mat span = v.span_plus() + eps * v.span_minus() * phi.transpose();
  return GeneralizedMetric(v.ambient(), span);
}

Mat orthonormal_frame(const Mat& ambient, const Mat& span) {
  const Index r = span.cols();
  Mat f = span;
  bool ok = true;
  for (Index k = 0; k < r && ok; ++k) {
    for (Index j = 0; j < k; ++j) {
      double njj = f.col(j).dot(ambient * f.col(j));
      f.col(k) -= (f.col(j).dot(ambient * f.col(k)) / njj) * f.col(j);
    }
    double nkk = f.col(k).dot(ambient * f.col(k));
    double scale = f.col(k).squaredNorm() * std::max(1.0, ambient.cwiseAbs().maxCoeff());
    if (std::abs(nkk) < 1e-8 * scale) ok = false;
    else f.col(k) /= std::sqrt(std::abs(nkk));
  }
  if (ok) return f;
  // null leading minors: fall back to the eigenframe of the Gram matrix
  Mat gram = span.transpose() * ambient * span;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (gram + gram.transpose()));
  Vec ev = es.eigenvalues();
  for (Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) < kEigenTol * std::max(1.0, ev.cwiseAbs().maxCoeff()))
      throw Error(ErrorKind::degenerate, "frame cannot be orthonormalized");
  Mat t = es.eigenvectors() * ev.cwiseAbs().cwiseSqrt().cwiseInverse().asDiagonal();
  if (t.determinant() < 0) t.col(r - 1) *= -1.0;
  return span * t;
}

GeneralizedMetric orthonormalized(const GeneralizedMetric& v) {
  return GeneralizedMetric(v.ambient(), orthonormal_frame(v.ambient(), v.span_plus()),
                           orthonormal_frame(v.ambient(), v.span_minus()));
}

}  // namespace gengeom
