#include "gengeom/liealg.hpp"

#include <algorithm>
#include <cmath>

namespace gengeom {

namespace {

constexpr double kSymTol = 1e-10;
constexpr double kSingularTol = 1e-10;

using CMatList = std::vector<CMat>;

QuadraticLieAlgebra from_matrices(const CMatList& x, std::vector<std::string> labels) {
  const Index n = static_cast<Index>(x.size());
  Mat g(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) g(a, b) = snap_half((x[a] * x[b]).trace().real());
  Tensor3 c(n);
  for (Index b = 0; b < n; ++b)
    for (Index d = b + 1; d < n; ++d) {
      CMat comm = x[b] * x[d] - x[d] * x[b];
      for (Index a = 0; a < n; ++a) {
        double v = snap_half((x[a] * comm).trace().real());
        c(a, b, d) = v;
        c(a, d, b) = -v;
      }
    }
  return QuadraticLieAlgebra(std::move(g), std::move(c), std::move(labels));
}

std::string two_index(const char* head, int i, int j) {
  return std::string(head) + std::to_string(i) + "_" + std::to_string(j);
}

}  // namespace

QuadraticLieAlgebra::QuadraticLieAlgebra(Mat metric, Tensor3 structure, std::vector<std::string> labels)
    : metric_(std::move(metric)), structure_(std::move(structure)), labels_(std::move(labels)) {
  finish();
}

QuadraticLieAlgebra QuadraticLieAlgebra::from_bracket(Mat metric, const Tensor3& gamma,
                                                      std::vector<std::string> labels) {
  const Index n = metric.rows();
  if (gamma.dim() != n) throw Error(ErrorKind::invalid_dimension, "bracket tensor does not match metric");
  Tensor3 c(n);
  for (Index a = 0; a < n; ++a)
    for (Index d = 0; d < n; ++d) {
      double gad = metric(a, d);
      if (gad == 0.0) continue;
      for (Index b = 0; b < n; ++b)
        for (Index e = 0; e < n; ++e) c(a, b, e) += gad * gamma(d, b, e);
    }
  return QuadraticLieAlgebra(std::move(metric), std::move(c), std::move(labels));
}

void QuadraticLieAlgebra::finish() {
  const Index n = metric_.rows();
  if (n < 1 || metric_.cols() != n) throw Error(ErrorKind::invalid_dimension, "metric must be square and nonempty");
  if (structure_.dim() != n) throw Error(ErrorKind::invalid_dimension, "structure tensor does not match metric");
  const double scale = std::max(1.0, metric_.cwiseAbs().maxCoeff());
  if ((metric_ - metric_.transpose()).cwiseAbs().maxCoeff() > kSymTol * scale)
    throw Error(ErrorKind::invalid_argument, "metric is not symmetric");
  Eigen::JacobiSVD<Mat> svd(metric_);
  const Vec& s = svd.singularValues();
  if (s(n - 1) <= kSingularTol * s(0)) throw Error(ErrorKind::degenerate, "metric is numerically singular");
  cond_ = s(0) / s(n - 1);
  metric_inv_ = metric_.inverse();
  if (labels_.size() != static_cast<std::size_t>(n)) {
    labels_.clear();
    for (Index i = 0; i < n; ++i) labels_.push_back("e" + std::to_string(i));
  }
  ad_.assign(static_cast<std::size_t>(n), Mat::Zero(n, n));
  for (Index d = 0; d < n; ++d)
    for (Index a = 0; a < n; ++a) {
      double gi = metric_inv_(d, a);
      if (gi == 0.0) continue;
      for (Index b = 0; b < n; ++b)
        for (Index c = 0; c < n; ++c) ad_[b](d, c) += gi * structure_(a, b, c);
    }
}

Mat QuadraticLieAlgebra::ad(const Vec& u) const {
  Mat m = Mat::Zero(dim(), dim());
  for (Index b = 0; b < dim(); ++b)
    if (u(b) != 0.0) m += u(b) * ad_[b];
  return m;
}

Vec QuadraticLieAlgebra::bracket(const Vec& u, const Vec& v) const {
  Vec out = Vec::Zero(dim());
  for (Index b = 0; b < dim(); ++b)
    if (u(b) != 0.0) out.noalias() += u(b) * (ad_[b] * v);
  return out;
}

QuadraticLieAlgebra build_so(int p, int q) {
  if (p < 0 || q < 0 || p + q < 2) throw Error(ErrorKind::invalid_dimension, "so(p,q) needs p+q >= 2");
  const int n = p + q;
  Mat eta = Mat::Identity(n, n);
  for (int i = p; i < n; ++i) eta(i, i) = -1.0;
  CMatList x;
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Mat a = Mat::Zero(n, n);
      a(i, j) = 1.0;
      a(j, i) = -1.0;
      x.push_back((a * eta).cast<cplx>());
      labels.push_back(two_index("E", i, j));
    }
  return from_matrices(x, std::move(labels));
}

QuadraticLieAlgebra build_su(int n) {
  if (n < 2) throw Error(ErrorKind::invalid_dimension, "su(n) needs n >= 2");
  const cplx i1(0.0, 1.0);
  const double r2 = std::sqrt(0.5);
  CMatList x;
  std::vector<std::string> labels;
  for (int d = 1; d < n; ++d) {
    CMat h = CMat::Zero(n, n);
    for (int k = 0; k < d; ++k) h(k, k) = 1.0;
    h(d, d) = -static_cast<double>(d);
    x.push_back(i1 * h / std::sqrt(static_cast<double>(d * (d + 1))));
    labels.push_back("H" + std::to_string(d));
  }
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      CMat a = CMat::Zero(n, n);
      a(j, k) = 1.0;
      a(k, j) = -1.0;
      x.push_back(r2 * a);
      labels.push_back(two_index("R", j, k));
      CMat s = CMat::Zero(n, n);
      s(j, k) = 1.0;
      s(k, j) = 1.0;
      x.push_back(i1 * r2 * s);
      labels.push_back(two_index("I", j, k));
    }
  return from_matrices(x, std::move(labels));
}

QuadraticLieAlgebra build_abelian(int k, const Mat& metric) {
  if (k < 1) throw Error(ErrorKind::invalid_dimension, "abelian algebra needs k >= 1");
  if (metric.rows() != k || metric.cols() != k) throw Error(ErrorKind::invalid_dimension, "abelian metric must be k x k");
  Eigen::LLT<Mat> llt(metric);
  if (llt.info() != Eigen::Success || (metric - metric.transpose()).cwiseAbs().maxCoeff() > kSymTol)
    throw Error(ErrorKind::signature, "abelian metric must be symmetric positive definite");
  std::vector<std::string> labels;
  for (int i = 0; i < k; ++i) labels.push_back("B" + std::to_string(i));
  return QuadraticLieAlgebra(metric, Tensor3(k), std::move(labels));
}

InvolutiveSplitting involution_so_last(int p, int q) {
  const int n = p + q;
  if (n < 2) throw Error(ErrorKind::invalid_dimension, "so(p,q) needs p+q >= 2");
  InvolutiveSplitting s;
  Index idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++idx) (j == n - 1 ? s.indices1 : s.indices0).push_back(idx);
  return s;
}

InvolutiveSplitting involution_su_block(int n) {
  if (n < 2) throw Error(ErrorKind::invalid_dimension, "su(n) needs n >= 2");
  InvolutiveSplitting s;
  Index idx = 0;
  for (int d = 1; d < n; ++d) s.indices0.push_back(idx++);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      for (int r = 0; r < 2; ++r, ++idx) (j == 0 ? s.indices1 : s.indices0).push_back(idx);
  return s;
}

InvolutiveSplitting involution_su_real(int n) {
  if (n < 2) throw Error(ErrorKind::invalid_dimension, "su(n) needs n >= 2");
  InvolutiveSplitting s;
  Index idx = 0;
  for (int d = 1; d < n; ++d) s.indices1.push_back(idx++);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      s.indices0.push_back(idx++);
      s.indices1.push_back(idx++);
    }
  return s;
}

Mat killing_form(const QuadraticLieAlgebra& a) {
  const Index n = a.dim();
  Mat k(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) {
      double v = a.ad(i).cwiseProduct(a.ad(j).transpose()).sum();
      k(i, j) = v;
      k(j, i) = v;
    }
  return k;
}

QuadraticLieAlgebra rescale_metric(const QuadraticLieAlgebra& a, double lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda)) throw Error(ErrorKind::invalid_argument, "lambda must be nonzero");
  Mat k = killing_form(a) / lambda;
  const Index n = a.dim();
  Tensor3 gamma(n);
  for (Index d = 0; d < n; ++d)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c) gamma(d, b, c) = a.gamma(d, b, c);
  Eigen::JacobiSVD<Mat> svd(k);
  if (svd.singularValues()(n - 1) <= kSingularTol * std::max(1.0, svd.singularValues()(0)))
    throw Error(ErrorKind::degenerate, "Killing form is degenerate; rescaling needs a semisimple algebra");
  return QuadraticLieAlgebra::from_bracket(std::move(k), gamma, a.labels());
}

QuadraticLieAlgebra change_basis(const QuadraticLieAlgebra& a, const Mat& t) {
  const Index n = a.dim();
  if (t.rows() != n || t.cols() != n) throw Error(ErrorKind::invalid_dimension, "basis change must be n x n");
  // contract one slot at a time
  Tensor3 s1(n), s2(n), s3(n);
  const Tensor3& c = a.structure();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        double v = 0.0;
        for (Index l = 0; l < n; ++l) v += c(i, j, l) * t(l, k);
        s1(i, j, k) = v;
      }
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        double v = 0.0;
        for (Index l = 0; l < n; ++l) v += s1(i, l, k) * t(l, j);
        s2(i, j, k) = v;
      }
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        double v = 0.0;
        for (Index l = 0; l < n; ++l) v += s2(l, j, k) * t(l, i);
        s3(i, j, k) = v;
      }
  Mat g = t.transpose() * a.metric() * t;
  g = 0.5 * (g + g.transpose());
  return QuadraticLieAlgebra(std::move(g), std::move(s3));
}

DoubleAlgebra make_double(const QuadraticLieAlgebra& a, double c, std::optional<InvolutiveSplitting> grading) {
  const Index n = a.dim();
  Mat g = Mat::Zero(2 * n, 2 * n);
  g.topRightCorner(n, n) = a.metric();
  g.bottomLeftCorner(n, n) = a.metric();
  Tensor3 gamma(2 * n);
  for (Index d = 0; d < n; ++d)
    for (Index b = 0; b < n; ++b)
      for (Index e = 0; e < n; ++e) {
        double v = a.gamma(d, b, e);
        if (v == 0.0) continue;
        gamma(d, b, e) = v;
        gamma(n + d, b, n + e) = v;
        gamma(n + d, n + b, e) = v;
        gamma(d, n + b, n + e) = c * v;
      }
  std::vector<std::string> labels;
  for (const auto& l : a.labels()) labels.push_back(l);
  for (const auto& l : a.labels()) labels.push_back("t" + l);
  DoubleAlgebra out;
  out.base = a;
  out.c = c;
  out.algebra = QuadraticLieAlgebra::from_bracket(std::move(g), gamma, std::move(labels));
  out.grading = std::move(grading);
  return out;
}

DirectSum direct_sum(const std::vector<QuadraticLieAlgebra>& blocks) {
  if (blocks.empty()) throw Error(ErrorKind::invalid_argument, "direct sum of an empty list");
  Index n = 0;
  DirectSum out;
  for (const auto& b : blocks) {
    out.offsets.push_back(n);
    n += b.dim();
  }
  Mat g = Mat::Zero(n, n);
  Tensor3 c(n);
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& b = blocks[k];
    const Index o = out.offsets[k];
    g.block(o, o, b.dim(), b.dim()) = b.metric();
    for (Index i = 0; i < b.dim(); ++i)
      for (Index j = 0; j < b.dim(); ++j)
        for (Index l = 0; l < b.dim(); ++l) c(o + i, o + j, o + l) = b.structure()(i, j, l);
    for (const auto& l : b.labels()) labels.push_back(std::to_string(k) + ":" + l);
  }
  out.algebra = QuadraticLieAlgebra(std::move(g), std::move(c), std::move(labels));
  return out;
}

ResidualReport check(const QuadraticLieAlgebra& a) {
  const Index n = a.dim();
  const Tensor3& c = a.structure();
  double anti = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        anti = std::max(anti, std::abs(c(i, j, k) + c(i, k, j)));
        anti = std::max(anti, std::abs(c(i, j, k) + c(j, i, k)));
      }
  // Jacobi as [ad_i, ad_j] = ad_{[e_i, e_j]}
  double jac = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      Mat lhs = a.ad(i) * a.ad(j) - a.ad(j) * a.ad(i);
      for (Index d = 0; d < n; ++d) {
        double gd = a.gamma(d, i, j);
        if (gd != 0.0) lhs -= gd * a.ad(d);
      }
      jac = std::max(jac, lhs.cwiseAbs().maxCoeff());
    }
  ResidualReport r(1e-9);
  r.add("antisymmetry", anti, 1e-10);
  r.add("jacobi", jac, 1e-9);
  r.add("metric_condition", a.condition_number(), 1e10);
  return r;
}

ResidualReport grading_check(const QuadraticLieAlgebra& a, const InvolutiveSplitting& split) {
  const Index n = a.dim();
  std::vector<int> part(static_cast<std::size_t>(n), -1);
  for (Index i : split.indices0) part.at(static_cast<std::size_t>(i)) = 0;
  for (Index i : split.indices1) {
    if (part.at(static_cast<std::size_t>(i)) != -1) throw Error(ErrorKind::grading, "index sets overlap");
    part[static_cast<std::size_t>(i)] = 1;
  }
  for (int p : part)
    if (p < 0) throw Error(ErrorKind::grading, "index sets do not cover the basis");
  double v00 = 0.0, v11 = 0.0, v01 = 0.0, orth = 0.0;
  for (Index b = 0; b < n; ++b)
    for (Index c = 0; c < n; ++c) {
      const int pb = part[static_cast<std::size_t>(b)], pc = part[static_cast<std::size_t>(c)];
      const int target = (pb + pc) % 2;
      for (Index d = 0; d < n; ++d) {
        if (part[static_cast<std::size_t>(d)] == target) continue;
        double v = std::abs(a.gamma(d, b, c));
        if (pb == 0 && pc == 0) v00 = std::max(v00, v);
        else if (pb == 1 && pc == 1) v11 = std::max(v11, v);
        else v01 = std::max(v01, v);
      }
      if (pb != pc) orth = std::max(orth, std::abs(a.metric()(b, c)));
    }
  ResidualReport r(1e-9);
  r.add("bracket_00", v00);
  r.add("bracket_11", v11);
  r.add("bracket_01", v01);
  r.add("metric_01", orth, 1e-10);
  return r;
}

ResidualReport double_check(const DoubleAlgebra& d) {
  const Index n = d.base.dim();
  const auto& g = d.algebra;
  double br = 0.0;
  for (Index x = 0; x < n; ++x)
    for (Index b = 0; b < n; ++b)
      for (Index e = 0; e < n; ++e) {
        double v = d.base.gamma(x, b, e);
        br = std::max(br, std::abs(g.gamma(x, b, e) - v));
        br = std::max(br, std::abs(g.gamma(n + x, b, n + e) - v));
        br = std::max(br, std::abs(g.gamma(n + x, n + b, e) - v));
        br = std::max(br, std::abs(g.gamma(x, n + b, n + e) - d.c * v));
        br = std::max(br, std::abs(g.gamma(n + x, b, e)));
        br = std::max(br, std::abs(g.gamma(x, b, n + e)));
        br = std::max(br, std::abs(g.gamma(n + x, n + b, n + e)));
      }
  double pair = 0.0;
  pair = std::max(pair, g.metric().topLeftCorner(n, n).cwiseAbs().maxCoeff());
  pair = std::max(pair, g.metric().bottomRightCorner(n, n).cwiseAbs().maxCoeff());
  pair = std::max(pair, (g.metric().topRightCorner(n, n) - d.base.metric()).cwiseAbs().maxCoeff());
  ResidualReport r(1e-10);
  r.add("bracket_blocks", br);
  r.add("pairing_blocks", pair);
  r.merge(check(g), "double_");
  if (d.grading) r.merge(grading_check(d.base, *d.grading), "grading_");
  return r;
}

double span_residual(const Mat& basis, const Vec& v) {
  if (basis.cols() == 0) return v.norm();
  Vec coef = basis.colPivHouseholderQr().solve(v);
  return (basis * coef - v).norm();
}

namespace {

std::optional<InvolutiveSplitting> named_involution(const AlgebraSpec& spec) {
  const std::string& inv = spec.involution;
  if (inv.empty() || inv == "none") return std::nullopt;
  if (spec.type == "so" && inv == "last") return involution_so_last(spec.p, spec.q);
  if (spec.type == "su" && inv == "block") return involution_su_block(spec.n);
  if (spec.type == "su" && inv == "real") return involution_su_real(spec.n);
  if (spec.type == "abelian" && inv == "trivial") {
    InvolutiveSplitting s;
    for (int i = 0; i < spec.n; ++i) s.indices1.push_back(i);
    return s;
  }
  throw Error(ErrorKind::config, "unknown involution '" + inv + "' for type '" + spec.type + "'");
}

}  // namespace

BuiltAlgebra build(const AlgebraSpec& spec) {
  BuiltAlgebra out;
  if (spec.type == "so") {
    out.algebra = build_so(spec.p, spec.q);
    out.splitting = named_involution(spec);
  } else if (spec.type == "su") {
    out.algebra = build_su(spec.n);
    out.splitting = named_involution(spec);
  } else if (spec.type == "abelian") {
    Mat m = spec.metric.size() ? spec.metric : Mat::Identity(spec.n, spec.n);
    out.algebra = build_abelian(spec.n, m);
    AlgebraSpec s = spec;
    if (s.involution.empty()) s.involution = "trivial";
    out.splitting = named_involution(s);
  } else if (spec.type == "sum") {
    if (spec.parts.empty()) throw Error(ErrorKind::config, "sum needs at least one part");
    std::vector<QuadraticLieAlgebra> parts;
    std::vector<std::optional<InvolutiveSplitting>> splits;
    for (const auto& p : spec.parts) {
      BuiltAlgebra b = build(p);
      if (b.dbl) throw Error(ErrorKind::config, "doubles cannot appear inside a sum");
      parts.push_back(b.algebra);
      splits.push_back(b.splitting);
    }
    DirectSum ds = direct_sum(parts);
    out.algebra = ds.algebra;
    bool all = std::all_of(splits.begin(), splits.end(), [](const auto& s) { return s.has_value(); });
    if (all) {
      InvolutiveSplitting s;
      for (std::size_t k = 0; k < splits.size(); ++k) {
        for (Index i : splits[k]->indices0) s.indices0.push_back(ds.offsets[k] + i);
        for (Index i : splits[k]->indices1) s.indices1.push_back(ds.offsets[k] + i);
      }
      out.splitting = s;
    }
  } else if (spec.type == "double") {
    if (!spec.base) throw Error(ErrorKind::config, "double needs a base algebra");
    BuiltAlgebra b = build(*spec.base);
    if (b.dbl) throw Error(ErrorKind::config, "nested doubles are not supported");
    out.dbl = make_double(b.algebra, spec.c, b.splitting);
    out.algebra = out.dbl->algebra;
    if (spec.lambda) throw Error(ErrorKind::config, "lambda belongs on the base of a double");
    return out;
  } else {
    throw Error(ErrorKind::config, "unknown algebra type '" + spec.type + "'");
  }
  if (spec.lambda) out.algebra = rescale_metric(out.algebra, *spec.lambda);
  return out;
}

}  // namespace gengeom
