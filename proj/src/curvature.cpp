#include "gengeom/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace gengeom {

namespace {

void require_same(const QuadraticLieAlgebra& g, const GeneralizedMetric& v) {
  if (g.dim() != v.dim()) throw Error(ErrorKind::invalid_dimension, "metric and algebra dimensions differ");
}

// Tr over V+ of x -> [[x, b]_-, a]_+, given ad(a) and ad(b).
double trace_term(const GeneralizedMetric& v, const Mat& coords_ad_a, const Mat& ad_b, const Mat& pm) {
  Mat bm = pm * (ad_b * v.span_plus());
  return coords_ad_a.cwiseProduct(bm.transpose()).sum();
}

}  // namespace

Mat gric(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div) {
  return gric_columns(g, v, div, 0, v.dim() - v.rank());
}

Mat gric_columns(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div, Index first,
                 Index count) {
  require_same(g, v);
  const Index r = v.rank();
  if (first < 0 || count < 0 || first + count > v.dim() - r)
    throw Error(ErrorKind::invalid_dimension, "V- column range out of bounds");
  const Mat pm = v.projector_minus();
  const Mat q = v.coords_plus();
  const Vec w = v.ambient() * (v.projector_plus() * div.eps);
  std::vector<Mat> qa(static_cast<std::size_t>(r));
  for (Index a = 0; a < r; ++a) qa[a] = q * g.ad(Vec(v.span_plus().col(a)));
  Mat out(r, count);
  for (Index b = 0; b < count; ++b) {
    Mat adb = g.ad(Vec(v.span_minus().col(first + b)));
    Mat bm = pm * (adb * v.span_plus());
    Vec divrow = (adb * v.span_plus()).transpose() * w;
    for (Index a = 0; a < r; ++a) out(a, b) = divrow(a) - qa[a].cwiseProduct(bm.transpose()).sum();
  }
  return out;
}

double gric_bilinear(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div,
                     const Vec& a_plus, const Vec& b_minus) {
  require_same(g, v);
  const Mat pm = v.projector_minus();
  Mat ada = g.ad(a_plus);
  Mat adb = g.ad(b_minus);
  double d = div.eps.dot(v.ambient() * (v.projector_plus() * (adb * a_plus)));
  return d - trace_term(v, v.coords_plus() * ada, adb, pm);
}

ResidualReport gric_div_shift_check(const QuadraticLieAlgebra& g, const GeneralizedMetric& v,
                                    const Divergence& div, const Divergence& div2) {
  Mat r1 = gric(g, v, div);
  Mat r2 = gric(g, v, div2);
  Vec ep = v.projector_plus() * (div2.eps - div.eps);
  Mat ade = g.ad(ep);
  Mat corr = (ade * v.span_plus()).transpose() * v.ambient() * v.span_minus();
  ResidualReport rep(1e-9);
  rep.add("div_shift", (r2 - r1 + corr).cwiseAbs().maxCoeff());
  return rep;
}

ResidualReport gric_flip_check(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div) {
  Mat r = gric(g, v, div);
  GeneralizedMetric flipped(v.ambient(), v.span_minus(), v.span_plus());
  Mat rf = gric(g, flipped, div);
  Mat ade = g.ad(div.eps);
  Mat corr = (ade * v.span_plus()).transpose() * v.ambient() * v.span_minus();
  ResidualReport rep(1e-9);
  rep.add("flip_identity", (rf.transpose() - r - corr).cwiseAbs().maxCoeff());
  return rep;
}

double scalar_curvature(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div) {
  require_same(g, v);
  const Index r = v.rank();
  const Mat& gm = v.ambient();
  const Mat& pp = v.projector_plus();
  const Mat pm = v.projector_minus();
  const Mat dual = v.span_plus() * v.gram_plus_inverse();
  std::vector<Mat> ad_e(static_cast<std::size_t>(r)), ad_d(static_cast<std::size_t>(r));
  for (Index a = 0; a < r; ++a) {
    ad_e[a] = g.ad(Vec(v.span_plus().col(a)));
    ad_d[a] = g.ad(Vec(dual.col(a)));
  }
  double plus = 0.0, minus = 0.0;
  for (Index a = 0; a < r; ++a) {
    Mat x = ad_e[a] * v.span_plus();
    Mat y = ad_d[a] * dual;
    plus += ((pp * x).transpose() * gm * (pp * y)).trace();
    minus += ((pm * x).transpose() * gm * (pm * y)).trace();
  }
  Vec ep = pp * div.eps;
  return ep.dot(gm * ep) - plus / 6.0 - minus / 2.0;
}

double action_value(const QuadraticLieAlgebra& g, const GeneralizedMetric& v) {
  return -0.5 * scalar_curvature(g, v, Divergence::zero(g.dim()));
}

double gric_contract(const GeneralizedMetric& v, const Mat& ric, const Mat& phi) {
  return (v.gram_plus_inverse() * ric).cwiseProduct(phi).sum();
}

GradientSample gradient_sample(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Mat& phi, double h) {
  if (h <= 0) throw Error(ErrorKind::invalid_argument, "step must be positive");
  GradientSample s;
  double sp = action_value(g, deform(v, phi, h));
  double sm = action_value(g, deform(v, phi, -h));
  s.finite_difference = (sp - sm) / (2.0 * h);
  s.analytic = gric_contract(v, gric(g, v, Divergence::zero(g.dim())), phi);
  double denom = std::max({std::abs(s.analytic), std::abs(s.finite_difference), 1e-14});
  s.relative_error = std::abs(s.finite_difference - s.analytic) / denom;
  if (s.finite_difference == s.analytic) s.relative_error = 0.0;
  return s;
}

ResidualReport gradient_check(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Mat& phi, double h) {
  GradientSample s = gradient_sample(g, v, phi, h);
  ResidualReport rep(1e-5);
  rep.add("relative_error", s.relative_error);
  return rep;
}

Mat flow_direction(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div) {
  return gric(g, v, div) * v.gram_minus_inverse();
}

double gric_norm(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div) {
  return gric(g, orthonormalized(v), div).norm();
}

// orthonormal frames blow up as V+ turns null, so RK4 stalls there instead of crossing
constexpr double kMaxFrameChange = 0.25;

FlowResult ricci_flow(const QuadraticLieAlgebra& g, const GeneralizedMetric& v0, const Divergence& div,
                      double t_end, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_argument, "flow step must be positive");
  if (t_end < 0.0) throw Error(ErrorKind::invalid_argument, "flow end time must be nonnegative");
  const Mat& gm = v0.ambient();
  auto velocity = [&](const Mat& frame) {
    GeneralizedMetric v(gm, frame);
    return Mat(v.span_minus() * flow_direction(g, v, div).transpose());
  };
  FlowResult out;
  // V- frames always come from the complement so the reported norm is continuous in t
  GeneralizedMetric cur = orthonormalized(GeneralizedMetric(gm, v0.span_plus()));
  const auto sig = signature(cur);
  out.states.push_back({0.0, cur, action_value(g, cur), gric_norm(g, cur, div)});
  const long steps = std::lround(t_end / dt);
  for (long k = 1; k <= steps; ++k) {
    try {
      const Mat& x = cur.span_plus();
      Mat k1 = velocity(x);
      Mat k2 = velocity(x + 0.5 * dt * k1);
      Mat k3 = velocity(x + 0.5 * dt * k2);
      Mat k4 = velocity(x + dt * k3);
      Mat next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if ((next - x).norm() > kMaxFrameChange * x.norm())
        throw Error(ErrorKind::degenerate, "step no longer resolves the flow; V+ is close to a degenerate subspace");
      GeneralizedMetric v = orthonormalized(GeneralizedMetric(gm, next));
      if (signature(v) != sig)
        throw Error(ErrorKind::degenerate, "V+ changed signature, so it passed through a degenerate subspace");
      cur = std::move(v);
    } catch (const Error& e) {
      out.halted = true;
      out.diagnostic = "halted at step " + std::to_string(k) + ": " + e.what();
      break;
    }
    out.states.push_back({static_cast<double>(k) * dt, cur, action_value(g, cur), gric_norm(g, cur, div)});
  }
  return out;
}

ResidualReport background_equations(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div) {
  ResidualReport rep(1e-8);
  rep.add("gric", gric(g, v, div).cwiseAbs().maxCoeff());
  rep.add("scalar", std::abs(scalar_curvature(g, v, div)));
  return rep;
}

double dsquared(const QuadraticLieAlgebra& g) {
  const Index n = g.dim();
  const Mat& gi = g.metric_inverse();
  double total = 0.0;
  for (Index b = 0; b < n; ++b) {
    // sum_c <[e_b, e_c], [e^b, e^c]>
    Mat x = g.ad(b);
    Mat y = g.ad(Vec(gi.col(b))) * gi;
    total += (x.transpose() * g.metric() * y).trace();
  }
  return -total / 48.0;
}

ResidualReport tangency_check(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const IsotropicSubalgebra& s,
                              const Divergence& div) {
  const Mat pm = v.projector_minus();
  double worst = 0.0;
  for (Index i = 0; i < s.dim(); ++i) {
    Vec si = pm * s.span().col(i);
    for (Index a = 0; a < v.rank(); ++a)
      worst = std::max(worst, std::abs(gric_bilinear(g, v, div, v.span_plus().col(a), si)));
  }
  ResidualReport rep(1e-10);
  rep.add("gric_on_s", worst);
  return rep;
}

}  // namespace gengeom
