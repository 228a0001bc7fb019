#include "gengeom/sugra.hpp"

#include <cmath>

namespace gengeom {

namespace {

bool evaluate(const std::function<Vec(const Vec&)>& f, const Vec& x, Vec& r) {
  try {
    r = f(x);
  } catch (const Error&) {
    return false;
  }
  return r.allFinite();
}

double max_abs(const Vec& r) { return r.size() ? r.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

NewtonResult newton_solve(const std::function<Vec(const Vec&)>& f, const Vec& x0, const std::vector<bool>& pinned,
                          const NewtonOptions& opts) {
  const Index n = x0.size();
  if (!pinned.empty() && static_cast<Index>(pinned.size()) != n)
    throw Error(ErrorKind::invalid_dimension, "pin mask does not match the unknowns");
  std::vector<Index> free;
  for (Index i = 0; i < n; ++i)
    if (pinned.empty() || !pinned[static_cast<std::size_t>(i)]) free.push_back(i);

  NewtonResult out;
  out.x = x0;
  if (!evaluate(f, out.x, out.residual)) {
    out.diagnostic = "residual undefined at the seed";
    out.residual_norm = INFINITY;
    return out;
  }
  for (;;) {
    out.residual_norm = max_abs(out.residual);
    if (out.residual_norm < opts.tol) {
      out.converged = true;
      return out;
    }
    if (out.iterations >= opts.max_iter) {
      out.diagnostic = "no convergence after " + std::to_string(opts.max_iter) + " iterations";
      return out;
    }
    if (free.empty()) {
      out.diagnostic = "every unknown is pinned";
      return out;
    }
    ++out.iterations;
    Mat jac(out.residual.size(), static_cast<Index>(free.size()));
    for (std::size_t j = 0; j < free.size(); ++j) {
      const Index i = free[j];
      const double h = opts.fd_step * std::max(1.0, std::abs(out.x(i)));
      Vec xp = out.x, xm = out.x, rp, rm;
      xp(i) += h;
      xm(i) -= h;
      if (!evaluate(f, xp, rp) || !evaluate(f, xm, rm) || rp.size() != out.residual.size()) {
        out.diagnostic = "Jacobian undefined near the iterate";
        return out;
      }
      jac.col(static_cast<Index>(j)) = (rp - rm) / (2.0 * h);
    }
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(jac);
    if (cod.rank() == 0) {
      out.diagnostic = "singular Jacobian";
      return out;
    }
    Vec step = -cod.solve(out.residual);
    const double base = out.residual.norm();
    bool accepted = false;
    for (double t = 1.0; t > 1e-8; t *= 0.5) {
      Vec xt = out.x, rt;
      for (std::size_t j = 0; j < free.size(); ++j) xt(free[j]) += t * step(static_cast<Index>(j));
      if (evaluate(f, xt, rt) && rt.norm() < base) {
        out.x = xt;
        out.residual = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.diagnostic = "line search stalled";
      out.residual_norm = max_abs(out.residual);
      return out;
    }
  }
}

}  // namespace gengeom
