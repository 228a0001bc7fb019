#include "gengeom/dirac.hpp"

#include <cmath>

namespace gengeom {

namespace {

constexpr double kZero = 1e-15;

struct Term2 {
  int a, b;
  double w;
};

struct Term3 {
  int a, b, c;
  double w;
};

// For each gamma: entries (alpha < beta, Gamma^gamma_{alpha beta}).
std::vector<std::vector<Term2>> ce_terms(const QuadraticLieAlgebra& a) {
  const Index n = a.dim();
  std::vector<std::vector<Term2>> out(static_cast<std::size_t>(n));
  for (Index al = 0; al < n; ++al)
    for (Index be = al + 1; be < n; ++be)
      for (Index ga = 0; ga < n; ++ga) {
        double w = a.gamma(ga, al, be);
        if (std::abs(w) > kZero) out[ga].push_back({static_cast<int>(al), static_cast<int>(be), w});
      }
  return out;
}

std::vector<Term3> iota_terms(const QuadraticLieAlgebra& a) {
  const Index n = a.dim();
  const Mat& ki = a.metric_inverse();
  const Tensor3& c = a.structure();
  // raise one index at a time
  Tensor3 t1(n), t2(n), t3(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        double s = 0.0;
        for (Index l = 0; l < n; ++l) s += ki(i, l) * c(l, j, k);
        t1(i, j, k) = s;
      }
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        double s = 0.0;
        for (Index l = 0; l < n; ++l) s += ki(j, l) * t1(i, l, k);
        t2(i, j, k) = s;
      }
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        double s = 0.0;
        for (Index l = 0; l < n; ++l) s += ki(k, l) * t2(i, j, l);
        t3(i, j, k) = s;
      }
  std::vector<Term3> out;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      for (Index k = j + 1; k < n; ++k)
        if (std::abs(t3(i, j, k)) > kZero)
          out.push_back({static_cast<int>(i), static_cast<int>(j), static_cast<int>(k), t3(i, j, k)});
  return out;
}

void require_generators(const QuadraticLieAlgebra& a) {
  if (a.dim() > 63) throw Error(ErrorKind::invalid_dimension, "too many generators for mask-indexed forms");
}

Form apply_ce(const std::vector<std::vector<Term2>>& terms, const Form& f) {
  Form out;
  for (const auto& [mask, coef] : f) {
    if (coef == 0.0) continue;
    for (Mask rest = mask; rest; rest &= rest - 1) {
      const int g = std::countr_zero(rest);
      const Mask m1 = mask ^ bit(g);
      const double s1 = sign_below(mask, g);
      for (const auto& t : terms[static_cast<std::size_t>(g)]) {
        if (m1 & bit(t.b)) continue;
        const Mask m2 = m1 | bit(t.b);
        if (m2 & bit(t.a)) continue;
        out[m2 | bit(t.a)] -= t.w * s1 * sign_below(m1, t.b) * sign_below(m2, t.a) * coef;
      }
    }
  }
  return out;
}

Form apply_iota3(const std::vector<Term3>& terms, const Form& f) {
  Form out;
  for (const auto& [mask, coef] : f) {
    if (coef == 0.0 || degree(mask) < 3) continue;
    for (const auto& t : terms) {
      const Mask need = bit(t.a) | bit(t.b) | bit(t.c);
      if ((mask & need) != need) continue;
      const Mask m1 = mask ^ bit(t.c);
      const Mask m2 = m1 ^ bit(t.b);
      out[m2 ^ bit(t.a)] += t.w * sign_below(mask, t.c) * sign_below(m1, t.b) * sign_below(m2, t.a) * coef;
    }
  }
  return out;
}

void axpy(Form& y, double s, const Form& x) {
  for (const auto& [m, v] : x) y[m] += s * v;
}

}  // namespace

double norm(const Form& f) {
  double s = 0.0;
  for (const auto& kv : f) s += kv.second * kv.second;
  return std::sqrt(s);
}

Form prune(Form f, double tol) {
  std::erase_if(f, [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
  return f;
}

FormOperator d_ce_operator(const QuadraticLieAlgebra& a) {
  require_generators(a);
  return [terms = ce_terms(a)](const Form& f) { return apply_ce(terms, f); };
}

FormOperator iota_f_operator(const QuadraticLieAlgebra& a) {
  require_generators(a);
  return [terms = iota_terms(a)](const Form& f) { return apply_iota3(terms, f); };
}

FormOperator d0_operator(const DoubleAlgebra& d) {
  require_generators(d.base);
  return [ce = ce_terms(d.base), io = iota_terms(d.base), c = d.c](const Form& f) {
    Form out = apply_ce(ce, f);
    if (c != 0.0) axpy(out, -c, apply_iota3(io, f));
    return out;
  };
}

Form d_ce(const QuadraticLieAlgebra& a, const Form& f) { return d_ce_operator(a)(f); }
Form iota_f(const QuadraticLieAlgebra& a, const Form& f) { return iota_f_operator(a)(f); }
Form d0(const DoubleAlgebra& d, const Form& f) { return d0_operator(d)(f); }

Mat materialize(int generators, const FormOperator& op) {
  if (generators < 0 || generators > kMaxDenseGenerators)
    throw Error(ErrorKind::invalid_dimension, "dense materialization limited to 12 generators");
  const Index n = Index(1) << generators;
  Mat out = Mat::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (const auto& [m, v] : op(Form{{static_cast<Mask>(j), 1.0}})) out(static_cast<Index>(m), j) += v;
  return out;
}

std::vector<Form> invariant_a1_forms(const QuadraticLieAlgebra& a, const InvolutiveSplitting& split, double tol) {
  require_generators(a);
  const auto& i0 = split.indices0;
  const auto& i1 = split.indices1;
  const Index r = static_cast<Index>(i1.size());
  if (r > kMaxSpinorRank) throw Error(ErrorKind::invalid_dimension, "a1 too large for dense invariant search");
  Mat basis;
  if (i0.empty()) {
    basis = Mat::Identity(Index(1) << r, Index(1) << r);
  } else {
    std::vector<Mat> ops;
    for (Index x : i0) {
      const Mat& adx = a.ad(x);
      Mat act(r, r);
      for (Index p = 0; p < r; ++p)
        for (Index q = 0; q < r; ++q) act(p, q) = -adx(i1[static_cast<std::size_t>(q)], i1[static_cast<std::size_t>(p)]);
      ops.push_back(lie_action_matrix(act));
    }
    basis = invariant_forms(ops, tol);
  }
  std::vector<Form> out;
  for (Index k = 0; k < basis.cols(); ++k) {
    Form f;
    for (Index j = 0; j < basis.rows(); ++j) {
      if (std::abs(basis(j, k)) <= kZero) continue;
      Mask m = 0;
      for (Index b = 0; b < r; ++b)
        if (static_cast<Mask>(j) & bit(static_cast<int>(b))) m |= bit(static_cast<int>(i1[static_cast<std::size_t>(b)]));
      f[m] = basis(j, k);
    }
    out.push_back(std::move(f));
  }
  return out;
}

ResidualReport d0_on_invariants_check(const DoubleAlgebra& d, double tol) {
  if (!d.grading) throw Error(ErrorKind::grading, "double carries no grading");
  auto forms = invariant_a1_forms(d.base, *d.grading, tol);
  auto ce = d_ce_operator(d.base);
  auto io = iota_f_operator(d.base);
  double w_ce = 0.0, w_io = 0.0, w_d0 = 0.0;
  for (const auto& f : forms) {
    Form x = ce(f);
    Form y = io(f);
    w_ce = std::max(w_ce, norm(x));
    w_io = std::max(w_io, norm(y));
    axpy(x, -d.c, y);
    w_d0 = std::max(w_d0, norm(x));
  }
  ResidualReport rep(1e-9);
  rep.add("d_ce", w_ce);
  rep.add("iota_f", w_io);
  rep.add("d0", w_d0);
  return rep;
}

CMat generating_dirac(const QuadraticLieAlgebra& g, const LagrangianSplitting& s, const Vec& eps) {
  if (s.dim() != g.dim()) throw Error(ErrorKind::invalid_dimension, "splitting does not match the algebra");
  if ((s.ambient() - g.metric()).cwiseAbs().maxCoeff() > 1e-12)
    throw Error(ErrorKind::invalid_argument, "splitting must use the algebra pairing");
  if (eps.size() != g.dim()) throw Error(ErrorKind::invalid_dimension, "divergence does not match the algebra");
  const Index n = g.dim();
  std::vector<CMat> e(static_cast<std::size_t>(n));
  for (Index a = 0; a < n; ++a) e[a] = clifford_matrix(s, Vec::Unit(n, a));
  std::vector<Term3> terms = iota_terms(g);
  CMat out = 0.5 * clifford_matrix(s, eps);
  // fully antisymmetric: sum over all orderings = 6 * sum over a<b<c of the antisymmetrized product
  for (const auto& t : terms) {
    const CMat& x = e[t.a];
    const CMat& y = e[t.b];
    const CMat& z = e[t.c];
    CMat p = x * y * z - x * z * y - y * x * z + y * z * x + z * x * y - z * y * x;
    out -= (t.w / 6.0) * p;
  }
  return out;
}

}  // namespace gengeom
