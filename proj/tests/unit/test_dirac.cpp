#include <doctest.h>

#include "../support.hpp"
#include "gengeom/curvature.hpp"
#include "gengeom/dirac.hpp"

using namespace gengeom;
using support::Gen;

namespace {

// c_abc c^abc with c_abc = <e_a, [e_b, e_c]>, straight from the bracket.
double c_squared(const QuadraticLieAlgebra& g) {
  const Index n = g.dim();
  const Mat& G = g.metric();
  const Mat gi = G.inverse();
  std::vector<double> lo(static_cast<std::size_t>(n * n * n), 0.0);
  auto at = [n](Index a, Index b, Index c) { return static_cast<std::size_t>((a * n + b) * n + c); };
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        for (Index d = 0; d < n; ++d) lo[at(a, b, c)] += G(a, d) * g.gamma(d, b, c);
  double total = 0.0;
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c) {
        double up = 0.0;
        for (Index x = 0; x < n; ++x)
          for (Index y = 0; y < n; ++y)
            for (Index z = 0; z < n; ++z) up += gi(a, x) * gi(b, y) * gi(c, z) * lo[at(x, y, z)];
        total += lo[at(a, b, c)] * up;
      }
  return total;
}

Form random_form(Gen& gen, int generators) {
  Form f;
  for (Index m = 0; m < (Index(1) << generators); ++m)
    if (gen.uniform() > 0.3) f[static_cast<Mask>(m)] = gen.uniform();
  return f;
}

Form sum(Form a, const Form& b, double s = 1.0) {
  for (const auto& [m, v] : b) a[m] += s * v;
  return a;
}

}  // namespace

TEST_CASE("d_CE on one-forms is minus the bracket coefficients") {
  QuadraticLieAlgebra a = build_su(2);
  for (Index k = 0; k < 3; ++k) {
    Form dk = d_ce(a, Form{{bit(int(k)), 1.0}});
    for (int b = 0; b < 3; ++b)
      for (int c = b + 1; c < 3; ++c) {
        auto it = dk.find(bit(b) | bit(c));
        double got = it == dk.end() ? 0.0 : it->second;
        CHECK(got == doctest::Approx(-a.gamma(k, b, c)).epsilon(1e-13));
      }
    for (const auto& [m, v] : dk)
      if (degree(m) != 2) CHECK(std::abs(v) < 1e-14);
  }
}

TEST_CASE("d_CE squares to zero") {
  for (const QuadraticLieAlgebra& a : {build_su(2), build_su(3), build_so(3, 2)}) {
    Mat d = materialize(int(a.dim()), d_ce_operator(a));
    CHECK((d * d).cwiseAbs().maxCoeff() < 1e-11);
  }
  Gen gen(501);
  QuadraticLieAlgebra big = build_so(4, 1);
  for (int k = 0; k < 3; ++k) CHECK(norm(d_ce(big, d_ce(big, random_form(gen, 10)))) < 1e-11);
}

TEST_CASE("form operators are linear") {
  Gen gen(502);
  DoubleAlgebra d = make_double(build_su(2), 0.4, involution_su_block(2));
  const double s = gen.uniform();
  auto check_linear = [&](const FormOperator& op, int generators) {
    Form x = random_form(gen, generators), y = random_form(gen, generators);
    CHECK(norm(sum(op(sum(x, y, s)), sum(op(x), op(y), s), -1.0)) < 1e-12);
  };
  check_linear(d_ce_operator(d.algebra), 6);
  check_linear(iota_f_operator(d.algebra), 6);
  // D0 lives on forms over the base
  check_linear(d0_operator(d), 3);
}

TEST_CASE("iota_f lowers degree by three") {
  Gen gen(503);
  QuadraticLieAlgebra a = build_su(3);
  for (int k = 0; k < 3; ++k) {
    Form f;
    for (Index m = 0; m < 256; ++m)
      if (degree(Mask(m)) == k) f[Mask(m)] = gen.uniform();
    CHECK(norm(iota_f(a, f)) == 0.0);
  }
  Form top{{full_mask(3), 1.0}};
  QuadraticLieAlgebra s = build_su(2);
  Form out = prune(iota_f(s, top), 1e-14);
  REQUIRE(out.size() == 1);
  CHECK(out.begin()->first == Mask(0));
  // the only coefficient is c^{012}
  Mat gi = s.metric().inverse();
  double c012 = 0.0;
  for (Index x = 0; x < 3; ++x)
    for (Index y = 0; y < 3; ++y)
      for (Index z = 0; z < 3; ++z)
        for (Index w = 0; w < 3; ++w)
          c012 += gi(0, x) * gi(1, y) * gi(2, z) * s.metric()(x, w) * s.gamma(w, y, z);
  CHECK(std::abs(out.begin()->second) == doctest::Approx(std::abs(c012)).epsilon(1e-12));
}

TEST_CASE("D0 kills the invariant a1 forms") {
  for (double c : {-1.0, 0.0, 0.7}) {
    CHECK(d0_on_invariants_check(make_double(build_su(3), c, involution_su_real(3))).pass());
    CHECK(d0_on_invariants_check(make_double(build_so(3, 1), c, involution_so_last(3, 1))).pass());
  }
  CHECK(invariant_a1_forms(build_su(2), involution_su_block(2)).size() == 2);
}

TEST_CASE("dsquared matches the cubic contraction") {
  for (const QuadraticLieAlgebra& a :
       {build_su(2), build_su(3), build_so(3, 2), rescale_metric(build_so(4, 0), -2.0)})
    CHECK(dsquared(a) == doctest::Approx(-c_squared(a) / 48.0).epsilon(1e-12));
  CHECK(dsquared(make_double(build_su(2), 1.0, involution_su_block(2)).algebra) ==
        doctest::Approx(-c_squared(make_double(build_su(2), 1.0, involution_su_block(2)).algebra) / 48.0));
}

TEST_CASE("generating Dirac operator squares to a scalar on su(2) + su(2)") {
  QuadraticLieAlgebra a = rescale_metric(build_su(2), 1.0);
  for (double mu : {1.0, 0.5, 3.0}) {
    DirectSum ds = direct_sum({a, rescale_metric(a, -1.0 / mu)});
    const QuadraticLieAlgebra& g = ds.algebra;
    REQUIRE((g.metric().bottomRightCorner(3, 3) + mu * a.metric()).cwiseAbs().maxCoeff() < 1e-12);
    Mat l1(6, 3), l2(6, 3);
    l1 << Mat::Identity(3, 3), Mat::Identity(3, 3) / std::sqrt(mu);
    l2 << Mat::Identity(3, 3), -Mat::Identity(3, 3) / std::sqrt(mu);
    LagrangianSplitting s(g.metric(), l1, l2);
    CMat dirac = generating_dirac(g, s, Vec::Zero(6));
    const double expected = -c_squared(g) / 48.0;
    CHECK(dsquared(g) == doctest::Approx(expected).epsilon(1e-12));
    CHECK((dirac * dirac - expected * CMat::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("generating_dirac argument checks") {
  QuadraticLieAlgebra a = rescale_metric(build_su(2), 1.0);
  DirectSum ds = direct_sum({a, rescale_metric(a, -1.0)});
  Mat l1(6, 3), l2(6, 3);
  l1 << Mat::Identity(3, 3), Mat::Identity(3, 3);
  l2 << Mat::Identity(3, 3), -Mat::Identity(3, 3);
  LagrangianSplitting s(ds.algebra.metric(), l1, l2);
  CHECK_THROWS_AS(generating_dirac(ds.algebra, s, Vec::Zero(5)), Error);
  CHECK_THROWS_AS(generating_dirac(a, s, Vec::Zero(3)), Error);
}

TEST_CASE("dense materialization is capped") {
  CHECK_THROWS_AS(materialize(kMaxDenseGenerators + 1, d_ce_operator(build_su(2))), Error);
  CHECK(materialize(0, [](const Form& f) { return f; }).rows() == 1);
}
