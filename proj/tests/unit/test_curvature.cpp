#include <doctest.h>

#include "../support.hpp"

using namespace gengeom;
using support::Gen;

namespace {

// V+ = span (1 + s t) a1 on a double: recover s from the first frame vector.
double slope(const DoubleAlgebra& d, const GeneralizedMetric& v) {
  const Index n = d.base.dim();
  double num = 0.0, den = 0.0;
  for (Index i : d.grading->indices1) {
    num += v.span_plus()(n + i, 0) * v.span_plus()(i, 0);
    den += v.span_plus()(i, 0) * v.span_plus()(i, 0);
  }
  return num / den;
}

}  // namespace

TEST_CASE("GRic of a graded double vanishes against a0 and matches (c-1)/2 Killing on a1") {
  for (double c : {-0.3, 0.0, 2.0}) {
    DoubleAlgebra d = make_double(build_su(3), c, involution_su_real(3));
    Mat ric = gric(d.algebra, vplus_of_double(d), Divergence::zero(d.algebra.dim()));
    const Index r = 5, r0 = 3;
    CHECK(ric.middleCols(r, r0).cwiseAbs().maxCoeff() < 1e-12);
    const Mat k = support::killing_over_trace_su(3) * d.base.metric();
    const auto& i1 = d.grading->indices1;
    for (Index a = 0; a < r; ++a)
      for (Index b = 0; b < r; ++b) CHECK(ric(a, b) == doctest::Approx(0.5 * (c - 1.0) * k(i1[a], i1[b])));
  }
}

TEST_CASE("gric_columns agrees with the full tensor") {
  Gen gen(301);
  DoubleAlgebra d = make_double(build_so(3, 2), 0.4, involution_so_last(3, 2));
  GeneralizedMetric v = support::random_vplus(gen, vplus_of_double(d), 0.2);
  Divergence div{gen.vec(d.algebra.dim())};
  Mat full = gric(d.algebra, v, div);
  CHECK((gric_columns(d.algebra, v, div, 3, 4) - full.middleCols(3, 4)).norm() < 1e-12);
  CHECK(std::abs(gric_bilinear(d.algebra, v, div, v.span_plus().col(1), v.span_minus().col(2)) - full(1, 2)) < 1e-12);
}

TEST_CASE("flip identity and divergence shift on random data") {
  Gen gen(302);
  DoubleAlgebra d = make_double(build_su(2), -0.6, involution_su_block(2));
  for (int k = 0; k < 10; ++k) {
    GeneralizedMetric v = support::random_vplus(gen, vplus_of_double(d), 0.4);
    Divergence a{gen.vec(6)}, b{gen.vec(6)};
    CHECK(gric_flip_check(d.algebra, v, a).pass());
    CHECK(gric_div_shift_check(d.algebra, v, a, b).pass());
  }
}

TEST_CASE("scalar curvature of a double equals (1+c)/4 lambda dim a1") {
  QuadraticLieAlgebra a = rescale_metric(build_so(3, 2), -1.5);
  for (double c : {-1.0, 0.25, 1.0}) {
    DoubleAlgebra d = make_double(a, c, involution_so_last(3, 2));
    double r = scalar_curvature(d.algebra, vplus_of_double(d), Divergence::zero(20));
    CHECK(r == doctest::Approx(0.25 * (1.0 + c) * -1.5 * 4.0).epsilon(1e-12));
    CHECK(action_value(d.algebra, vplus_of_double(d)) == doctest::Approx(-0.5 * r));
  }
}

TEST_CASE("central differences of the action match GRic contracted with phi") {
  Gen gen(303);
  DoubleAlgebra d = make_double(build_su(3), 0.1, involution_su_real(3));
  for (int k = 0; k < 5; ++k) {
    GeneralizedMetric v = support::random_vplus(gen, vplus_of_double(d), 0.3);
    Mat phi = gen.mat(v.rank(), v.dim() - v.rank());
    CHECK(gradient_check(d.algebra, v, phi, 1e-5).pass());
  }
}

TEST_CASE("flow on the su(2) double follows ds/dt = -2(1 - c s^2)") {
  const double c = 0.95;
  DoubleAlgebra d = make_double(build_su(2), c, involution_su_block(2));
  FlowResult flow = ricci_flow(d.algebra, vplus_of_double(d), Divergence::zero(6), 1.0, 1e-3);
  REQUIRE_FALSE(flow.halted);
  REQUIRE(flow.states.size() == 1001);
  const double rc = std::sqrt(c);
  for (std::size_t k : {std::size_t(0), std::size_t(250), std::size_t(1000)}) {
    const double t = flow.states[k].t;
    const double exact = std::tanh(std::atanh(rc) - 2.0 * rc * t) / rc;
    CHECK(slope(d, flow.states[k].metric) == doctest::Approx(exact).epsilon(1e-9));
  }
  IsotropicSubalgebra s = s_of_double(d);
  CHECK(tangency_check(d.algebra, flow.states.back().metric, s, Divergence::zero(6)).pass());
}

TEST_CASE("flow halts where V+ turns null") {
  DoubleAlgebra d = make_double(build_su(2), 0.5, involution_su_block(2));
  FlowResult flow = ricci_flow(d.algebra, vplus_of_double(d), Divergence::zero(6), 1.0, 1e-3);
  CHECK(flow.halted);
  CHECK_FALSE(flow.diagnostic.empty());
  // s reaches 0 at atanh(sqrt c) / (2 sqrt c)
  const double t_null = std::atanh(std::sqrt(0.5)) / (2.0 * std::sqrt(0.5));
  CHECK(flow.states.back().t < t_null);
  CHECK(t_null - flow.states.back().t < 5e-3);
}

TEST_CASE("flow argument errors") {
  DoubleAlgebra d = make_double(build_su(2), 0.5, involution_su_block(2));
  CHECK_THROWS_AS(ricci_flow(d.algebra, vplus_of_double(d), Divergence::zero(6), 1.0, 0.0), Error);
  CHECK_THROWS_AS(ricci_flow(d.algebra, vplus_of_double(d), Divergence::zero(6), -1.0, 0.1), Error);
  FlowResult none = ricci_flow(d.algebra, vplus_of_double(d), Divergence::zero(6), 0.0, 0.1);
  CHECK(none.states.size() == 1);
}

TEST_CASE("Ricci-flat double at c = 1 solves the background equations on a1") {
  DoubleAlgebra d = make_double(build_su(2), 1.0, involution_su_block(2));
  Mat ric = gric(d.algebra, vplus_of_double(d), Divergence::zero(6));
  CHECK(ric.cwiseAbs().maxCoeff() < 1e-12);
}
