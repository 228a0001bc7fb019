#pragma once

#include "gengeom/core.hpp"
#include "gengeom/genmetric.hpp"
#include "gengeom/liealg.hpp"
#include "gengeom/report.hpp"

#include <string>
#include <vector>

namespace gengeom {

// div(a) = <eps, a>
struct Divergence {
  Vec eps;
  static Divergence zero(Index n) { return {Vec::Zero(n)}; }
};

// GRic(e_a, e_abar) in the stored V+ / V- frames, r x (n - r).
Mat gric(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div);
// Columns [first, first + count) of gric.
Mat gric_columns(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div, Index first,
                 Index count);
// GRic(a_plus, b_minus) for arbitrary vectors of V+ and V-.
double gric_bilinear(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div,
                     const Vec& a_plus, const Vec& b_minus);

ResidualReport gric_div_shift_check(const QuadraticLieAlgebra& g, const GeneralizedMetric& v,
                                    const Divergence& div, const Divergence& div2);
ResidualReport gric_flip_check(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div);

double scalar_curvature(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div);
double action_value(const QuadraticLieAlgebra& g, const GeneralizedMetric& v);

// GRic(phi) = sum g+^{ab} GRic_{b abar} phi(a, abar)
double gric_contract(const GeneralizedMetric& v, const Mat& ric, const Mat& phi);

struct GradientSample {
  double finite_difference = 0.0;
  double analytic = 0.0;
  double relative_error = 0.0;
};
GradientSample gradient_sample(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Mat& phi, double h);
ResidualReport gradient_check(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Mat& phi, double h);

// Deformation phi of V+ realizing the flow dV+/dt = GRic.
Mat flow_direction(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div);
// Sum of squares of GRic in G-orthonormal V+ / V- frames.
double gric_norm(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div);

struct FlowState {
  double t = 0.0;
  GeneralizedMetric metric;
  double action = 0.0;
  double norm_gric = 0.0;
};

struct FlowResult {
  std::vector<FlowState> states;
  bool halted = false;
  std::string diagnostic;
};

FlowResult ricci_flow(const QuadraticLieAlgebra& g, const GeneralizedMetric& v0, const Divergence& div,
                      double t_end, double dt);

ResidualReport background_equations(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const Divergence& div);
double dsquared(const QuadraticLieAlgebra& g);
ResidualReport tangency_check(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const IsotropicSubalgebra& s,
                              const Divergence& div);

}  // namespace gengeom
