#pragma once

#include "gengeom/exterior.hpp"
#include "gengeom/liealg.hpp"
#include "gengeom/report.hpp"
#include "gengeom/spinor.hpp"

#include <functional>
#include <vector>

namespace gengeom {

// Forms on a*, bit alpha <=> e^alpha dual to the algebra basis.
using Form = SparseForm<double>;
using FormOperator = std::function<Form(const Form&)>;

constexpr int kMaxDenseGenerators = 12;

// -(1/2) Gamma^g_ab e^a ^ e^b ^ iota_g
Form d_ce(const QuadraticLieAlgebra& a, const Form& f);
// sum_{a<b<c} f^abc iota_a iota_b iota_c, indices raised with the metric
Form iota_f(const QuadraticLieAlgebra& a, const Form& f);
Form d0(const DoubleAlgebra& d, const Form& f);

FormOperator d_ce_operator(const QuadraticLieAlgebra& a);
FormOperator iota_f_operator(const QuadraticLieAlgebra& a);
FormOperator d0_operator(const DoubleAlgebra& d);

double norm(const Form& f);
Form prune(Form f, double tol = 0.0);

// Dense matrix on Lambda of n generators; n <= kMaxDenseGenerators.
Mat materialize(int generators, const FormOperator& op);

// a0-invariant forms on a1*, embedded into Lambda a*; orthonormal in coefficient space.
std::vector<Form> invariant_a1_forms(const QuadraticLieAlgebra& a, const InvolutiveSplitting& split, double tol = 1e-9);

// Max norms of d_CE F, iota_f F and D0 F over the invariant a1-forms.
ResidualReport d0_on_invariants_check(const DoubleAlgebra& d, double tol = 1e-9);

// Generating Dirac operator over a point: -(1/6) c^abc e_a e_b e_c + eps/2.
CMat generating_dirac(const QuadraticLieAlgebra& g, const LagrangianSplitting& s, const Vec& eps);

}  // namespace gengeom
