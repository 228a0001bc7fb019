#pragma once

#include "gengeom/core.hpp"
#include "gengeom/liealg.hpp"
#include "gengeom/report.hpp"

#include <optional>
#include <utility>

namespace gengeom {

// V+ inside an ambient quadratic space, stored by a spanning frame.
// V- = V+^perp; its basis is either supplied or taken as the Euclidean complement of G*V+.
class GeneralizedMetric {
 public:
  GeneralizedMetric(Mat ambient_metric, Mat span_plus, std::optional<Mat> span_minus = std::nullopt);

  Index dim() const { return ambient_.rows(); }
  Index rank() const { return span_plus_.cols(); }
  const Mat& ambient() const { return ambient_; }
  const Mat& span_plus() const { return span_plus_; }
  const Mat& span_minus() const { return span_minus_; }
  const Mat& gram_plus() const { return gram_plus_; }
  const Mat& gram_minus() const { return gram_minus_; }
  const Mat& gram_plus_inverse() const { return gram_plus_inv_; }
  const Mat& gram_minus_inverse() const { return gram_minus_inv_; }
  const Mat& projector_plus() const { return p_plus_; }
  Mat projector_minus() const { return Mat::Identity(dim(), dim()) - p_plus_; }
  Mat reflection() const { return 2.0 * p_plus_ - Mat::Identity(dim(), dim()); }
  // Coordinates of a vector of V+ (resp. V-) in the stored basis.
  Mat coords_plus() const { return gram_plus_inv_ * span_plus_.transpose() * ambient_; }
  Mat coords_minus() const { return gram_minus_inv_ * span_minus_.transpose() * ambient_; }

 private:
  Mat ambient_;
  Mat span_plus_;
  Mat span_minus_;
  Mat gram_plus_, gram_minus_, gram_plus_inv_, gram_minus_inv_;
  Mat p_plus_;
};

class IsotropicSubalgebra {
 public:
  IsotropicSubalgebra(const QuadraticLieAlgebra& g, Mat span);
  const Mat& span() const { return span_; }
  Index dim() const { return span_.cols(); }
  // isotropy, closure, unimodularity
  const ResidualReport& invariants() const { return invariants_; }

 private:
  Mat span_;
  ResidualReport invariants_;
};

// Smallest singular value of the Gram matrix of the unit-normalized span, over the largest |eigenvalue| of G.
double gram_margin(const Mat& ambient, const Mat& span);

std::pair<int, int> signature(const Mat& gram);
std::pair<int, int> signature(const GeneralizedMetric& v);

ResidualReport metric_check(const GeneralizedMetric& v);

GeneralizedMetric vplus_of_double(const DoubleAlgebra& d);
IsotropicSubalgebra s_of_double(const DoubleAlgebra& d);

ResidualReport admissible_check(const QuadraticLieAlgebra& g, const GeneralizedMetric& v, const IsotropicSubalgebra& s);

// span -> {e_a + eps * phi(a, abar) e_abar}
GeneralizedMetric deform(const GeneralizedMetric& v, const Mat& phi, double eps);

// G-orthonormal frame of span(columns), <f_a, f_b> = +-delta, same orientation as the input.
Mat orthonormal_frame(const Mat& ambient, const Mat& span);
GeneralizedMetric orthonormalized(const GeneralizedMetric& v);

}  // namespace gengeom
