#pragma once

#include "gengeom/core.hpp"
#include "gengeom/report.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gengeom {

// Quadratic Lie algebra: the Courant algebroid over a point.
// structure(a, b, c) = <e_a, [e_b, e_c]>, bracket constants [e_b, e_c] = Gamma^d_{bc} e_d.
class QuadraticLieAlgebra {
 public:
  QuadraticLieAlgebra() = default;
  QuadraticLieAlgebra(Mat metric, Tensor3 structure, std::vector<std::string> labels = {});

  // From bracket constants Gamma(d, b, c) = coefficient of e_d in [e_b, e_c].
  static QuadraticLieAlgebra from_bracket(Mat metric, const Tensor3& gamma, std::vector<std::string> labels = {});

  Index dim() const { return metric_.rows(); }
  const Mat& metric() const { return metric_; }
  const Mat& metric_inverse() const { return metric_inv_; }
  double condition_number() const { return cond_; }
  const Tensor3& structure() const { return structure_; }
  const std::vector<std::string>& labels() const { return labels_; }

  // ad(b)(d, c) = Gamma^d_{bc}.
  const Mat& ad(Index b) const { return ad_[static_cast<std::size_t>(b)]; }
  Mat ad(const Vec& u) const;
  Vec bracket(const Vec& u, const Vec& v) const;
  double pairing(const Vec& u, const Vec& v) const { return u.dot(metric_ * v); }
  double gamma(Index d, Index b, Index c) const { return ad_[static_cast<std::size_t>(b)](d, c); }

 private:
  void finish();

  Mat metric_;
  Mat metric_inv_;
  double cond_ = 0.0;
  Tensor3 structure_;
  std::vector<Mat> ad_;
  std::vector<std::string> labels_;
};

// a = a0 + a1 as a partition of basis indices.
struct InvolutiveSplitting {
  std::vector<Index> indices0;
  std::vector<Index> indices1;
};

struct DoubleAlgebra {
  QuadraticLieAlgebra base;
  double c = 0.0;
  QuadraticLieAlgebra algebra;  // basis (a-part, then t*a-part)
  std::optional<InvolutiveSplitting> grading;  // grading of base
};

struct DirectSum {
  QuadraticLieAlgebra algebra;
  std::vector<Index> offsets;
};

QuadraticLieAlgebra build_so(int p, int q);
QuadraticLieAlgebra build_su(int n);
QuadraticLieAlgebra build_abelian(int k, const Mat& metric);

// so(p,q) > so(p,q-1) (or so(p-1) when q = 0): a1 = generators touching the last index.
InvolutiveSplitting involution_so_last(int p, int q);
// su(n) > s(u(1)+u(n-1)): a1 = generators in the off-diagonal block of the first index.
InvolutiveSplitting involution_su_block(int n);
// su(n) > so(n): a0 = real antisymmetric generators.
InvolutiveSplitting involution_su_real(int n);

Mat killing_form(const QuadraticLieAlgebra& a);
QuadraticLieAlgebra rescale_metric(const QuadraticLieAlgebra& a, double lambda);
// New basis vectors are the columns of t, in old coordinates.
QuadraticLieAlgebra change_basis(const QuadraticLieAlgebra& a, const Mat& t);

DoubleAlgebra make_double(const QuadraticLieAlgebra& a, double c,
                          std::optional<InvolutiveSplitting> grading = std::nullopt);
DirectSum direct_sum(const std::vector<QuadraticLieAlgebra>& blocks);

ResidualReport check(const QuadraticLieAlgebra& a);
ResidualReport grading_check(const QuadraticLieAlgebra& a, const InvolutiveSplitting& split);
ResidualReport double_check(const DoubleAlgebra& d);

// Residual of [u, v] against span(basis columns) (least squares).
double span_residual(const Mat& basis, const Vec& v);

// Algebra description as read from a config block.
struct AlgebraSpec {
  std::string type;  // so | su | abelian | double | sum
  int p = 0;
  int q = 0;
  int n = 0;
  Mat metric;  // abelian
  std::string involution;  // last | block | real | trivial | none
  std::optional<double> lambda;
  double c = 0.0;  // double
  std::vector<AlgebraSpec> parts;  // sum
  std::shared_ptr<AlgebraSpec> base;  // double
};

struct BuiltAlgebra {
  QuadraticLieAlgebra algebra;
  std::optional<InvolutiveSplitting> splitting;
  std::optional<DoubleAlgebra> dbl;
};

BuiltAlgebra build(const AlgebraSpec& spec);

}  // namespace gengeom
