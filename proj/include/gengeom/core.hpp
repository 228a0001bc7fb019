#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gengeom {

using Index = Eigen::Index;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

enum class ErrorKind {
  invalid_dimension,
  invalid_argument,
  signature,
  degenerate,
  parity,
  grading,
  budget,
  config,
  convergence,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Dense rank-3 array, row-major in (i, j, k).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(Index n) : n_(n), data_(static_cast<std::size_t>(n * n * n), 0.0) {}

  Index dim() const { return n_; }
  double& operator()(Index i, Index j, Index k) { return data_[static_cast<std::size_t>((i * n_ + j) * n_ + k)]; }
  double operator()(Index i, Index j, Index k) const { return data_[static_cast<std::size_t>((i * n_ + j) * n_ + k)]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  Index n_ = 0;
  std::vector<double> data_;
};

// Snaps entries within tol of a multiple of 1/2 onto it.
double snap_half(double x, double tol = 1e-13);

}  // namespace gengeom
