#pragma once

#include "gengeom/core.hpp"
#include "gengeom/genmetric.hpp"
#include "gengeom/liealg.hpp"
#include "gengeom/report.hpp"
#include "gengeom/spinor.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gengeom {

constexpr int kSugraBudget = 10;

struct BlockSpec {
  AlgebraSpec algebra;  // must carry an involution; lambda lives here, not in the algebra spec
  double lambda = 1.0;
  double c = 0.0;
  std::string name;
};

struct AbelianSpec {
  Mat metric;  // positive definite, dim b = size
};

struct FluxAnsatz {
  enum class Kind { none, polynomial, volume_products, raw };
  Kind kind = Kind::none;
  // polynomial: p(Omega) = sum d_n / n! Omega^n on the a1 of `block`
  int block = 1;
  std::vector<double> coefficients;
  // volume_products: h -> f(h), one entry of h per block (and b last when present)
  std::map<std::vector<int>, double> products;
  Spinor raw;  // Fhat on Lambda a1^total*
};

const char* to_string(FluxAnsatz::Kind kind);

struct SugraConfig {
  std::vector<BlockSpec> blocks;
  std::optional<AbelianSpec> abelian;
  FluxAnsatz flux;
  double tolerance = 1e-8;
};

// One assembled block: its own algebra in an adapted basis (a0 first, then a K-orthonormal a1).
struct SugraBlock {
  std::string name;
  QuadraticLieAlgebra base;
  InvolutiveSplitting split;
  double lambda = 0.0;
  double c = 0.0;
  bool abelian = false;
  Index offset = 0;  // position of its a1 inside a1^total
  Index dim1 = 0;
  Index double_offset = 0;  // position of its double inside g
};

struct SugraContext {
  SugraConfig config;
  std::vector<SugraBlock> blocks;  // b last when present
  QuadraticLieAlgebra algebra;
  GeneralizedMetric vplus;  // V- columns start with (1 - t) a1^total in order
  IsotropicSubalgebra s;
  Vec eta;  // K(E_a, E_a) on a1^total
  LagrangianSplitting reduced;  // a1^total + t a1^total with L1 = t a1, L2 = a1
  Mat frame;  // (1 + t) E_a / sqrt 2 in the reduced space
  std::vector<Mat> s_action;  // s generators acting on a1^total* covector coordinates
  ResidualReport checks;

  Index dim1() const { return eta.size(); }
  double volume() const { return reduced.volume(); }
};

SugraContext assemble(const SugraConfig& cfg);

// Metric volume form of the a1 of one block on Lambda a1^total*.
Spinor block_volume_form(const SugraContext& ctx, std::size_t block);
// sum of e^(2k) ^ e^(2k+1) over the a1 of one block.
Spinor omega_form(const SugraContext& ctx, std::size_t block);

Spinor r_vplus(const SugraContext& ctx, const Spinor& f);
// R = * nu theta
Spinor r_vplus_hodge(const SugraContext& ctx, const Spinor& f);
Spinor flux_hat(const SugraContext& ctx);
Spinor flux_spinor(const SugraContext& ctx);

// psi_F via the Hodge route (F self-dual) and via the spinor pairing.
CMat psi_f(const SugraContext& ctx, const Spinor& f);
CMat psi_f_clifford(const SugraContext& ctx, const Spinor& f, cplx nu_value);

double invariance_residual(const SugraContext& ctx, const Spinor& f);
double dirac_residual(const SugraContext& ctx, const Spinor& f);
// sum_k lambda_k (1 + c_k) dim a1^(k)
double signed_scalar(const SugraContext& ctx);

ResidualReport check_equations(const SugraContext& ctx, const Spinor& f);
ResidualReport check_equations(const SugraConfig& cfg);

// Generic path: GRic((1+t)u, (1-t)v) - (i / 8 nu)((1+t)u F, (1-t)v F) on a1^total.
CMat generic_residual_matrix(const SugraContext& ctx, const Spinor& f);
// Specialized path: ((c_k - 1) K_k - psi) / 2 on diagonal blocks, -psi / 2 elsewhere.
CMat specialized_residual_matrix(const SugraContext& ctx, const Spinor& f);

// Reduced first-ansatz equations, signed: r1..r4.
Vec first_ansatz_system(int m, double c0, double c1, double lambda1, const std::vector<double>& d);
ResidualReport first_ansatz_residuals(int m, double c0, double c1, double lambda1, const std::vector<double>& d);

// [first_algebraic, eq4 for k = 0..N (and b)], signed.
Vec second_ansatz_system(const SugraConfig& cfg);
// Adds r_diota, which needs the assembled spinor.
ResidualReport second_ansatz_residuals(const SugraConfig& cfg);

// Signed algebraic system of whichever ansatz the config uses.
Vec ansatz_system(const SugraConfig& cfg);

struct EtaParameters {
  double c1 = 0.0;
  double lambda1 = 0.0;
  double a = 0.0;
};
EtaParameters eta_parameters(int m, double c0);
SugraConfig eta_family(int m, const AlgebraSpec& block1, double c0);
AlgebraSpec ads_block(int m);

// Config with symbolic parameters.
using ParamRef = std::variant<double, std::string>;

struct BlockTemplate {
  AlgebraSpec algebra;
  ParamRef lambda = 1.0;
  ParamRef c = 0.0;
  std::string name;
};

struct FluxTemplate {
  FluxAnsatz::Kind kind = FluxAnsatz::Kind::none;
  int block = 1;
  std::vector<ParamRef> coefficients;
  std::vector<std::pair<std::vector<int>, ParamRef>> products;
  Spinor raw;
};

struct EtaTemplate {
  int m = 5;
  ParamRef c0 = 0.0;
};

struct SugraTemplate {
  std::map<std::string, double> params;  // declared parameters with defaults
  std::vector<BlockTemplate> blocks;
  std::optional<AbelianSpec> abelian;
  FluxTemplate flux;
  std::optional<EtaTemplate> eta;
  double tolerance = 1e-8;

  std::vector<std::string> parameter_names() const;
};

double resolve(const ParamRef& ref, const std::map<std::string, double>& values);
SugraConfig instantiate(const SugraTemplate& t, const std::map<std::string, double>& values);
SugraConfig instantiate(const SugraTemplate& t);

// Newton iteration with a central-difference Jacobian and minimum-norm steps.
struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 100;
  double fd_step = 1e-7;
};

struct NewtonResult {
  Vec x;
  Vec residual;
  double residual_norm = 0.0;  // max abs
  int iterations = 0;
  bool converged = false;
  std::string diagnostic;
};

NewtonResult newton_solve(const std::function<Vec(const Vec&)>& f, const Vec& x0, const std::vector<bool>& pinned,
                          const NewtonOptions& opts = {});

// Wraps a template into a residual function over its sorted parameter vector.
std::function<Vec(const Vec&)> template_system(const SugraTemplate& t);

struct ScanRow {
  std::map<std::string, double> params;
  std::optional<ResidualReport> report;
  std::string error;
};

using ScanGrid = std::vector<std::pair<std::string, std::vector<double>>>;

// Cartesian product, first axis slowest; rows in grid order regardless of thread count.
std::vector<ScanRow> scan(const SugraTemplate& t, const ScanGrid& grid, int threads);

}  // namespace gengeom
