#include "gengeom/sugra.hpp"

#include "gengeom/curvature.hpp"
#include "gengeom/dirac.hpp"

#include <algorithm>
#include <cmath>

namespace gengeom {

namespace {

constexpr cplx kI{0.0, 1.0};

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Mask block_mask(const SugraBlock& b) { return full_mask(static_cast<int>(b.dim1)) << b.offset; }

struct BuiltBlock {
  SugraBlock block;
  Vec eta;
};

// a0 first, then a K-orthonormal frame of a1.
BuiltBlock adapt(const QuadraticLieAlgebra& a, const InvolutiveSplitting& split) {
  const Index n = a.dim();
  const Index n0 = static_cast<Index>(split.indices0.size());
  const Index n1 = static_cast<Index>(split.indices1.size());
  Mat t0 = Mat::Zero(n, n0), t1 = Mat::Zero(n, n1);
  for (Index j = 0; j < n0; ++j) t0(split.indices0[static_cast<std::size_t>(j)], j) = 1.0;
  for (Index j = 0; j < n1; ++j) t1(split.indices1[static_cast<std::size_t>(j)], j) = 1.0;
  if (n1 > 0) t1 = orthonormal_frame(a.metric(), t1);
  Mat t(n, n);
  t << t0, t1;
  BuiltBlock out;
  out.block.base = change_basis(a, t);
  for (Index j = 0; j < n0; ++j) out.block.split.indices0.push_back(j);
  for (Index j = 0; j < n1; ++j) out.block.split.indices1.push_back(n0 + j);
  out.block.dim1 = n1;
  out.eta = out.block.base.metric().block(n0, n0, n1, n1).diagonal();
  for (Index j = 0; j < n1; ++j) out.eta(j) = out.eta(j) > 0 ? 1.0 : -1.0;
  return out;
}

Spinor zero_spinor() { return Spinor::Zero(Index(1) << kSugraBudget); }

// Splits a complex spinor into real and imaginary parts on the forms of one block, grouped by the
// multi-index on the remaining blocks.
std::vector<Form> block_slices(const SugraBlock& b, const Spinor& f, bool imag) {
  const Mask bm = block_mask(b);
  const Index n0 = static_cast<Index>(b.split.indices0.size());
  std::map<Mask, Form> groups;
  for (Index i = 0; i < f.size(); ++i) {
    double v = imag ? f(i).imag() : f(i).real();
    if (v == 0.0) continue;
    const Mask m = static_cast<Mask>(i);
    const Mask local = (m & bm) >> b.offset;
    Mask embedded = 0;
    for (Index j = 0; j < b.dim1; ++j)
      if (local & bit(static_cast<int>(j))) embedded |= bit(static_cast<int>(n0 + j));
    groups[m & ~bm][embedded] += v;
  }
  std::vector<Form> out;
  for (auto& kv : groups) out.push_back(std::move(kv.second));
  return out;
}

Mat killing_a1(const SugraBlock& b) {
  if (b.abelian) return Mat::Zero(b.dim1, b.dim1);
  const Index n0 = static_cast<Index>(b.split.indices0.size());
  return killing_form(b.base).block(n0, n0, b.dim1, b.dim1);
}

void require_budget_spinor(const Spinor& f) {
  if (f.size() != (Index(1) << kSugraBudget))
    throw Error(ErrorKind::invalid_dimension, "spinor must live on Lambda a1^total* of dimension 2^10");
}

}  // namespace

const char* to_string(FluxAnsatz::Kind kind) {
  switch (kind) {
    case FluxAnsatz::Kind::polynomial: return "polynomial";
    case FluxAnsatz::Kind::volume_products: return "volume-products";
    case FluxAnsatz::Kind::raw: return "raw";
    default: return "none";
  }
}

SugraContext assemble(const SugraConfig& cfg) {
  if (cfg.blocks.empty()) throw Error(ErrorKind::config, "at least the Lorentzian block is required");
  std::vector<SugraBlock> blocks;
  std::vector<Vec> etas;
  ResidualReport checks(1e-9);
  for (std::size_t k = 0; k < cfg.blocks.size(); ++k) {
    const BlockSpec& bs = cfg.blocks[k];
    if (bs.algebra.lambda) throw Error(ErrorKind::config, "set lambda on the block, not inside its algebra");
    if (bs.algebra.type == "double" || bs.algebra.type == "abelian")
      throw Error(ErrorKind::config, "block algebras must be semisimple with an involution");
    BuiltAlgebra built = build(bs.algebra);
    if (!built.splitting) throw Error(ErrorKind::config, "block " + std::to_string(k) + " has no involution");
    if (k == 0 && std::abs(bs.lambda - 1.0) > 1e-12) throw Error(ErrorKind::config, "lambda_0 must be 1");
    if (k > 0 && !(bs.lambda < 0.0)) throw Error(ErrorKind::config, "lambda_k must be negative for k >= 1");
    QuadraticLieAlgebra a = rescale_metric(built.algebra, bs.lambda);
    ResidualReport gr = grading_check(a, *built.splitting);
    if (!gr.pass()) throw Error(ErrorKind::grading, "block " + std::to_string(k) + " involution is not a grading");
    BuiltBlock bb = adapt(a, *built.splitting);
    bb.block.name = bs.name.empty() ? "block" + std::to_string(k) : bs.name;
    bb.block.lambda = bs.lambda;
    bb.block.c = bs.c;
    blocks.push_back(std::move(bb.block));
    etas.push_back(bb.eta);
  }
  if (cfg.abelian) {
    const Mat& m = cfg.abelian->metric;
    QuadraticLieAlgebra a = build_abelian(static_cast<int>(m.rows()), m);
    InvolutiveSplitting split;
    for (Index i = 0; i < a.dim(); ++i) split.indices1.push_back(i);
    BuiltBlock bb = adapt(a, split);
    bb.block.name = "b";
    bb.block.abelian = true;
    blocks.push_back(std::move(bb.block));
    etas.push_back(bb.eta);
  }
  Index total1 = 0;
  for (auto& b : blocks) {
    b.offset = total1;
    total1 += b.dim1;
  }
  if (total1 != kSugraBudget)
    throw Error(ErrorKind::budget, "dim V+ = " + std::to_string(total1) + ", must be " + std::to_string(kSugraBudget));
  Vec eta(total1);
  for (std::size_t k = 0; k < blocks.size(); ++k) eta.segment(blocks[k].offset, blocks[k].dim1) = etas[k];
  int negatives = 0;
  for (Index i = 0; i < eta.size(); ++i) negatives += eta(i) < 0;
  if (negatives != 1 || (etas[0].array() < 0).count() != 1)
    throw Error(ErrorKind::signature, "V+ must be Lorentzian with its timelike direction in block 0");

  std::vector<QuadraticLieAlgebra> doubles;
  for (const auto& b : blocks) doubles.push_back(make_double(b.base, b.c, b.split).algebra);
  DirectSum ds = direct_sum(doubles);
  for (std::size_t k = 0; k < blocks.size(); ++k) blocks[k].double_offset = ds.offsets[k];
  const Index dim = ds.algebra.dim();

  Index total0 = 0;
  for (const auto& b : blocks) total0 += static_cast<Index>(b.split.indices0.size());
  Mat vp = Mat::Zero(dim, total1), vm = Mat::Zero(dim, total1 + 2 * total0), sp = Mat::Zero(dim, total0);
  Index col0 = 0;
  for (const auto& b : blocks) {
    const Index n = b.base.dim();
    const Index n0 = static_cast<Index>(b.split.indices0.size());
    const Index o = b.double_offset;
    for (Index j = 0; j < b.dim1; ++j) {
      vp(o + n0 + j, b.offset + j) = 1.0;
      vp(o + n + n0 + j, b.offset + j) = 1.0;
      vm(o + n0 + j, b.offset + j) = 1.0;
      vm(o + n + n0 + j, b.offset + j) = -1.0;
    }
    for (Index j = 0; j < n0; ++j) {
      vm(o + j, total1 + col0 + j) = 1.0;
      vm(o + n + j, total1 + total0 + col0 + j) = 1.0;
      sp(o + j, col0 + j) = 1.0;
    }
    col0 += n0;
  }
  GeneralizedMetric vplus(ds.algebra.metric(), vp, vm);
  IsotropicSubalgebra s(ds.algebra, sp);
  checks.merge(s.invariants(), "s.");
  ResidualReport adm = admissible_check(ds.algebra, vplus, s);
  checks.merge(adm, "admissible.");
  if (!adm.pass() || !s.invariants().pass()) throw Error(ErrorKind::grading, "assembled V+ is not admissible");

  Mat amb = Mat::Zero(2 * total1, 2 * total1);
  Mat l1 = Mat::Zero(2 * total1, total1), l2 = Mat::Zero(2 * total1, total1);
  Mat frame = Mat::Zero(2 * total1, total1);
  for (Index i = 0; i < total1; ++i) {
    amb(i, total1 + i) = eta(i);
    amb(total1 + i, i) = eta(i);
    l1(total1 + i, i) = eta(i);
    l2(i, i) = 1.0;
    frame(i, i) = frame(total1 + i, i) = std::sqrt(0.5);
  }
  LagrangianSplitting reduced(amb, l1, l2, hodge_volume(eta));

  std::vector<Mat> action;
  for (const auto& b : blocks) {
    const Index n0 = static_cast<Index>(b.split.indices0.size());
    for (Index x = 0; x < n0; ++x) {
      const Mat& adx = b.base.ad(x);
      Mat a = Mat::Zero(total1, total1);
      for (Index p = 0; p < b.dim1; ++p)
        for (Index q = 0; q < b.dim1; ++q) a(b.offset + p, b.offset + q) = -adx(n0 + q, n0 + p);
      action.push_back(a);
    }
  }
  return SugraContext{cfg,   std::move(blocks), ds.algebra, std::move(vplus), std::move(s), eta, std::move(reduced),
                      frame, std::move(action), checks};
}

Spinor block_volume_form(const SugraContext& ctx, std::size_t block) {
  const SugraBlock& b = ctx.blocks.at(block);
  double k = 1.0;
  for (Index i = 0; i < b.dim1; ++i) k *= ctx.eta(b.offset + i);
  Spinor out = zero_spinor();
  out(static_cast<Index>(block_mask(b))) = k;
  return out;
}

Spinor omega_form(const SugraContext& ctx, std::size_t block) {
  const SugraBlock& b = ctx.blocks.at(block);
  if (b.dim1 % 2) throw Error(ErrorKind::invalid_dimension, "Omega needs an even-dimensional a1");
  Spinor out = zero_spinor();
  for (Index j = 0; j + 1 < b.dim1; j += 2)
    out(static_cast<Index>(bit(static_cast<int>(b.offset + j)) | bit(static_cast<int>(b.offset + j + 1)))) = 1.0;
  return out;
}

Spinor r_vplus(const SugraContext& ctx, const Spinor& f) { return r_vplus_apply(ctx.reduced, ctx.frame, f); }

Spinor r_vplus_hodge(const SugraContext& ctx, const Spinor& f) { return hodge(nu(f) * theta(f), ctx.eta); }

Spinor flux_hat(const SugraContext& ctx) {
  const FluxAnsatz& fl = ctx.config.flux;
  switch (fl.kind) {
    case FluxAnsatz::Kind::none: return zero_spinor();
    case FluxAnsatz::Kind::raw:
      require_budget_spinor(fl.raw);
      return fl.raw;
    case FluxAnsatz::Kind::polynomial: {
      if (fl.block < 0 || static_cast<std::size_t>(fl.block) >= ctx.blocks.size())
        throw Error(ErrorKind::config, "polynomial flux names a missing block");
      Spinor omega = omega_form(ctx, static_cast<std::size_t>(fl.block));
      const Index mmax = ctx.blocks[static_cast<std::size_t>(fl.block)].dim1 / 2;
      if (static_cast<Index>(fl.coefficients.size()) > mmax + 1)
        throw Error(ErrorKind::config, "polynomial flux has more coefficients than powers of Omega");
      Spinor out = zero_spinor();
      Spinor power = zero_spinor();
      power(0) = 1.0;
      double fact = 1.0;
      for (std::size_t n = 0; n < fl.coefficients.size(); ++n) {
        if (n > 0) {
          power = wedge<cplx>(power, omega);
          fact *= static_cast<double>(n);
        }
        out += (fl.coefficients[n] / fact) * power;
      }
      return out;
    }
    case FluxAnsatz::Kind::volume_products: {
      std::vector<Spinor> vols;
      for (std::size_t k = 0; k < ctx.blocks.size(); ++k) vols.push_back(block_volume_form(ctx, k));
      Spinor out = zero_spinor();
      for (const auto& [h, coef] : fl.products) {
        if (h.size() != ctx.blocks.size())
          throw Error(ErrorKind::config, "volume-product index must have one entry per block");
        Spinor term = zero_spinor();
        term(0) = 1.0;
        for (std::size_t k = 0; k < h.size(); ++k) {
          if (h[k] != 0 && h[k] != 1) throw Error(ErrorKind::config, "volume-product index entries must be 0 or 1");
          if (h[k]) term = wedge<cplx>(term, vols[k]);
        }
        out += coef * term;
      }
      return out;
    }
  }
  return zero_spinor();
}

Spinor flux_spinor(const SugraContext& ctx) { return self_dual_project(ctx.reduced, ctx.frame, flux_hat(ctx)); }

CMat psi_f(const SugraContext& ctx, const Spinor& f) {
  require_budget_spinor(f);
  const int n = static_cast<int>(ctx.dim1());
  const Spinor star = hodge(f, ctx.eta);
  CMat out(n, n);
  for (int v = 0; v < n; ++v) {
    Spinor bv = iota(v, f) - ctx.eta(v) * wedge(v, f);
    for (int u = 0; u < n; ++u) {
      Spinor auv = iota(u, bv) + ctx.eta(u) * wedge(u, bv);
      out(u, v) = 0.25 * top_of_wedge<cplx>(auv, star, n) / ctx.volume();
    }
  }
  return out;
}

CMat psi_f_clifford(const SugraContext& ctx, const Spinor& f, cplx nu_value) {
  require_budget_spinor(f);
  const Index n = ctx.dim1();
  std::vector<Spinor> plus, minus;
  for (Index a = 0; a < n; ++a) {
    Vec up = Vec::Zero(2 * n), um = Vec::Zero(2 * n);
    up(a) = 1.0;
    up(n + a) = 1.0;
    um(a) = 1.0;
    um(n + a) = -1.0;
    plus.push_back(clifford_apply(ctx.reduced, up, f));
    minus.push_back(clifford_apply(ctx.reduced, um, f));
  }
  CMat out(n, n);
  const cplx pref = kI / (4.0 * nu_value);
  for (Index u = 0; u < n; ++u)
    for (Index v = 0; v < n; ++v) out(u, v) = pref * mukai_pairing(plus[u], minus[v], ctx.volume());
  return out;
}

double invariance_residual(const SugraContext& ctx, const Spinor& f) {
  double worst = 0.0;
  for (const auto& a : ctx.s_action) worst = std::max(worst, apply_derivation<cplx>(a, f).norm());
  return worst;
}

double dirac_residual(const SugraContext& ctx, const Spinor& f) {
  double sq = 0.0;
  for (const auto& b : ctx.blocks) {
    if (b.abelian) continue;
    FormOperator ce = d_ce_operator(b.base);
    FormOperator io = iota_f_operator(b.base);
    for (bool imag : {false, true})
      for (const Form& phi : block_slices(b, f, imag)) {
        Form x = ce(phi);
        if (b.c != 0.0)
          for (const auto& [m, v] : io(phi)) x[m] -= b.c * v;
        double nx = norm(x);
        sq += nx * nx;
      }
  }
  return std::sqrt(sq);
}

double signed_scalar(const SugraContext& ctx) {
  double s = 0.0;
  for (const auto& b : ctx.blocks)
    if (!b.abelian) s += b.lambda * (1.0 + b.c) * static_cast<double>(b.dim1);
  return s;
}

CMat generic_residual_matrix(const SugraContext& ctx, const Spinor& f) {
  const Index n = ctx.dim1();
  Mat ric = gric_columns(ctx.algebra, ctx.vplus, Divergence::zero(ctx.algebra.dim()), 0, n);
  cplx nv = parity(f) == Parity::mixed ? cplx(1.0) : nu(f);
  return ric.cast<cplx>() - 0.5 * psi_f_clifford(ctx, f, nv);
}

CMat specialized_residual_matrix(const SugraContext& ctx, const Spinor& f) {
  CMat out = -0.5 * psi_f(ctx, f);
  for (const auto& b : ctx.blocks)
    out.block(b.offset, b.offset, b.dim1, b.dim1) += (0.5 * (b.c - 1.0) * killing_a1(b)).cast<cplx>();
  return out;
}

ResidualReport check_equations(const SugraContext& ctx, const Spinor& f) {
  require_budget_spinor(f);
  ResidualReport rep(ctx.config.tolerance);
  const Parity par = parity(f);
  double parity_res = 0.0;
  if (par == Parity::mixed) {
    double even = 0.0, odd = 0.0;
    for (Index i = 0; i < f.size(); ++i) (degree(static_cast<Mask>(i)) % 2 ? odd : even) += std::norm(f(i));
    parity_res = std::sqrt(std::min(even, odd));
  }
  const CMat psi = psi_f(ctx, f);
  rep.add("r_scalar", std::abs(signed_scalar(ctx)));
  double off = 0.0;
  for (std::size_t k = 0; k < ctx.blocks.size(); ++k) {
    const SugraBlock& b = ctx.blocks[k];
    CMat diag = psi.block(b.offset, b.offset, b.dim1, b.dim1);
    if (b.abelian) {
      rep.add("r_abelian", diag.norm());
    } else {
      CMat target = ((b.c - 1.0) * killing_a1(b)).cast<cplx>();
      rep.add("r_block_" + std::to_string(k), (target - diag).norm());
    }
    for (std::size_t l = 0; l < ctx.blocks.size(); ++l) {
      if (l == k) continue;
      const SugraBlock& o = ctx.blocks[l];
      off = std::max(off, psi.block(b.offset, o.offset, b.dim1, o.dim1).cwiseAbs().maxCoeff());
    }
  }
  rep.add("r_offblock", off);
  rep.add("r_selfdual", (r_vplus(ctx, f) - f).norm());
  rep.add("r_invariance", invariance_residual(ctx, f));
  rep.add("r_parity", parity_res);
  rep.add("r_imag", psi.imag().cwiseAbs().maxCoeff());
  rep.add("r_dirac", dirac_residual(ctx, f));
  rep.add("oracle_gric", (generic_residual_matrix(ctx, f) - specialized_residual_matrix(ctx, f)).cwiseAbs().maxCoeff());
  double scal = scalar_curvature(ctx.algebra, ctx.vplus, Divergence::zero(ctx.algebra.dim()));
  rep.add("oracle_scalar", std::abs(signed_scalar(ctx) - 4.0 * scal));
  for (const auto& e : ctx.checks.entries()) rep.add("assembly." + e.name, e.value, e.tolerance);
  return rep;
}

ResidualReport check_equations(const SugraConfig& cfg) {
  SugraContext ctx = assemble(cfg);
  return check_equations(ctx, flux_spinor(ctx));
}

Vec first_ansatz_system(int m, double c0, double c1, double lambda1, const std::vector<double>& d) {
  if (m < 1 || m > 3) throw Error(ErrorKind::invalid_argument, "first ansatz needs M in {1, 2, 3}");
  if (static_cast<int>(d.size()) != m + 1) throw Error(ErrorKind::invalid_argument, "need coefficients d_0..d_M");
  double s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (int n = 0; n <= m; ++n) {
    s2 += d[n] * d[n] * binomial(m, n);
    s3 += d[n] * d[n] * binomial(m, n) * (2 * n - m);
    if (n >= 1) s4 += d[n] * d[n - 1] * binomial(m - 1, n - 1);
  }
  Vec r(4);
  r << (5 - m) * (1 + c0) + lambda1 * m * (1 + c1), 2 * (1 - c0) - s2, -2.0 * m * lambda1 * (1 - c1) - s3, s4;
  return r;
}

ResidualReport first_ansatz_residuals(int m, double c0, double c1, double lambda1, const std::vector<double>& d) {
  Vec r = first_ansatz_system(m, c0, c1, lambda1, d);
  ResidualReport rep(1e-10);
  for (Index i = 0; i < r.size(); ++i) rep.add("r" + std::to_string(i + 1), std::abs(r(i)));
  return rep;
}

namespace {

Index a1_dim(const AlgebraSpec& spec) {
  BuiltAlgebra b = build(spec);
  if (!b.splitting) throw Error(ErrorKind::config, "block has no involution");
  return static_cast<Index>(b.splitting->indices1.size());
}

double scalar_of(const SugraConfig& cfg) {
  double s = 0.0;
  for (const auto& b : cfg.blocks) s += b.lambda * (1.0 + b.c) * static_cast<double>(a1_dim(b.algebra));
  return s;
}

}  // namespace

Vec second_ansatz_system(const SugraConfig& cfg) {
  if (cfg.flux.kind != FluxAnsatz::Kind::volume_products)
    throw Error(ErrorKind::config, "second ansatz needs a volume-products flux");
  const std::size_t nb = cfg.blocks.size() + (cfg.abelian ? 1 : 0);
  Vec r(static_cast<Index>(nb + 1));
  r(0) = scalar_of(cfg);
  for (std::size_t k = 0; k < nb; ++k) {
    double lam = k < cfg.blocks.size() ? cfg.blocks[k].lambda : 0.0;
    double c = k < cfg.blocks.size() ? cfg.blocks[k].c : 0.0;
    double sum = 0.0;
    for (const auto& [h, f] : cfg.flux.products) {
      if (h.size() != nb) throw Error(ErrorKind::config, "volume-product index must have one entry per block");
      sum += ((h[0] + h[k]) % 2 ? -1.0 : 1.0) * f * f;
    }
    r(static_cast<Index>(k + 1)) = 2.0 * (1.0 - c) * lam - sum;
  }
  return r;
}

ResidualReport second_ansatz_residuals(const SugraConfig& cfg) {
  Vec r = second_ansatz_system(cfg);
  ResidualReport rep(cfg.tolerance);
  rep.add("r_scalar", std::abs(r(0)));
  for (Index k = 1; k < r.size(); ++k) {
    bool is_b = cfg.abelian && static_cast<std::size_t>(k) == cfg.blocks.size() + 1;
    rep.add(is_b ? "r_eq4_b" : "r_eq4_" + std::to_string(k - 1), std::abs(r(k)));
  }
  SugraContext ctx = assemble(cfg);
  Spinor f = flux_spinor(ctx);
  Spinor star = hodge(f, ctx.eta);
  const int n = static_cast<int>(ctx.dim1());
  double worst = 0.0;
  for (int v = 0; v < n; ++v) {
    Spinor iv = iota(v, f);
    for (int u = 0; u < n; ++u)
      worst = std::max(worst, std::abs(top_of_wedge<cplx>(iota(u, iv), star, n) / ctx.volume()));
  }
  rep.add("r_diota", worst);
  return rep;
}

Vec ansatz_system(const SugraConfig& cfg) {
  switch (cfg.flux.kind) {
    case FluxAnsatz::Kind::volume_products: return second_ansatz_system(cfg);
    case FluxAnsatz::Kind::polynomial: {
      if (cfg.blocks.size() != 2 || cfg.abelian || cfg.flux.block != 1)
        throw Error(ErrorKind::config, "the polynomial ansatz needs exactly two blocks with Omega on block 1");
      const AlgebraSpec& s1 = cfg.blocks[1].algebra;
      if (s1.type != "su" || s1.involution != "block")
        throw Error(ErrorKind::config, "the polynomial ansatz needs su(M+1) with the block involution");
      return first_ansatz_system(s1.n - 1, cfg.blocks[0].c, cfg.blocks[1].c, cfg.blocks[1].lambda,
                                 cfg.flux.coefficients);
    }
    default: throw Error(ErrorKind::config, std::string("no algebraic system for flux kind ") + to_string(cfg.flux.kind));
  }
}

EtaParameters eta_parameters(int m, double c0) {
  if (m < 2 || m > 8) throw Error(ErrorKind::invalid_argument, "m must lie in 2..8");
  if (!(c0 < 1.0)) throw Error(ErrorKind::invalid_argument, "c0 >= 1 gives a^2 <= 0");
  const double rho = (1.0 + c0) / (1.0 - c0) * m / (10.0 - m);
  if (std::abs(rho + 1.0) < 1e-12) throw Error(ErrorKind::degenerate, "c1 diverges");
  EtaParameters p;
  p.c1 = (rho - 1.0) / (rho + 1.0);
  if (std::abs(1.0 - p.c1) < 1e-12 || std::abs(1.0 + p.c1) < 1e-12) throw Error(ErrorKind::degenerate, "c1 degenerates to +-1");
  p.lambda1 = -(1.0 - c0) / (1.0 - p.c1);
  if (!(p.lambda1 < 0.0)) throw Error(ErrorKind::invalid_argument, "family leaves lambda_1 < 0");
  p.a = std::sqrt(2.0 * (1.0 - c0));
  return p;
}

AlgebraSpec ads_block(int m) {
  AlgebraSpec s;
  s.type = "so";
  s.p = m - 1;
  s.q = 2;
  s.involution = "last";
  return s;
}

SugraConfig eta_family(int m, const AlgebraSpec& block1, double c0) {
  EtaParameters p = eta_parameters(m, c0);
  SugraConfig cfg;
  cfg.blocks.push_back({ads_block(m), 1.0, c0, "ads"});
  cfg.blocks.push_back({block1, p.lambda1, p.c1, "internal"});
  cfg.flux.kind = FluxAnsatz::Kind::volume_products;
  cfg.flux.products[{1, 0}] = p.a;
  return cfg;
}

std::vector<std::string> SugraTemplate::parameter_names() const {
  std::vector<std::string> out;
  for (const auto& kv : params) out.push_back(kv.first);
  return out;
}

double resolve(const ParamRef& ref, const std::map<std::string, double>& values) {
  if (const double* d = std::get_if<double>(&ref)) return *d;
  const std::string& name = std::get<std::string>(ref);
  auto it = values.find(name);
  if (it == values.end()) throw Error(ErrorKind::config, "unknown parameter '" + name + "'");
  return it->second;
}

SugraConfig instantiate(const SugraTemplate& t, const std::map<std::string, double>& values) {
  std::map<std::string, double> v = t.params;
  for (const auto& [k, x] : values) {
    if (!t.params.count(k)) throw Error(ErrorKind::config, "parameter '" + k + "' is not declared");
    v[k] = x;
  }
  if (t.eta) {
    if (t.blocks.size() != 1 || t.abelian)
      throw Error(ErrorKind::config, "an eta family takes exactly one internal block and no abelian factor");
    SugraConfig cfg = eta_family(t.eta->m, t.blocks[0].algebra, resolve(t.eta->c0, v));
    if (!t.blocks[0].name.empty()) cfg.blocks[1].name = t.blocks[0].name;
    cfg.tolerance = t.tolerance;
    return cfg;
  }
  SugraConfig cfg;
  cfg.tolerance = t.tolerance;
  cfg.abelian = t.abelian;
  for (const auto& b : t.blocks) cfg.blocks.push_back({b.algebra, resolve(b.lambda, v), resolve(b.c, v), b.name});
  cfg.flux.kind = t.flux.kind;
  cfg.flux.block = t.flux.block;
  for (const auto& c : t.flux.coefficients) cfg.flux.coefficients.push_back(resolve(c, v));
  for (const auto& [h, f] : t.flux.products) cfg.flux.products[h] = resolve(f, v);
  cfg.flux.raw = t.flux.raw;
  return cfg;
}

SugraConfig instantiate(const SugraTemplate& t) { return instantiate(t, {}); }

std::function<Vec(const Vec&)> template_system(const SugraTemplate& t) {
  std::vector<std::string> names = t.parameter_names();
  return [t, names](const Vec& x) {
    if (x.size() != static_cast<Index>(names.size())) throw Error(ErrorKind::invalid_dimension, "parameter vector size");
    std::map<std::string, double> v;
    for (std::size_t i = 0; i < names.size(); ++i) v[names[i]] = x(static_cast<Index>(i));
    return ansatz_system(instantiate(t, v));
  };
}

}  // namespace gengeom
