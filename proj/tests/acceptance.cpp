// Acceptance run: one PASS/FAIL line per criterion.

#include "support.hpp"

#include "gengeom/cli.hpp"
#include "gengeom/config.hpp"
#include "gengeom/dirac.hpp"
#include "gengeom/sugra.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <iostream>
#include <sstream>

using namespace gengeom;
using support::Gen;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct GradedCase {
  std::string name;
  AlgebraSpec spec;
  double killing_over_trace;
};

std::vector<GradedCase> graded_cases() {
  AlgebraSpec su2;
  su2.type = "su";
  su2.n = 2;
  su2.involution = "block";
  AlgebraSpec su3;
  su3.type = "su";
  su3.n = 3;
  su3.involution = "real";
  AlgebraSpec so32;
  so32.type = "so";
  so32.p = 3;
  so32.q = 2;
  so32.involution = "last";
  return {{"su(2)/u(1)", su2, support::killing_over_trace_su(2)},
          {"su(3)/so(3)", su3, support::killing_over_trace_su(3)},
          {"so(3,2)/so(3,1)", so32, support::killing_over_trace_so(3, 2)}};
}

const std::vector<double> kSweepC = {-1.0, -0.5, 0.0, 0.7, 1.0};

Outcome criterion1() {
  Stopwatch sw;
  double worst = 0.0;
  for (const auto& gc : graded_cases()) {
    BuiltAlgebra b = build(gc.spec);
    const Mat killing = gc.killing_over_trace * b.algebra.metric();
    const auto& i1 = b.splitting->indices1;
    for (double c : kSweepC) {
      DoubleAlgebra d = make_double(b.algebra, c, b.splitting);
      Mat ric = gric(d.algebra, vplus_of_double(d), Divergence::zero(d.algebra.dim()));
      for (std::size_t a = 0; a < i1.size(); ++a)
        for (std::size_t bb = 0; bb < i1.size(); ++bb)
          worst = std::max(worst, std::abs(ric(Index(a), Index(bb)) - 0.5 * (c - 1.0) * killing(i1[a], i1[bb])));
    }
  }
  const double t = sw.seconds();
  return {worst < 1e-8 && t < 1.0, "max |GRic - (c-1)/2 K| = " + fmt("%.3g", worst) + ", " + fmt("%.3f", t) + " s"};
}

Outcome criterion2() {
  double worst = 0.0;
  for (const auto& gc : graded_cases()) {
    for (double lambda : {1.0, -1.0, 2.5}) {
      AlgebraSpec spec = gc.spec;
      spec.lambda = lambda;
      BuiltAlgebra b = build(spec);
      const double dim1 = static_cast<double>(b.splitting->indices1.size());
      for (double c : kSweepC) {
        DoubleAlgebra d = make_double(b.algebra, c, b.splitting);
        double r = scalar_curvature(d.algebra, vplus_of_double(d), Divergence::zero(d.algebra.dim()));
        worst = std::max(worst, std::abs(r - 0.25 * (1.0 + c) * lambda * dim1));
      }
    }
  }
  AlgebraSpec su2 = graded_cases()[0].spec;
  su2.lambda = -1.0;
  BuiltAlgebra b = build(su2);
  DoubleAlgebra d = make_double(b.algebra, 1.0, b.splitting);
  double spot = scalar_curvature(d.algebra, vplus_of_double(d), Divergence::zero(d.algebra.dim()));
  bool ok = worst < 1e-8 && std::abs(spot + 1.0) < 1e-8;
  return {ok, "max |R - (1+c)/4 lambda dim a1| = " + fmt("%.3g", worst) + ", spot value " + fmt("%.12g", spot)};
}

// Ambient R^{n,n} = V+ + V- with V+ of signature (n - q, q).
struct ModelSpace {
  LagrangianSplitting split;
  Mat frame;
};

ModelSpace model_space(int n, int q) {
  Vec eta = Vec::Ones(n);
  for (int i = n - q; i < n; ++i) eta(i) = -1.0;
  Mat g = Mat::Zero(2 * n, 2 * n);
  g.topRightCorner(n, n) = eta.asDiagonal();
  g.bottomLeftCorner(n, n) = eta.asDiagonal();
  Mat l1 = Mat::Zero(2 * n, n), l2 = Mat::Zero(2 * n, n), frame = Mat::Zero(2 * n, n);
  for (int i = 0; i < n; ++i) {
    l1(n + i, i) = eta(i);
    l2(i, i) = 1.0;
    frame(i, i) = frame(n + i, i) = std::sqrt(0.5);
  }
  return {LagrangianSplitting(g, l1, l2), frame};
}

Outcome criterion3() {
  Gen gen(3);
  std::string bad;
  double worst = 0.0;
  int physical = 0;
  for (int n = 1; n <= 10; ++n)
    for (int q = 0; q <= 1; ++q) {
      if (q > n) continue;
      ModelSpace ms = model_space(n, q);
      const double expected = ((((n + 1) / 2) + q) % 2) ? -1.0 : 1.0;
      Spinor f = gen.spinor(n);
      Spinor r2 = r_vplus_apply(ms.split, ms.frame, r_vplus_apply(ms.split, ms.frame, f));
      double dev = (r2 - expected * f).norm() / f.norm();
      if (n == 10 && q == 1) physical = (r2 - f).norm() / f.norm() < 1e-9 ? 1 : -1;
      if (dev >= 1e-9) {
        double observed = (r2 + f).norm() < (r2 - f).norm() ? -1.0 : 1.0;
        bad += " (n=" + std::to_string(n) + ",q=" + std::to_string(q) + ": " + (observed > 0 ? "+1" : "-1") + ")";
      }
      worst = std::max(worst, std::min(dev, 2.0));
    }
  std::string detail = std::string("n=10,q=1 gives ") + (physical > 0 ? "+1" : "not +1");
  if (!bad.empty()) detail += "; closed-form sign law violated at" + bad;
  return {bad.empty() && physical > 0, detail};
}

Outcome criterion4() {
  Stopwatch sw;
  SugraContext ctx = assemble(instantiate(load_sugra_template(support::config_path("ads5xs5_eta.toml"))));
  const int m = static_cast<int>(ctx.dim1());
  int negatives = 0;
  for (Index i = 0; i < ctx.eta.size(); ++i) negatives += ctx.eta(i) < 0;
  double worst = 0.0, worst_lib = 0.0;
  const cplx i1(0.0, 1.0);
  for (Index mask = 0; mask < (Index(1) << m); ++mask) {
    Spinor f = Spinor::Zero(Index(1) << m);
    f(mask) = 1.0;
    const int k = degree(static_cast<Mask>(mask));
    const cplx nu_theta = (k % 2 ? i1 : cplx(1.0)) * std::pow(i1, k);
    Spinor rhs = nu_theta * support::hodge_basis_oracle(static_cast<Mask>(mask), ctx.eta, ctx.volume());
    Spinor r = r_vplus(ctx, f);
    worst = std::max(worst, (r - rhs).norm());
    worst_lib = std::max(worst_lib, (r - r_vplus_hodge(ctx, f)).norm());
  }
  const double t = sw.seconds();
  bool ok = m == 10 && negatives == 1 && worst < 1e-9 && worst_lib < 1e-9 && t < 10.0;
  return {ok, "max |R F - * nu theta F| = " + fmt("%.3g", worst) + " over 1024 forms, " + fmt("%.2f", t) + " s"};
}

Outcome criterion5() {
  Gen gen(5);
  SugraContext ctx = assemble(instantiate(load_sugra_template(support::config_path("ads5xs5_eta.toml"))));
  double worst_adj = 0.0, worst_sym = 0.0;
  const cplx i1(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const bool big = trial % 4 == 0;
    const int r = big ? 10 : gen.integer(1, 6);
    LagrangianSplitting s = big ? ctx.reduced : support::random_splitting(gen, r);
    const double vol = big ? ctx.volume() : 1.0;
    Vec u = gen.vec(s.dim());
    const int k = gen.integer(0, r);
    Spinor a = gen.homogeneous(r, k);
    Spinor b = gen.spinor(r);
    cplx lhs = mukai_pairing(clifford_apply(s, u, a), b, vol);
    cplx rhs = (k % 2 ? -1.0 : 1.0) * mukai_pairing(a, i1 * clifford_apply(s, u, b), vol);
    worst_adj = std::max(worst_adj, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    Spinor bc = gen.homogeneous(r, r - k);
    cplx ab = mukai_pairing(a, bc, vol), ba = mukai_pairing(bc, a, vol);
    cplx sym = std::pow(i1, (2 * k - 1) * r);
    worst_sym = std::max(worst_sym, std::abs(ab - sym * ba) / std::max(1.0, std::abs(ab)));
  }
  return {worst_adj < 1e-9 && worst_sym < 1e-9,
          "adjointness " + fmt("%.3g", worst_adj) + ", symmetry " + fmt("%.3g", worst_sym) + " over 100 triples"};
}

Outcome criterion6() {
  double worst = 0.0;
  std::size_t fewest = 1000;
  auto cases = graded_cases();
  for (std::size_t ci : {std::size_t(1), std::size_t(0)}) {
    BuiltAlgebra b = build(cases[ci].spec);
    fewest = std::min(fewest, invariant_a1_forms(b.algebra, *b.splitting).size());
    for (double c : {-1.0, 0.0, 1.0}) {
      DoubleAlgebra d = make_double(b.algebra, c, b.splitting);
      ResidualReport rep = d0_on_invariants_check(d);
      for (const char* key : {"d_ce", "iota_f", "d0"}) worst = std::max(worst, rep.value(key));
    }
  }
  return {worst < 1e-9 && fewest >= 2,
          "max over d_CE, iota_f, D0 = " + fmt("%.3g", worst) + ", invariant forms per case >= " + std::to_string(fewest)};
}

Outcome criterion7() {
  Gen gen(7);
  double worst = 0.0;
  int samples = 0;
  for (const char* name : {"su2_double.toml", "su3_double.toml", "so32_double.toml"}) {
    AlgebraConfig cfg = load_algebra_config(support::config_path(name));
    BuiltAlgebra b = build(cfg.algebra);
    GeneralizedMetric base = vplus_of_double(*b.dbl);
    for (int k = 0; k < 20; ++k) {
      GeneralizedMetric v = support::random_vplus(gen, base, 0.3);
      Mat phi = gen.mat(v.rank(), v.dim() - v.rank());
      worst = std::max(worst, gradient_sample(b.algebra, v, phi, 1e-5).relative_error);
      ++samples;
    }
  }
  return {worst < 1e-5, "max relative error " + fmt("%.3g", worst) + " over " + std::to_string(samples) + " samples"};
}

int run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

Outcome criterion8() {
  std::string failures;
  double worst = 0.0;
  for (double c0 : {-0.5, 0.0, 0.3}) {
    EtaParameters p = eta_parameters(5, c0);
    worst = std::max({worst, std::abs(p.c1 - c0), std::abs(p.lambda1 + 1.0), std::abs(p.a * p.a - 2.0 * (1.0 - c0))});
    char param[32];
    std::snprintf(param, sizeof param, "c0=%g", c0);
    for (const char* name : {"ads5xs5_eta.toml", "ads5_s3xs2.toml", "ads5_su3so3.toml"})
      if (run_cli({"sugra", "verify", support::config_path(name), "--param", param}) != 0)
        failures += std::string(" ") + name + "@" + param;
  }
  bool ok = failures.empty() && worst < 1e-12;
  return {ok, ok ? "9 verify runs exit 0; family parameters match to " + fmt("%.3g", worst)
                 : "failing:" + failures};
}

std::vector<std::string> sugra_configs() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(GENGEOM_CONFIG_DIR)) {
    std::string p = e.path().string();
    if (e.path().extension() != ".toml" || p.find("bad_") != std::string::npos) continue;
    if (detect_config_kind(p) == ConfigKind::sugra) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome criterion9() {
  double worst = 0.0, largest_offshell = 0.0;
  int points = 0;
  for (const auto& path : sugra_configs()) {
    SugraTemplate t = load_sugra_template(path);
    std::vector<std::map<std::string, double>> variants = {t.params};
    for (const auto& [k, v] : t.params) {
      auto shifted = t.params;
      shifted[k] = v + (v < 0.5 ? 0.1 : -0.1);
      variants.push_back(shifted);
    }
    for (std::size_t i = 0; i < variants.size(); ++i) {
      std::optional<SugraContext> ctx;
      try {
        ctx.emplace(assemble(instantiate(t, variants[i])));
      } catch (const Error&) {
        continue;
      }
      Spinor f = flux_spinor(*ctx);
      // the equivalence presumes definite parity
      if (parity(f) == Parity::mixed) continue;
      CMat gen_m = generic_residual_matrix(*ctx, f);
      CMat spec_m = specialized_residual_matrix(*ctx, f);
      worst = std::max(worst, (gen_m - spec_m).cwiseAbs().maxCoeff());
      if (i > 0) largest_offshell = std::max(largest_offshell, spec_m.cwiseAbs().maxCoeff());
      ++points;
    }
  }
  bool ok = worst < 1e-8 && largest_offshell > 1e-3;
  return {ok, "max |generic - specialized| = " + fmt("%.3g", worst) + " at " + std::to_string(points) +
                  " points (largest off-shell residual " + fmt("%.3g", largest_offshell) + ")"};
}

std::vector<double> coefficients_of(const std::map<std::string, double>& v, int m) {
  std::vector<double> d;
  for (int n = 0; n <= m; ++n) d.push_back(v.at("d" + std::to_string(n)));
  return d;
}

Outcome criterion10() {
  Gen gen(10);
  std::string detail;
  bool ok = true;
  for (int m = 1; m <= 3; ++m) {
    SugraTemplate t = load_sugra_template(support::config_path("first_ansatz_M" + std::to_string(m) + ".toml"));
    std::vector<std::string> names = t.parameter_names();
    auto system = template_system(t);
    int good = 0, verified = 0, positive_lambda = 0;
    for (int s = 0; s < 10; ++s) {
      Vec x0(static_cast<Index>(names.size()));
      for (std::size_t i = 0; i < names.size(); ++i)
        x0(Index(i)) = names[i] == "lambda1" ? gen.uniform(-2.0, -0.2) : gen.uniform(-1.0, 1.0);
      NewtonResult r = newton_solve(system, x0, std::vector<bool>(names.size(), false));
      if (!r.converged) continue;
      std::map<std::string, double> v;
      for (std::size_t i = 0; i < names.size(); ++i) v[names[i]] = r.x(Index(i));
      ResidualReport rep = first_ansatz_residuals(m, v["c0"], v["c1"], v["lambda1"], coefficients_of(v, m));
      if (!rep.pass()) continue;
      ++good;
      // the block equations need lambda1 < 0; the four reduced equations do not
      if (v["lambda1"] >= 0.0) {
        ++positive_lambda;
        continue;
      }
      verified += check_equations(instantiate(t, v)).pass();
    }
    ResidualReport trivial = first_ansatz_residuals(m, 1.0, 1.0, -(5.0 - m) / m, std::vector<double>(m + 1, 0.0));
    double trivial_max = 0.0;
    for (const auto& e : trivial.entries()) trivial_max = std::max(trivial_max, e.value);
    bool trivial_full = check_equations(instantiate(t)).pass();
    ok = ok && good >= 3 && verified == good - positive_lambda && trivial_max == 0.0 && trivial_full;
    detail += " M=" + std::to_string(m) + ": " + std::to_string(good) + "/10 converged, " + std::to_string(verified) + "/" +
              std::to_string(good - positive_lambda) + " with lambda1 < 0 pass the full equations, trivial flux " +
              fmt("%.3g", trivial_max) + ";";
  }
  return {ok, detail};
}

Outcome criterion11() {
  Gen gen(11);
  SugraTemplate t = load_sugra_template(support::config_path("ads4_su3so3_s1.toml"));
  std::vector<std::string> names = t.parameter_names();
  // reduced system: 4(1+c0) = -5 l1 (1+c1), 2(1-c0) = a2+b2+d2, 2(1-c1) l1 = -a2-b2+d2, 0 = -a2+b2-d2
  auto reduced = [](const std::map<std::string, double>& v) {
    double a2 = v.at("a") * v.at("a"), b2 = v.at("b") * v.at("b"), d2 = v.at("d") * v.at("d");
    Vec r(4);
    r << 4.0 * (1.0 + v.at("c0")) + 5.0 * v.at("lambda1") * (1.0 + v.at("c1")), 2.0 * (1.0 - v.at("c0")) - (a2 + b2 + d2),
        2.0 * (1.0 - v.at("c1")) * v.at("lambda1") - (-a2 - b2 + d2), 0.0 - (-a2 + b2 - d2);
    return r;
  };
  double mismatch = 0.0;
  for (int k = 0; k < 50; ++k) {
    std::map<std::string, double> v;
    for (const auto& n : names) v[n] = n == "lambda1" ? gen.uniform(-2.0, -0.1) : gen.uniform();
    mismatch = std::max(mismatch, (second_ansatz_system(instantiate(t, v)) - reduced(v)).cwiseAbs().maxCoeff());
  }
  auto system = template_system(t);
  int found = 0;
  for (int s = 0; s < 10; ++s) {
    Vec x0(static_cast<Index>(names.size()));
    for (std::size_t i = 0; i < names.size(); ++i)
      x0(Index(i)) = names[i] == "lambda1" ? gen.uniform(-2.0, -0.2) : gen.uniform();
    NewtonResult r = newton_solve(system, x0, std::vector<bool>(names.size(), false));
    if (!r.converged) continue;
    std::map<std::string, double> v;
    for (std::size_t i = 0; i < names.size(); ++i) v[names[i]] = r.x(Index(i));
    if (reduced(v).cwiseAbs().maxCoeff() < 1e-10) ++found;
  }
  bool shipped = check_equations(instantiate(t)).pass();
  bool ok = mismatch < 1e-12 && found > 0 && shipped;
  return {ok, "system vs reduced " + fmt("%.3g", mismatch) + ", " + std::to_string(found) +
                  "/10 Newton points on the reduced equations, shipped point " + (shipped ? "passes" : "fails")};
}

Outcome criterion12() {
  AlgebraConfig cfg = load_algebra_config(support::config_path("su2_double.toml"));
  BuiltAlgebra b = build(cfg.algebra);
  GeneralizedMetric v0 = vplus_of_double(*b.dbl);
  IsotropicSubalgebra s = s_of_double(*b.dbl);
  FlowResult flow = ricci_flow(b.algebra, v0, Divergence::zero(b.algebra.dim()), 1.0, 1e-3);
  double worst = 0.0;
  for (const auto& st : flow.states)
    for (const auto& e : admissible_check(b.algebra, st.metric, s).entries()) worst = std::max(worst, e.value);
  double moved = (flow.states.back().metric.projector_plus() - flow.states.front().metric.projector_plus()).norm();
  bool ok = !flow.halted && worst < 1e-6 && flow.states.back().t > 1.0 - 1e-9 && moved > 1e-6;
  return {ok, "max admissibility residual " + fmt("%.3g", worst) + " over " + std::to_string(flow.states.size()) +
                  " states, projector moved by " + fmt("%.3g", moved)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3,  criterion4,
                                                          criterion5, criterion6, criterion7,  criterion8,
                                                          criterion9, criterion10, criterion11, criterion12};
  bool all = true;
  for (int i = 1; i <= 12; ++i) {
    if (only && i != only) continue;
    Outcome o;
    try {
      o = criteria[static_cast<std::size_t>(i - 1)]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << i << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << "\n";
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
