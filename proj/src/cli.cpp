#include "gengeom/cli.hpp"

#include "gengeom/config.hpp"
#include "gengeom/curvature.hpp"
#include "gengeom/dirac.hpp"
#include "gengeom/genmetric.hpp"
#include "gengeom/io.hpp"
#include "gengeom/liealg.hpp"
#include "gengeom/sugra.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

namespace gengeom::cli {

namespace {

struct Options {
  std::string config;
  std::string output;
  std::vector<std::string> params;
  std::vector<std::string> pins;
  std::vector<std::string> grids;
  std::string seed;
  unsigned long rng_seed = 1;
  int threads = 0;
};

struct Emitter {
  std::ostream& out;
  std::ostream& err;
  const Options& opt;

  void write(const std::string& text) const {
    if (opt.output.empty()) {
      out << text;
      return;
    }
    std::ofstream f(opt.output);
    if (!f) throw Error(ErrorKind::config, "cannot write '" + opt.output + "'");
    f << text;
  }
};

std::pair<std::string, double> key_value(const std::string& s, const char* flag) {
  auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::config, std::string(flag) + " expects name=value");
  std::string v = s.substr(eq + 1);
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return {s.substr(0, eq), x};
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::config, std::string(flag) + ": '" + v + "' is not a number");
  }
}

std::vector<double> number_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::config, what + ": '" + item + "' is not a number");
    }
  }
  return out;
}

// name=lo:hi:steps or name=v1,v2,...
std::pair<std::string, std::vector<double>> grid_axis(const std::string& s) {
  auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::config, "--grid expects name=lo:hi:steps or name=v1,v2");
  std::string name = s.substr(0, eq), spec = s.substr(eq + 1);
  if (spec.find(':') == std::string::npos) return {name, number_list(spec, "--grid")};
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(number_list(item, "--grid").at(0));
  if (parts.size() != 3) throw Error(ErrorKind::config, "--grid range must be lo:hi:steps");
  const double steps = parts[2];
  if (steps < 0 || steps != std::floor(steps)) throw Error(ErrorKind::config, "--grid steps must be a nonnegative integer");
  std::vector<double> values;
  const int n = static_cast<int>(steps);
  for (int i = 0; i < n; ++i) values.push_back(n == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * i / (n - 1));
  return {name, values};
}

std::map<std::string, double> param_map(const std::vector<std::string>& items, const char* flag) {
  std::map<std::string, double> out;
  for (const auto& s : items) {
    auto [k, v] = key_value(s, flag);
    out.insert_or_assign(k, v);
  }
  return out;
}

struct AlgebraSetup {
  AlgebraConfig cfg;
  BuiltAlgebra built;
  std::optional<GeneralizedMetric> metric;
  Divergence div;
};

AlgebraSetup load_algebra(const Options& opt) {
  AlgebraSetup s{load_algebra_config(opt.config), {}, std::nullopt, {}};
  s.built = build(s.cfg.algebra);
  const Index n = s.built.algebra.dim();
  if (s.cfg.metric_kind == "double") {
    if (!s.built.dbl) throw Error(ErrorKind::config, "metric.kind = double needs a double algebra");
    s.metric = vplus_of_double(*s.built.dbl);
  } else if (s.cfg.metric_kind == "explicit") {
    s.metric = GeneralizedMetric(s.built.algebra.metric(), s.cfg.span_plus, s.cfg.span_minus);
  }
  s.div = Divergence::zero(n);
  if (s.cfg.eps.size()) {
    if (s.cfg.eps.size() != n) throw Error(ErrorKind::invalid_dimension, "divergence.eps has the wrong length");
    s.div.eps = s.cfg.eps;
  }
  return s;
}

const GeneralizedMetric& require_metric(const AlgebraSetup& s) {
  if (!s.metric) throw Error(ErrorKind::config, "this command needs a [metric]");
  return *s.metric;
}

// max |GRic - ((c - 1) / 2) K| on a1 for the standard V+ of a double
std::optional<double> double_lemma_residual(const AlgebraSetup& s, const Mat& ric) {
  if (!s.built.dbl || !s.built.dbl->grading || s.cfg.metric_kind != "double" || s.div.eps.squaredNorm() != 0.0)
    return std::nullopt;
  const auto& d = *s.built.dbl;
  const auto& i1 = d.grading->indices1;
  Mat k = killing_form(d.base);
  double worst = 0.0;
  for (std::size_t a = 0; a < i1.size(); ++a)
    for (std::size_t b = 0; b < i1.size(); ++b)
      worst = std::max(worst, std::abs(ric(static_cast<Index>(a), static_cast<Index>(b)) - 0.5 * (d.c - 1.0) * k(i1[a], i1[b])));
  return worst;
}

int cmd_algebra_check(const Emitter& em) {
  AlgebraSetup s = load_algebra(em.opt);
  ResidualReport rep = check(s.built.algebra);
  if (s.built.splitting && !s.built.dbl) rep.merge(grading_check(s.built.algebra, *s.built.splitting), "grading.");
  if (s.built.dbl) {
    rep.merge(double_check(*s.built.dbl), "double.");
    if (s.built.dbl->grading) rep.merge(grading_check(s.built.dbl->base, *s.built.dbl->grading), "grading.");
  }
  Json j;
  j["dim"] = s.built.algebra.dim();
  j["condition_number"] = number_json(s.built.algebra.condition_number());
  j["report"] = report_json(rep);
  em.write(dump(j));
  em.err << "algebra check: dim " << s.built.algebra.dim() << ", " << (rep.pass() ? "pass" : "FAIL") << "\n";
  return rep.pass() ? kPass : kResidualFailure;
}

int cmd_curvature_gric(const Emitter& em) {
  AlgebraSetup s = load_algebra(em.opt);
  const GeneralizedMetric& v = require_metric(s);
  Mat ric = gric(s.built.algebra, v, s.div);
  ResidualReport rep = metric_check(v);
  rep.merge(gric_flip_check(s.built.algebra, v, s.div));
  if (auto lemma = double_lemma_residual(s, ric)) rep.add("double_lemma", *lemma, s.cfg.tolerance);
  Json j;
  j["gric"] = matrix_json(ric);
  j["rank"] = v.rank();
  j["report"] = report_json(rep);
  em.write(dump(j));
  em.err << "curvature gric: " << ric.rows() << "x" << ric.cols() << ", " << (rep.pass() ? "pass" : "FAIL") << "\n";
  return rep.pass() ? kPass : kResidualFailure;
}

int cmd_curvature_scalar(const Emitter& em) {
  AlgebraSetup s = load_algebra(em.opt);
  const GeneralizedMetric& v = require_metric(s);
  double scal = scalar_curvature(s.built.algebra, v, s.div);
  ResidualReport rep = metric_check(v);
  Json j;
  j["scalar"] = number_json(scal);
  j["action"] = number_json(action_value(s.built.algebra, v));
  j["background"] = report_json(background_equations(s.built.algebra, v, s.div));
  j["report"] = report_json(rep);
  em.write(dump(j));
  em.err << "curvature scalar: " << format_number(scal) << "\n";
  return rep.pass() ? kPass : kResidualFailure;
}

int cmd_curvature_flow(const Emitter& em) {
  AlgebraSetup s = load_algebra(em.opt);
  const GeneralizedMetric& v = require_metric(s);
  FlowResult flow = ricci_flow(s.built.algebra, v, s.div, s.cfg.flow_t_end, s.cfg.flow_dt);
  std::vector<double> adm;
  if (s.built.dbl && s.built.dbl->grading) {
    IsotropicSubalgebra sub = s_of_double(*s.built.dbl);
    for (const auto& st : flow.states) {
      double worst = 0.0;
      for (const auto& e : admissible_check(s.built.algebra, st.metric, sub).entries()) worst = std::max(worst, e.value);
      adm.push_back(worst);
    }
  }
  em.write(flow_csv(flow, adm));
  if (flow.halted) {
    em.err << "curvature flow: " << flow.diagnostic << "\n";
    return kResidualFailure;
  }
  em.err << "curvature flow: " << flow.states.size() << " states\n";
  return kPass;
}

int cmd_dirac_check(const Emitter& em) {
  AlgebraSetup s = load_algebra(em.opt);
  if (!s.built.dbl) throw Error(ErrorKind::config, "dirac check needs a double algebra");
  const DoubleAlgebra& d = *s.built.dbl;
  ResidualReport rep = d0_on_invariants_check(d);
  const int n = static_cast<int>(d.base.dim());
  if (n <= kMaxDenseGenerators) {
    Mat ce = materialize(n, d_ce_operator(d.base));
    rep.add("d_ce_squared", (ce * ce).cwiseAbs().maxCoeff());
  }
  Json j;
  j["invariant_forms"] = d.grading ? invariant_a1_forms(d.base, *d.grading).size() : 0;
  j["report"] = report_json(rep);
  em.write(dump(j));
  em.err << "dirac check: " << (rep.pass() ? "pass" : "FAIL") << "\n";
  return rep.pass() ? kPass : kResidualFailure;
}

ResidualReport full_report(const SugraConfig& cfg, Spinor* flux) {
  SugraContext ctx = assemble(cfg);
  Spinor f = flux_spinor(ctx);
  ResidualReport rep = check_equations(ctx, f);
  if (cfg.flux.kind == FluxAnsatz::Kind::volume_products) {
    rep.merge(second_ansatz_residuals(cfg), "ansatz.");
  } else if (cfg.flux.kind == FluxAnsatz::Kind::polynomial) {
    Vec r = ansatz_system(cfg);
    for (Index i = 0; i < r.size(); ++i) rep.add("ansatz.r" + std::to_string(i + 1), std::abs(r(i)), cfg.tolerance);
  }
  if (flux) *flux = f;
  return rep;
}

Json params_json(const std::map<std::string, double>& p) {
  Json j = Json::object();
  for (const auto& [k, v] : p) j[k] = number_json(v);
  return j;
}

int cmd_sugra_verify(const Emitter& em) {
  SugraTemplate t = load_sugra_template(em.opt.config);
  std::map<std::string, double> values = t.params;
  for (const auto& [k, v] : param_map(em.opt.params, "--param")) {
    if (!t.params.count(k)) throw Error(ErrorKind::config, "--param: '" + k + "' is not declared");
    values[k] = v;
  }
  SugraConfig cfg = instantiate(t, values);
  Spinor f;
  ResidualReport rep = full_report(cfg, &f);
  Json j;
  j["params"] = params_json(values);
  j["flux"] = spinor_json(f, 1e-14);
  j["report"] = report_json(rep);
  em.write(dump(j));
  em.err << "sugra verify: " << (rep.pass() ? "pass" : "FAIL") << "\n";
  return rep.pass() ? kPass : kResidualFailure;
}

int cmd_sugra_solve(const Emitter& em) {
  SugraTemplate t = load_sugra_template(em.opt.config);
  const std::vector<std::string> names = t.parameter_names();
  if (names.empty()) throw Error(ErrorKind::config, "sugra solve needs declared [params]");
  const Index n = static_cast<Index>(names.size());
  Vec base(n);
  for (Index i = 0; i < n; ++i) base(i) = t.params.at(names[static_cast<std::size_t>(i)]);
  std::vector<bool> pinned(names.size(), false);
  for (const auto& [k, v] : param_map(em.opt.pins, "--pin")) {
    auto it = std::find(names.begin(), names.end(), k);
    if (it == names.end()) throw Error(ErrorKind::config, "--pin: '" + k + "' is not declared");
    const auto i = static_cast<std::size_t>(it - names.begin());
    pinned[i] = true;
    base(static_cast<Index>(i)) = v;
  }
  std::vector<Vec> seeds;
  const std::string& seed = em.opt.seed;
  if (seed.empty()) {
    seeds.push_back(base);
  } else if (seed.rfind("random:", 0) == 0) {
    int count = 0;
    try {
      count = std::stoi(seed.substr(7));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::config, "--seed random:N needs an integer N");
    }
    if (count < 1) throw Error(ErrorKind::config, "--seed random:N needs N >= 1");
    std::mt19937_64 rng(em.opt.rng_seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int k = 0; k < count; ++k) {
      Vec x = base;
      for (Index i = 0; i < n; ++i)
        if (!pinned[static_cast<std::size_t>(i)]) x(i) += unit(rng);
      seeds.push_back(x);
    }
  } else {
    std::vector<double> v = number_list(seed, "--seed");
    if (static_cast<Index>(v.size()) != n)
      throw Error(ErrorKind::config, "--seed vector needs " + std::to_string(n) + " values in parameter order");
    Vec x = Eigen::Map<Vec>(v.data(), n);
    for (Index i = 0; i < n; ++i)
      if (pinned[static_cast<std::size_t>(i)]) x(i) = base(i);
    seeds.push_back(x);
  }
  auto system = template_system(t);
  Json sols = Json::array();
  bool any = false;
  for (const Vec& x0 : seeds) {
    NewtonResult r = newton_solve(system, x0, pinned);
    Json s;
    std::map<std::string, double> vals;
    for (Index i = 0; i < n; ++i) vals[names[static_cast<std::size_t>(i)]] = r.x(i);
    s["params"] = params_json(vals);
    s["seed"] = vector_json(x0);
    s["converged"] = r.converged;
    s["iterations"] = r.iterations;
    s["residual_norm"] = number_json(r.residual_norm);
    if (!r.diagnostic.empty()) s["diagnostic"] = r.diagnostic;
    if (r.converged) {
      try {
        ResidualReport rep = full_report(instantiate(t, vals), nullptr);
        s["report"] = report_json(rep);
        any = any || rep.pass();
      } catch (const Error& e) {
        s["error"] = e.what();
      }
    }
    sols.push_back(std::move(s));
  }
  Json j;
  j["parameters"] = names;
  j["solutions"] = sols;
  em.write(dump(j));
  em.err << "sugra solve: " << (any ? "found a verified solution" : "no verified solution") << "\n";
  return any ? kPass : kResidualFailure;
}

int cmd_sugra_scan(const Emitter& em) {
  SugraTemplate t = load_sugra_template(em.opt.config);
  for (const auto& [k, v] : param_map(em.opt.params, "--param")) {
    if (!t.params.count(k)) throw Error(ErrorKind::config, "--param: '" + k + "' is not declared");
    t.params[k] = v;
  }
  ScanGrid grid;
  for (const auto& g : em.opt.grids) grid.push_back(grid_axis(g));
  std::vector<ScanRow> rows = scan(t, grid, em.opt.threads);
  em.write(scan_csv(rows));
  std::size_t passed = 0;
  for (const auto& r : rows) passed += r.report && r.report->pass();
  em.err << "sugra scan: " << passed << "/" << rows.size() << " rows pass\n";
  return passed == rows.size() ? kPass : kResidualFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Quadratic Lie algebra geometry: generalized curvature, spinors and SUGRA residuals", "gengeom"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  std::function<int(const Emitter&)> action;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, int (*fn)(const Emitter&)) {
    CLI::App* c = parent->add_subcommand(name, desc);
    c->add_option("config", opt.config, "TOML configuration")->required()->check(CLI::ExistingFile);
    c->add_option("-o,--output", opt.output, "write the result here instead of stdout");
    c->callback([&action, fn] { action = fn; });
    return c;
  };

  CLI::App* algebra = app.add_subcommand("algebra", "structure checks")->require_subcommand(1);
  leaf(algebra, "check", "Jacobi, invariance, grading and double checks", cmd_algebra_check);
  CLI::App* curvature = app.add_subcommand("curvature", "generalized curvature")->require_subcommand(1);
  leaf(curvature, "gric", "generalized Ricci tensor", cmd_curvature_gric);
  leaf(curvature, "scalar", "generalized scalar curvature", cmd_curvature_scalar);
  leaf(curvature, "flow", "generalized Ricci flow trajectory (CSV)", cmd_curvature_flow);
  CLI::App* dirac = app.add_subcommand("dirac", "Dirac generating operator")->require_subcommand(1);
  leaf(dirac, "check", "D0 on invariant a1-forms", cmd_dirac_check);
  CLI::App* sugra = app.add_subcommand("sugra", "algebraic supergravity equations")->require_subcommand(1);
  CLI::App* verify = leaf(sugra, "verify", "evaluate all residuals (JSON)", cmd_sugra_verify);
  verify->add_option("--param", opt.params, "override a declared parameter, name=value");
  CLI::App* solve = leaf(sugra, "solve", "Newton solve of the ansatz system (JSON)", cmd_sugra_solve);
  solve->add_option("--pin", opt.pins, "hold a parameter fixed, name=value");
  solve->add_option("--seed", opt.seed, "comma-separated start vector in parameter order, or random:N");
  solve->add_option("--rng-seed", opt.rng_seed, "generator seed for random:N");
  CLI::App* scan_cmd = leaf(sugra, "scan", "grid scan (CSV)", cmd_sugra_scan);
  scan_cmd->add_option("--grid", opt.grids, "name=lo:hi:steps or name=v1,v2,...")->required();
  scan_cmd->add_option("--param", opt.params, "override a declared parameter, name=value");
  scan_cmd->add_option("--threads", opt.threads, "worker threads (default: all cores)")->check(CLI::NonNegativeNumber);

  std::vector<const char*> argv{"gengeom"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }
  Emitter em{out, err, opt};
  try {
    return action(em);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::convergence ? kResidualFailure : kUsage;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace gengeom::cli
