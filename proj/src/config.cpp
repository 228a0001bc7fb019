#include "gengeom/config.hpp"

#include <toml.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace gengeom {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::config, msg); }

toml::table parse_text(const std::string& text, const std::string& source) {
  try {
    return toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    fail(os.str());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void check_keys(const toml::table& t, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : t)
    if (!allowed.count(std::string(k.str()))) fail(where + ": unknown key '" + std::string(k.str()) + "'");
}

double number(const toml::node& n, const std::string& where) {
  if (auto i = n.as_integer()) return static_cast<double>(i->get());
  if (auto f = n.as_floating_point()) return f->get();
  fail(where + ": expected a number");
}

int integer(const toml::node& n, const std::string& where) {
  if (auto i = n.as_integer()) return static_cast<int>(i->get());
  fail(where + ": expected an integer");
}

std::string string(const toml::node& n, const std::string& where) {
  if (auto s = n.as_string()) return s->get();
  fail(where + ": expected a string");
}

const toml::table& table(const toml::node& n, const std::string& where) {
  if (auto t = n.as_table()) return *t;
  fail(where + ": expected a table");
}

const toml::array& array(const toml::node& n, const std::string& where) {
  if (auto a = n.as_array()) return *a;
  fail(where + ": expected an array");
}

Vec vector_of(const toml::node& n, const std::string& where) {
  const auto& a = array(n, where);
  Vec v(static_cast<Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Index>(i)) = number(a[i], where + "[" + std::to_string(i) + "]");
  return v;
}

// Array of equal-length numeric arrays, one per row.
Mat rows_of(const toml::node& n, const std::string& where) {
  const auto& a = array(n, where);
  if (a.empty()) fail(where + ": empty matrix");
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < a.size(); ++i) rows.push_back(vector_of(a[i], where + "[" + std::to_string(i) + "]"));
  Mat m(static_cast<Index>(rows.size()), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) fail(where + ": ragged matrix");
    m.row(static_cast<Index>(i)) = rows[i].transpose();
  }
  return m;
}

ParamRef param_ref(const toml::node& n, const std::string& where) {
  if (n.is_string()) return string(n, where);
  return number(n, where);
}

const std::set<std::string> kAlgebraKeys = {"type", "p", "q", "n", "metric", "involution", "lambda", "c", "base", "parts"};

AlgebraSpec algebra_spec(const toml::table& t, const std::string& where, bool own_lambda,
                         const std::set<std::string>& extra = {}) {
  std::set<std::string> allowed = kAlgebraKeys;
  allowed.insert(extra.begin(), extra.end());
  check_keys(t, allowed, where);
  AlgebraSpec s;
  const toml::node* type = t.get("type");
  if (!type) fail(where + ": missing 'type'");
  s.type = string(*type, where + ".type");
  if (auto n = t.get("p")) s.p = integer(*n, where + ".p");
  if (auto n = t.get("q")) s.q = integer(*n, where + ".q");
  if (auto n = t.get("n")) s.n = integer(*n, where + ".n");
  if (auto n = t.get("involution")) s.involution = string(*n, where + ".involution");
  if (auto n = t.get("metric")) s.metric = rows_of(*n, where + ".metric");
  if (own_lambda)
    if (auto n = t.get("lambda")) s.lambda = number(*n, where + ".lambda");
  if (s.type == "double") {
    if (auto n = t.get("c")) s.c = number(*n, where + ".c");
    const toml::node* base = t.get("base");
    if (!base) fail(where + ": a double needs a [base] table");
    s.base = std::make_shared<AlgebraSpec>(algebra_spec(table(*base, where + ".base"), where + ".base", true));
  } else if (s.type == "sum") {
    const toml::node* parts = t.get("parts");
    if (!parts) fail(where + ": a sum needs 'parts'");
    const auto& arr = array(*parts, where + ".parts");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string w = where + ".parts[" + std::to_string(i) + "]";
      s.parts.push_back(algebra_spec(table(arr[i], w), w, true));
    }
  } else if (s.type == "abelian" && s.n == 0 && s.metric.size()) {
    s.n = static_cast<int>(s.metric.rows());
  }
  return s;
}

}  // namespace

ConfigKind detect_config_kind(const std::string& path) {
  toml::table t = parse_text(read_file(path), path);
  if (t.contains("block") || t.contains("eta")) return ConfigKind::sugra;
  if (t.contains("algebra")) return ConfigKind::algebra;
  fail(path + ": neither an [algebra] table nor [[block]] entries");
}

AlgebraConfig parse_algebra_config(const std::string& text, const std::string& source) {
  toml::table root = parse_text(text, source);
  check_keys(root, {"algebra", "metric", "divergence", "flow", "tolerance"}, source);
  AlgebraConfig cfg;
  const toml::node* alg = root.get("algebra");
  if (!alg) fail(source + ": missing [algebra]");
  cfg.algebra = algebra_spec(table(*alg, "algebra"), "algebra", true);
  cfg.metric_kind = cfg.algebra.type == "double" ? "double" : "none";
  if (auto m = root.get("metric")) {
    const auto& mt = table(*m, "metric");
    check_keys(mt, {"kind", "span_plus", "span_minus"}, "metric");
    if (auto k = mt.get("kind")) cfg.metric_kind = string(*k, "metric.kind");
    if (cfg.metric_kind != "double" && cfg.metric_kind != "explicit" && cfg.metric_kind != "none")
      fail("metric.kind must be double, explicit or none");
    // columns are listed one per inner array
    if (auto sp = mt.get("span_plus")) cfg.span_plus = rows_of(*sp, "metric.span_plus").transpose();
    if (auto sm = mt.get("span_minus")) cfg.span_minus = Mat(rows_of(*sm, "metric.span_minus").transpose());
    if (cfg.metric_kind == "explicit" && cfg.span_plus.size() == 0) fail("metric.kind = explicit needs span_plus");
  }
  if (auto d = root.get("divergence")) {
    const auto& dt = table(*d, "divergence");
    check_keys(dt, {"eps"}, "divergence");
    if (auto e = dt.get("eps")) cfg.eps = vector_of(*e, "divergence.eps");
  }
  if (auto f = root.get("flow")) {
    const auto& ft = table(*f, "flow");
    check_keys(ft, {"t_end", "dt"}, "flow");
    if (auto x = ft.get("t_end")) cfg.flow_t_end = number(*x, "flow.t_end");
    if (auto x = ft.get("dt")) cfg.flow_dt = number(*x, "flow.dt");
  }
  if (auto tol = root.get("tolerance")) cfg.tolerance = number(*tol, "tolerance");
  return cfg;
}

AlgebraConfig load_algebra_config(const std::string& path) { return parse_algebra_config(read_file(path), path); }

SugraTemplate parse_sugra_template(const std::string& text, const std::string& source) {
  toml::table root = parse_text(text, source);
  check_keys(root, {"params", "eta", "block", "abelian", "flux", "tolerance"}, source);
  SugraTemplate t;
  if (auto tol = root.get("tolerance")) t.tolerance = number(*tol, "tolerance");
  if (auto p = root.get("params"))
    for (const auto& [k, v] : table(*p, "params")) t.params[std::string(k.str())] = number(v, "params." + std::string(k.str()));
  if (auto e = root.get("eta")) {
    const auto& et = table(*e, "eta");
    check_keys(et, {"m", "c0"}, "eta");
    EtaTemplate eta;
    if (auto m = et.get("m")) eta.m = integer(*m, "eta.m");
    if (auto c = et.get("c0")) eta.c0 = param_ref(*c, "eta.c0");
    t.eta = eta;
  }
  if (auto b = root.get("block")) {
    const auto& arr = array(*b, "block");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string w = "block[" + std::to_string(i) + "]";
      const auto& bt = table(arr[i], w);
      BlockTemplate blk;
      blk.algebra = algebra_spec(bt, w, false, {"name"});
      if (auto n = bt.get("name")) blk.name = string(*n, w + ".name");
      if (auto n = bt.get("lambda")) blk.lambda = param_ref(*n, w + ".lambda");
      if (auto n = bt.get("c")) blk.c = param_ref(*n, w + ".c");
      t.blocks.push_back(std::move(blk));
    }
  }
  if (t.blocks.empty()) fail(source + ": at least one [[block]] is required");
  if (auto a = root.get("abelian")) {
    const auto& at = table(*a, "abelian");
    check_keys(at, {"dim", "metric"}, "abelian");
    AbelianSpec ab;
    if (auto m = at.get("metric")) {
      ab.metric = rows_of(*m, "abelian.metric");
    } else {
      const toml::node* d = at.get("dim");
      if (!d) fail("abelian: give 'dim' or 'metric'");
      int dim = integer(*d, "abelian.dim");
      if (dim < 1) fail("abelian.dim must be positive");
      ab.metric = Mat::Identity(dim, dim);
    }
    t.abelian = ab;
  }
  if (auto f = root.get("flux")) {
    const auto& ft = table(*f, "flux");
    check_keys(ft, {"kind", "block", "coefficients", "products", "terms"}, "flux");
    std::string kind = ft.get("kind") ? string(*ft.get("kind"), "flux.kind") : "none";
    if (kind == "none") {
      t.flux.kind = FluxAnsatz::Kind::none;
    } else if (kind == "polynomial") {
      t.flux.kind = FluxAnsatz::Kind::polynomial;
      if (auto b = ft.get("block")) t.flux.block = integer(*b, "flux.block");
      const toml::node* c = ft.get("coefficients");
      if (!c) fail("flux: polynomial needs 'coefficients'");
      const auto& arr = array(*c, "flux.coefficients");
      for (std::size_t i = 0; i < arr.size(); ++i)
        t.flux.coefficients.push_back(param_ref(arr[i], "flux.coefficients[" + std::to_string(i) + "]"));
    } else if (kind == "volume-products") {
      t.flux.kind = FluxAnsatz::Kind::volume_products;
      const toml::node* p = ft.get("products");
      if (!p) fail("flux: volume-products needs 'products'");
      const auto& arr = array(*p, "flux.products");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string w = "flux.products[" + std::to_string(i) + "]";
        const auto& pt = table(arr[i], w);
        check_keys(pt, {"h", "f"}, w);
        if (!pt.get("h") || !pt.get("f")) fail(w + ": needs 'h' and 'f'");
        std::vector<int> h;
        const auto& ha = array(*pt.get("h"), w + ".h");
        for (std::size_t j = 0; j < ha.size(); ++j) h.push_back(integer(ha[j], w + ".h"));
        t.flux.products.emplace_back(h, param_ref(*pt.get("f"), w + ".f"));
      }
    } else if (kind == "raw") {
      t.flux.kind = FluxAnsatz::Kind::raw;
      t.flux.raw = Spinor::Zero(Index(1) << kSugraBudget);
      const toml::node* terms = ft.get("terms");
      if (!terms) fail("flux: raw needs 'terms'");
      const auto& arr = array(*terms, "flux.terms");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string w = "flux.terms[" + std::to_string(i) + "]";
        const auto& tt = table(arr[i], w);
        check_keys(tt, {"mask", "re", "im"}, w);
        if (!tt.get("mask")) fail(w + ": needs 'mask'");
        int mask = integer(*tt.get("mask"), w + ".mask");
        if (mask < 0 || mask >= (1 << kSugraBudget)) fail(w + ".mask out of range");
        double re = tt.get("re") ? number(*tt.get("re"), w + ".re") : 0.0;
        double im = tt.get("im") ? number(*tt.get("im"), w + ".im") : 0.0;
        t.flux.raw(mask) += cplx(re, im);
      }
    } else {
      fail("flux.kind must be none, polynomial, volume-products or raw");
    }
  }
  return t;
}

SugraTemplate load_sugra_template(const std::string& path) { return parse_sugra_template(read_file(path), path); }

}  // namespace gengeom
