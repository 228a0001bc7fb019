#include "gengeom/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

namespace gengeom {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json number_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  double r = std::strtod(format_number(x).c_str(), nullptr);
  if (r == 0.0) r = 0.0;  // no negative zero
  return r;
}

Json matrix_json(const Mat& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(number_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Json vector_json(const Vec& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number_json(v(i)));
  return out;
}

Json spinor_json(const Spinor& f, double tol) {
  Json out = Json::array();
  for (Index i = 0; i < f.size(); ++i)
    if (std::abs(f(i)) > tol) out.push_back(Json::array({i, number_json(f(i).real()), number_json(f(i).imag())}));
  return out;
}

Spinor spinor_from_json(const Json& j, int rank) {
  Spinor f = Spinor::Zero(Index(1) << rank);
  if (!j.is_array()) throw Error(ErrorKind::config, "spinor must be an array of [mask, re, im]");
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3) throw Error(ErrorKind::config, "spinor entries are [mask, re, im]");
    long long mask = t[0].get<long long>();
    if (mask < 0 || mask >= f.size()) throw Error(ErrorKind::config, "spinor mask out of range");
    f(static_cast<Index>(mask)) += cplx(t[1].get<double>(), t[2].get<double>());
  }
  return f;
}

Json report_json(const ResidualReport& r) {
  Json res = Json::object(), tols = Json::object(), failing = Json::array();
  for (const auto& e : r.entries()) {
    res[e.name] = number_json(e.value);
    if (e.tolerance != r.tolerance()) tols[e.name] = number_json(e.tolerance);
    if (!e.pass()) failing.push_back(e.name);
  }
  Json out;
  out["residuals"] = res;
  out["tolerance"] = number_json(r.tolerance());
  if (!tols.empty()) out["tolerances"] = tols;
  out["failing"] = failing;
  out["pass"] = r.pass();
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream os;
  os << "# scan-csv v1\n";
  std::vector<std::string> params, names;
  if (!rows.empty())
    for (const auto& kv : rows.front().params) params.push_back(kv.first);
  std::set<std::string> seen;
  for (const auto& r : rows)
    if (r.report)
      for (const auto& e : r.report->entries())
        if (seen.insert(e.name).second) names.push_back(e.name);
  for (const auto& p : params) os << csv_field(p) << ",";
  os << "pass,error";
  for (const auto& n : names) os << "," << csv_field(n);
  os << "\n";
  for (const auto& r : rows) {
    for (const auto& p : params) os << format_number(r.params.at(p)) << ",";
    os << (r.report && r.report->pass() ? "true" : "false") << "," << csv_field(r.error);
    for (const auto& n : names) {
      os << ",";
      if (r.report && r.report->has(n)) os << format_number(r.report->value(n));
    }
    os << "\n";
  }
  return os.str();
}

std::string flow_csv(const FlowResult& flow, const std::vector<double>& admissibility) {
  const bool adm = !admissibility.empty();
  if (adm && admissibility.size() != flow.states.size())
    throw Error(ErrorKind::invalid_dimension, "one admissibility value per flow state");
  std::ostringstream os;
  os << "# flow-csv v1\n";
  os << "t,action,gric_norm" << (adm ? ",admissibility" : "") << "\n";
  for (std::size_t i = 0; i < flow.states.size(); ++i) {
    const auto& s = flow.states[i];
    os << format_number(s.t) << "," << format_number(s.action) << "," << format_number(s.norm_gric);
    if (adm) os << "," << format_number(admissibility[i]);
    os << "\n";
  }
  return os.str();
}

}  // namespace gengeom
