#include "gengeom/core.hpp"
#include "gengeom/report.hpp"

#include <cmath>

namespace gengeom {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_dimension: return "invalid-dimension";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::signature: return "signature";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::parity: return "parity";
    case ErrorKind::grading: return "grading";
    case ErrorKind::budget: return "budget";
    case ErrorKind::config: return "config";
    case ErrorKind::convergence: return "convergence";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

double snap_half(double x, double tol) {
  double r = std::round(2.0 * x) / 2.0;
  return std::abs(x - r) < tol ? r : x;
}

bool ResidualEntry::pass() const { return std::isfinite(value) && value < tolerance; }

void ResidualReport::add(const std::string& name, double value) { add(name, value, tolerance_); }

void ResidualReport::add(const std::string& name, double value, double tolerance) {
  for (auto& e : entries_) {
    if (e.name == name) {
      e.value = value;
      e.tolerance = tolerance;
      return;
    }
  }
  entries_.push_back({name, value, tolerance});
}

void ResidualReport::merge(const ResidualReport& other, const std::string& prefix) {
  for (const auto& e : other.entries()) add(prefix + e.name, e.value, e.tolerance);
}

bool ResidualReport::pass() const {
  for (const auto& e : entries_)
    if (!e.pass()) return false;
  return true;
}

bool ResidualReport::has(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return true;
  return false;
}

double ResidualReport::value(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return e.value;
  throw Error(ErrorKind::invalid_argument, "no residual named " + name);
}

}  // namespace gengeom
