#pragma once

#include <string>
#include <vector>

namespace gengeom {

struct ResidualEntry {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass() const;
};

class ResidualReport {
 public:
  explicit ResidualReport(double tolerance = 1e-8) : tolerance_(tolerance) {}

  void add(const std::string& name, double value);
  void add(const std::string& name, double value, double tolerance);
  // Appends every entry of other, prefixing names.
  void merge(const ResidualReport& other, const std::string& prefix = "");

  bool pass() const;
  bool has(const std::string& name) const;
  double value(const std::string& name) const;
  double tolerance() const { return tolerance_; }
  const std::vector<ResidualEntry>& entries() const { return entries_; }

 private:
  double tolerance_;
  std::vector<ResidualEntry> entries_;
};

}  // namespace gengeom
