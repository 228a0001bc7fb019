#pragma once

#include "gengeom/core.hpp"
#include "gengeom/liealg.hpp"
#include "gengeom/sugra.hpp"

#include <optional>
#include <string>

namespace gengeom {

// Configuration for the algebra, curvature and dirac commands.
struct AlgebraConfig {
  AlgebraSpec algebra;
  std::string metric_kind = "double";  // double | explicit | none
  Mat span_plus;  // explicit: columns span V+
  std::optional<Mat> span_minus;
  Vec eps;  // divergence; empty means zero
  double flow_t_end = 1.0;
  double flow_dt = 1e-3;
  double tolerance = 1e-8;
};

enum class ConfigKind { algebra, sugra };

// Files with [[block]] or [eta] tables are sugra configs; files with [algebra] are algebra configs.
ConfigKind detect_config_kind(const std::string& path);

AlgebraConfig parse_algebra_config(const std::string& text, const std::string& source = "<string>");
AlgebraConfig load_algebra_config(const std::string& path);

SugraTemplate parse_sugra_template(const std::string& text, const std::string& source = "<string>");
SugraTemplate load_sugra_template(const std::string& path);

}  // namespace gengeom
