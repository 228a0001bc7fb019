#pragma once

#include "gengeom/core.hpp"
#include "gengeom/curvature.hpp"
#include "gengeom/report.hpp"
#include "gengeom/spinor.hpp"
#include "gengeom/sugra.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace gengeom {

using Json = nlohmann::json;

// 12 significant digits; non-finite values become null.
Json number_json(double x);
Json matrix_json(const Mat& m);
Json vector_json(const Vec& v);
// [[mask, re, im], ...] over nonzero coefficients
Json spinor_json(const Spinor& f, double tol = 0.0);
Spinor spinor_from_json(const Json& j, int rank);
Json report_json(const ResidualReport& r);

// Keys sorted, two-space indent, trailing newline.
std::string dump(const Json& j);

std::string format_number(double x);
std::string scan_csv(const std::vector<ScanRow>& rows);
// admissibility: optional per-state column
std::string flow_csv(const FlowResult& flow, const std::vector<double>& admissibility = {});

}  // namespace gengeom
