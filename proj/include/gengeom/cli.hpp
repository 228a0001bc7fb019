#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gengeom::cli {

enum ExitCode { kPass = 0, kResidualFailure = 1, kUsage = 2 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace gengeom::cli
