#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hlri::cli {

enum ExitCode : int { ok = 0, config_error = 1, solver_failure = 2 };

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hlri::cli
