#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hkt::cli {

enum ExitCode : int { ok = 0, domain_error = 1, numerical_error = 2, usage_error = 3 };

/// Runs one command line (args exclude the program name). Writes a single JSON
/// document to `out`; human-readable failures also go to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace hkt::cli
