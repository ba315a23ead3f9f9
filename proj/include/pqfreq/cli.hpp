#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pqfreq::cli {

enum ExitCode : int { ok = 0, internal_error = 1, validation_error = 2, suite_failed = 3 };

// Runs one invocation. `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Help text of the top-level app ("") or of one subcommand.
std::string help_text(const std::string& subcommand);

}  // namespace pqfreq::cli
