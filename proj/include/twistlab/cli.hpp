#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twistlab::cli {

inline constexpr const char* kSchema = "twistlab/1";

enum ExitCode { kPass = 0, kFail = 1, kUsage = 2 };

/// Runs one subcommand. `args` excludes the program name. The report goes to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace twistlab::cli
