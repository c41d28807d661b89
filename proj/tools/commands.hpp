#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mscale::cli {

enum ExitCode : int { ok = 0, runtime_error = 1, validation_error = 2 };

/// Runs the command line `args` (args[0] is the program name). Normal output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "1,2,3", "a..b" (integer range) or "start:stop:step".
std::vector<double> parse_number_list(const std::string& text);
std::vector<std::size_t> parse_index_list(const std::string& text);

}  // namespace mscale::cli
