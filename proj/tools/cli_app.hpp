#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rcdt::cli {

/// Runs one command line (without the program name).  Machine-readable
/// JSON results go to `out`, human-oriented notes and error messages to
/// `err`.  Returns the process exit code: 0 success, 1 failed selftest,
/// 2 usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rcdt::cli
