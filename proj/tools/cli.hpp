#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace canoma::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kUsage = 2, kOracleMismatch = 3 };

/// Entry point shared by the executable and the tests; `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Fixed 9-significant-digit rendering used for every CSV number.
std::string format_number(double v);

/// Data rows of CSV text: every line not starting with '#'.
std::string data_rows(const std::string& csv);

}  // namespace canoma::cli
