#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mahler {

/// Entry point of the `mahler` tool. `args` excludes the program name.
/// Returns 0 on success, 1 when verification fails, 2 on usage or parse
/// errors and 3 on computation errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Real number as printed by the tool: rounded to 12 significant digits,
/// then the shortest text that reads back to the rounded value.
std::string format_real(double x);

}  // namespace mahler
