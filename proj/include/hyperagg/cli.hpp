#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hyperagg {

/// Runs one command line (without the program name). Returns 0 on success,
/// 2 on argument errors (usage goes to `err`) and 1 on runtime failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperagg
