#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace symcount::cli {

enum ExitCode { exit_ok = 0, exit_failure = 1, exit_usage = 2 };

// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// SYMCOUNT_THREADS, or 0 (all hardware threads) when unset.
unsigned default_threads();

}  // namespace symcount::cli
