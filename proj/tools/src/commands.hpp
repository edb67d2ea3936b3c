#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace symcount::cli {

struct Context {
  std::ostream& out;
  std::ostream& err;
  unsigned threads = 0;
  std::vector<std::string> command_line;
};

using Action = std::function<int(Context&)>;

// Adds every subcommand; the parsed one stores its action in `selected`.
void register_commands(CLI::App& app, Action& selected);

}  // namespace symcount::cli
