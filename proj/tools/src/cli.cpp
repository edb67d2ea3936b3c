#include "cli.hpp"

#include "commands.hpp"

#include "symcount/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <stdexcept>

namespace symcount::cli {

unsigned default_threads() {
  const char* env = std::getenv("SYMCOUNT_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  try {
    const long v = std::stol(env);
    return v > 0 ? static_cast<unsigned>(v) : 0u;
  } catch (const std::exception&) {
    return 0;
  }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counting integral quadratic forms in spectral sectors", "symcount"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(SYMCOUNT_VERSION));

  Context ctx{out, err, default_threads(), {"symcount"}};
  ctx.command_line.insert(ctx.command_line.end(), args.begin(), args.end());
  app.add_option("--threads", ctx.threads, "Worker threads (0: all cores; default from SYMCOUNT_THREADS)");

  Action selected;
  register_commands(app, selected);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::CallForVersion&) {
    out << SYMCOUNT_VERSION << "\n";
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return exit_usage;
  }

  if (!selected) {
    err << app.help();
    return exit_usage;
  }
  try {
    return selected(ctx);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
}

}  // namespace symcount::cli
