#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "commands.hpp"

namespace {

using namespace autolim::cli;

int fail_config(const std::string& message) {
  std::cout << dump(error_json("config_error", message, exit_config));
  std::cerr << "autolim: " << message << '\n';
  return exit_config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hard limits of autocatalytic pathways"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  long long seed = -1;

  for (const char* name : {"limits", "sweep", "simulate", "verify"}) {
    CLI::App* sub = app.add_subcommand(name);
    auto* cfg = sub->add_option("--config", config_path, "JSON run configuration");
    if (std::string(name) != "verify") cfg->required();
    sub->add_option("--out", out_path, "output file (report, CSV table or trajectory)");
    sub->add_option("--seed", seed, "RNG seed for the randomized suites")->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Invocation inv;
  if (!out_path.empty()) inv.out = out_path;
  if (seed >= 0) inv.seed = static_cast<unsigned long long>(seed);
  if (const char* scale = std::getenv("AUTOLIM_TOL_SCALE")) {
    char* end = nullptr;
    const double v = std::strtod(scale, &end);
    if (end == scale || *end != '\0' || !(v > 0.0)) {
      return fail_config("AUTOLIM_TOL_SCALE must be a positive number");
    }
    inv.tol_scale = v;
  }

  RunConfig config;
  try {
    if (config_path.empty()) {
      config.command = Command::verify;
    } else {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) return fail_config("cannot read config file '" + config_path + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      config = parse_config_text(buf.str());
      if (to_string(config.command) != command) {
        return fail_config("config command '" + to_string(config.command) +
                           "' does not match the invoked command '" + command + "'");
      }
    }
  } catch (const ConfigError& e) {
    return fail_config(e.what());
  }

  return run(config, inv, std::cout, std::cerr);
}
