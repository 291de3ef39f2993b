// sheetlab: run verification scenarios from INI configs.
// exit codes: 0 ok, 1 a check failed, 2 configuration error, 3 numerical abort
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "sheetlab/config.hpp"
#include "sheetlab/scenario.hpp"

using namespace sheetlab;

namespace {

ScenarioConfig load(const std::string& path) {
  ScenarioConfig c = load_config(path);
  if (const char* od = std::getenv("OUT_DIR"); od && *od) c.out_dir = od;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"periodic vortex sheet verification lab"};
  app.require_subcommand(1);

  std::string run_path, validate_path;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "run the scenario described by a config file");
  run->add_option("config", run_path, "INI config")->required();
  run->add_flag("-q,--quiet", quiet, "no progress output");
  auto* list = app.add_subcommand("list-scenarios", "list the available pipelines");
  auto* validate = app.add_subcommand("validate", "parse and validate a config, then echo it");
  validate->add_option("config", validate_path, "INI config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*list) {
      for (const auto& s : list_scenarios()) std::cout << s.name << "  " << s.description << '\n';
      return 0;
    }
    if (*validate) {
      std::cout << config_text(load(validate_path));
      return 0;
    }
    const ScenarioConfig c = load(run_path);
    const auto res = run_scenario(c, quiet ? nullptr : &std::cerr);
    std::cout << res.report.to_text();
    std::cout << "output: " << c.out_dir.string() << '\n';
    return res.exit_code();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
