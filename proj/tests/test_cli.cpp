#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "sheetlab/config.hpp"
#include "sheetlab/scenario.hpp"

using namespace sheetlab;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}
int run(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + " " + SHEETLAB_CLI + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}
fs::path write_tmp(const std::string& name, const std::string& text) {
  const auto p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}
std::string config_error(const std::string& text) {
  try {
    parse_config(IniFile::parse(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}
}  // namespace

TEST_CASE("ini parsing") {
  const auto ini = IniFile::parse("# c\n[a]\nx = 1 ; trailing\ny=two words\n\n[b]\nx=3\n");
  CHECK(ini.values.at("a").at("x") == "1");
  CHECK(ini.values.at("a").at("y") == "two words");
  CHECK(ini.values.at("b").at("x") == "3");
  CHECK_THROWS_AS(IniFile::parse("[a]\nx=1\nx=2\n"), ConfigError);
  CHECK_THROWS_AS(IniFile::parse("[a\n"), ConfigError);
  CHECK_THROWS_AS(IniFile::parse("[a]\njust text\n"), ConfigError);
}

TEST_CASE("config validation names the key") {
  CHECK(config_error("[numerics]\ndt = -1\n").find("numerics.dt") != std::string::npos);
  CHECK(config_error("[numerics]\ndt = -1\n").find("must be positive") != std::string::npos);
  CHECK(config_error("[numerics]\nbogus = 1\n").find("numerics.bogus") != std::string::npos);
  CHECK(config_error("[numerics]\nN = 100\n").find("numerics.N") != std::string::npos);
  CHECK(config_error("[numerics]\neps_list = 0.01, 0.02\n").find("eps_list") != std::string::npos);
  CHECK(config_error("[numerics]\ndt = 0.003\nt_end = 0.5\n").find("t_end") != std::string::npos);
  CHECK(config_error("[scenario]\npipeline = nope\n").find("scenario.pipeline") != std::string::npos);
  CHECK(config_error("[sheet]\nkind = spiral\n").find("sheet.kind") != std::string::npos);
  CHECK(config_error("[numerics]\ndelta = abc\n").find("numerics.delta") != std::string::npos);
  CHECK(config_error("[scenario]\nname = ok\n").empty());
}

TEST_CASE("config echo round-trips") {
  const auto c = load_config(fs::path(SHEETLAB_SOURCE_DIR) / "configs" / "perturbed_slit_energy.ini");
  const auto text = config_text(c);
  const auto c2 = parse_config(IniFile::parse(text));
  CHECK(config_text(c2) == text);
  CHECK(c.pipeline == Pipeline::slit_energy);
  CHECK(c.sheet == SheetKind::perturbed_analytic);
  CHECK(c.N == 256);
}

TEST_CASE("shipped configs validate") {
  for (const auto& e : fs::directory_iterator(fs::path(SHEETLAB_SOURCE_DIR) / "configs"))
    if (e.path().extension() == ".ini") {
      CAPTURE(e.path().string());
      CHECK_NOTHROW(load_config(e.path()));
      CHECK(run("validate " + e.path().string()) == 0);
    }
}

TEST_CASE("command line exit codes and outputs") {
  CHECK(run("list-scenarios") == 0);
  CHECK(run("") == 2);
  CHECK(run("validate " + write_tmp("sheetlab_bad.ini", "[numerics]\ndt = -1\n").string()) == 2);
  CHECK(run("validate /nonexistent/config.ini") == 2);

  const auto out = fs::temp_directory_path() / "sheetlab_cli_out";
  fs::remove_all(out);
  const auto cfg = fs::path(SHEETLAB_SOURCE_DIR) / "configs" / "flat_uniform.ini";
  REQUIRE(run("run -q " + cfg.string(), "OUT_DIR=" + (out / "a").string()) == 0);
  REQUIRE(run("run -q " + cfg.string(), "OUT_DIR=" + (out / "b").string()) == 0);
  const auto report = slurp(out / "a" / "report.txt");
  CHECK(report.find("infinite energy: local balance only") != std::string::npos);
  CHECK(report.find("status=PASS") != std::string::npos);
  CHECK(fs::exists(out / "a" / "manifest.txt"));
  for (const auto& name : {"slit.csv", "sheet_final.csv", "report.txt"}) {
    CAPTURE(name);
    CHECK(slurp(out / "a" / name) == slurp(out / "b" / name));
  }

  // a tolerance nobody can meet: exit 1
  const auto failing = write_tmp(
      "sheetlab_fail.ini",
      "[scenario]\npipeline = microlocal\n[numerics]\nN = 32\ndt = 0.1\nt_end = 1\ntube_eps1 = 0.3\n"
      "eps_list = 0.08, 0.04\n[tolerances]\nmicrolocal_error = 1e-12\n");
  CHECK(run("run -q " + failing.string(), "OUT_DIR=" + (out / "c").string()) == 1);

  // unregularized sheet running into its singularity: exit 3
  const auto abort = write_tmp("sheetlab_abort.ini",
                               "[sheet]\nkind = perturbed_analytic\namplitude = 0.5\n[numerics]\nN = 64\ndelta = 0\n"
                               "dt = 0.01\nt_end = 4\ndrift_dt_pair = 0.04, 0.02\n");
  CHECK(run("run -q " + abort.string(), "OUT_DIR=" + (out / "d").string()) == 3);
  fs::remove_all(out);
}
