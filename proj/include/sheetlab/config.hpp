#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sheetlab/core.hpp"

namespace sheetlab {

// Flat "key = value" text with [section] headers; '#' and ';' start comments.
struct IniFile {
  // section -> key -> value ("" is the section before any header)
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, int> lines;  // "section.key" -> line number

  static IniFile parse(const std::string& text, const std::string& origin = "<string>");
  static IniFile load(const std::filesystem::path& file);
};

enum class SheetKind { flat_uniform, zero_circulation, perturbed_analytic };
enum class Pipeline { slit_energy, regularity, criterion, pressure, microlocal };

struct ScenarioConfig {
  std::string name = "scenario";
  Pipeline pipeline = Pipeline::slit_energy;

  // [sheet]
  SheetKind sheet = SheetKind::perturbed_analytic;
  double amplitude = 0.05;  // h0 = amplitude sin(mode alpha)
  int mode = 1;
  int gamma_mode = 1;       // gamma = sin(gamma_mode alpha) unless flat_uniform

  // [numerics]
  std::size_t N = 256;
  double delta = 0.1;
  double dt = 1e-3;
  double t_end = 0.5;
  double filter_threshold = 1e-13;
  std::size_t M = 256;
  std::size_t M_y = 512;
  double y_max = 6.0;
  double tube_eps1 = 0.1;
  int tube_samples = 32;
  std::vector<double> eps_list{0.08, 0.04, 0.02, 0.01};
  std::vector<double> q_list{6.0};
  double set_gamma = 0.75;
  std::vector<double> drift_dt_pair{0.0625, 0.03125};
  std::size_t energy_stride = 10;

  // [tolerances]
  double tol_normal_continuity = 1e-7;
  double tol_pressure_continuity = 1e-6;
  double tol_kinematic = 1e-5;
  double tol_energy_initial = 1e-3;
  double tol_energy_agreement = 1e-3;
  double tol_drift = 1e-4;
  double tol_drift_ratio = 8.0;
  double tol_pressure_agreement = 1e-4;
  double tol_taylor_green = 1e-12;
  double tol_flux_plateau = 2.0;
  double tol_flux_drop = 1e3;
  double tol_s3 = 0.10;
  double tol_microlocal_error = 0.05;
  double tol_microlocal_order = 1.0;
  double tol_area_slope = 0.1;

  // [output]
  std::filesystem::path out_dir = "out";
};

const char* to_string(SheetKind k);
const char* to_string(Pipeline p);
std::vector<std::string> pipeline_names();

// Throws ConfigError naming the offending key for unknown keys, bad values and violated ranges.
ScenarioConfig parse_config(const IniFile& ini);
ScenarioConfig load_config(const std::filesystem::path& file);
// key = value echo of the effective configuration (deterministic order)
std::string config_text(const ScenarioConfig& c);

}  // namespace sheetlab
