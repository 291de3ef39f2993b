#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "sheetlab/config.hpp"
#include "sheetlab/report.hpp"
#include "sheetlab/verification.hpp"

namespace sheetlab {

// Initial sheet for a scenario: flat_uniform (h = 0, gamma = 1), zero_circulation
// (h = 0, gamma = sin(k alpha)) or perturbed_analytic (h = A sin(m alpha), gamma = sin(k alpha)).
VortexSheet make_sheet(const ScenarioConfig& c);

// Taylor-Green vortex u = (sin x cos y, -cos x sin y) on the 2pi torus, p = (cos 2x + cos 2y)/4.
GridField taylor_green(std::size_t n);
double taylor_green_pressure(double x, double y);

// lim_{|y| -> 0} S_3(y)/|y| for vertical offsets: int |[u]|^3 |nu_y| dsigma over the sheet
double structure_limit(const VortexSheet& sheet);

// Translating, oscillating graph h(x, t) = b t + a sin(x - c t) on n nodes, snapshots every dt.
Trajectory travelling_wave(std::size_t n, double a, double b, double c, double dt, double t_end);

struct ScenarioResult {
  VerificationReport report;
  std::vector<std::filesystem::path> files;
  int exit_code() const { return report.passed() ? 0 : 1; }
};

// Pipelines; each returns the report without touching the file system.
VerificationReport run_slit_energy(const ScenarioConfig& c, std::ostream* log = nullptr,
                                   Trajectory* traj_out = nullptr);
VerificationReport run_regularity(const ScenarioConfig& c, std::ostream* log = nullptr);
VerificationReport run_criterion(const ScenarioConfig& c, std::ostream* log = nullptr);
VerificationReport run_pressure(const ScenarioConfig& c, std::ostream* log = nullptr);
VerificationReport run_microlocal(const ScenarioConfig& c, std::ostream* log = nullptr);

// Runs the configured pipeline and writes manifest.txt, report.txt and CSV tables into
// c.out_dir. Numerical breakdowns propagate as NumericalAbort.
ScenarioResult run_scenario(const ScenarioConfig& c, std::ostream* log = nullptr);

struct ScenarioInfo {
  std::string name, description;
};
std::vector<ScenarioInfo> list_scenarios();

}  // namespace sheetlab
