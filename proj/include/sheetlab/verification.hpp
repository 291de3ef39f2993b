#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sheetlab/dynamics.hpp"
#include "sheetlab/field.hpp"
#include "sheetlab/potential.hpp"
#include "sheetlab/report.hpp"

namespace sheetlab {

// Gauss-Legendre nodes/weights on [-1, 1]
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// ---- sampling the sheet fields on grids ----

// delta = 0 sheet velocity on a strip grid. Rows clear of the sheet by at least `far_gap`
// use the Fourier expansion of the periodic kernel; the rest use the barycentric evaluator
// with the side taken from the graph crossing height. Requires a graph sheet.
GridField sample_sheet_velocity(const VortexSheet& sheet, const Domain& dom, std::size_t nx,
                                std::size_t ny, double far_gap = 0.5);
GridField sample_sheet_pressure(const SheetPressure& p, const Domain& dom, std::size_t nx, std::size_t ny,
                                PressureForm form = PressureForm::full);
// sides from the graph crossing height
std::vector<Side> graph_sides(const SheetCurve& curve, const std::vector<Vec2>& points);

// ---- normal maximal functions ----

struct TubeSpec {
  double eps1 = 0.1;
  int n_samples = 32;
  double ratio = 1e-4;  // innermost sample at eps1 * ratio; geometric in between
  std::vector<double> distances() const;
};

// Off-sheet evaluators together with the on-sheet one-sided values.
struct SheetFieldEvaluators {
  std::function<std::vector<Vec2>(const std::vector<Vec2>&, const std::vector<Side>&)> u;
  std::function<std::vector<double>(const std::vector<Vec2>&, const std::vector<Side>&)> p;
  std::vector<Vec2> u_plus, u_minus;
  std::vector<double> p_plus, p_minus;
};
SheetFieldEvaluators sheet_evaluators(std::shared_ptr<const SheetPressure> p);

struct MaximalFunctions {
  std::vector<double> u_star_plus, u_star_minus, p_star_plus, p_star_minus;
  double u_l3_plus = 0.0, u_l3_minus = 0.0;     // (int (u*)^3 dsigma)^(1/3)
  double p_l32_plus = 0.0, p_l32_minus = 0.0;   // (int (p*)^(3/2) dsigma)^(2/3)
};

// Sup over Gamma_+- = zeta + nu [0, eps1] (trace included). Throws InvalidArgument when a
// ladder point does not project back to its own foot (tube too wide).
MaximalFunctions normal_maximal(const SheetFieldEvaluators& f, const VortexSheet& sheet, const TubeSpec& tube);

// ---- slit conditions ----

struct SlitTolerances {
  double normal_continuity = 1e-7;
  double pressure_continuity = 1e-6;
  double kinematic = 1e-5;
  double jump_floor = 1e-6;
};

// Normal-velocity and pressure continuity and the kinematic identity dmu + u_nu dsigma = 0 on
// jump nodes. `transport` is the velocity that moves the markers (the blob velocity for
// regularized trajectories); without it the trace mean is used.
VerificationReport slit_report(const VortexSheet& sheet, const SheetTraces& traces,
                               const PressureTraces& ptraces, const SheetMeasure& mu,
                               const SheetFrame& frame, const SlitTolerances& tol = {},
                               const std::vector<Vec2>* transport = nullptr);

// ---- microlocal limits ----

struct ScalarJumpData {
  std::function<double(const Vec2&, double)> value;        // f(x, t) off the sheet
  std::function<double(const Vec2&, double)> plus, minus;  // f_+-(foot, t)
};
struct VectorJumpData {
  std::function<Vec2(const Vec2&, double)> value;
  std::function<Vec2(const Vec2&, double)> plus, minus;
};

struct MicrolocalOptions {
  std::size_t columns = 128;  // x columns (periodic trapezoid)
  int band_nodes = 16;        // Gauss nodes across each band half (>= 8)
  double tube_eps1 = 0.3;     // every eps must be below tube_eps1 / 3
};

struct MicrolocalRow {
  double eps = 0.0, bulk = 0.0, limit = 0.0, error = 0.0, rel_error = 0.0;
};
struct MicrolocalTable {
  std::vector<MicrolocalRow> rows;
  double order = 0.0;  // least-squares slope of log error vs log eps
  ReportTable table(const std::string& name) const;
};

// int int f d_t chi_eps dx dt  vs  int int (f_+ - f_-) dmu dt  over the interior snapshots
MicrolocalTable microlocal_convergence(const ScalarJumpData& f, const Trajectory& traj,
                                       const std::vector<double>& eps_list, MicrolocalOptions opt = {});
// int int u . grad chi_eps dx dt  vs  int int (u_+ - u_-) . nu dsigma dt
MicrolocalTable microlocal_flux_convergence(const VectorJumpData& u, const Trajectory& traj,
                                            const std::vector<double>& eps_list, MicrolocalOptions opt = {});

// ---- shrinking-neighbourhood criterion ----

enum class SetKind { point, curve, slit };

struct SingularSetSpec {
  SetKind kind = SetKind::point;
  int k = 0;  // dimension of the set
  int n = 2;  // ambient dimension (grids are 2-D)
  double gamma = 1.0;
  double C = 1.0;
  // distance from x to S(t)
  std::function<double(const Vec2&, double)> distance;

  static SingularSetSpec point(std::function<Vec2(double)> s, double gamma, double C = 1.0);
  // the sheet itself (static); distance by nearest-point projection onto its interpolant
  static SingularSetSpec sheet(const VortexSheet& sheet, double gamma, double C = 1.0);
  static SingularSetSpec horizontal_line(double y0, double gamma, double C = 1.0);
};

struct Admissibility {
  bool ok = false;
  double gamma_min = 0.0, q_min = 0.0;
  std::string reason;
};
Admissibility admissible(int n, int k, double gamma, double q);

struct CriterionRow {
  double eps = 0.0, radius = 0.0, area = 0.0;
  double lq = 0.0;  // time average of int_{A_eps} |u|^q
  double q1 = 0.0, q2 = 0.0;
};
struct CriterionTable {
  std::vector<CriterionRow> rows;
  double area_slope = 0.0, expected_slope = 0.0;
  bool q1_monotone = false, q2_monotone = false;
  Admissibility admissibility;
  double mixed_norm = std::nan("");  // L^3_t L^3_S L^q_{S-perp}; curves/slits only
  ReportTable table(const std::string& name) const;
};

struct CriterionOptions {
  double fibre_halfwidth = 1.0;  // S-perp extent used for the mixed norm
};

CriterionTable neighborhood_criterion(const FieldSeries& u, const SingularSetSpec& spec,
                                      const std::vector<double>& eps_list, double q,
                                      CriterionOptions opt = {});

// ---- energy ledger ----

struct EnergyOptions {
  bool grid = true;  // E_grid needs zero circulation
  std::size_t M = 256;
  double y_max = 6.0;
  int gauss_nodes = 16;
  std::size_t stride = 1;               // E_kernel / E_blob every stride-th snapshot (and the last)
  std::vector<std::size_t> grid_snapshots{0};  // snapshots that get E_grid
};

struct EnergyLedger {
  std::vector<double> times, e_kernel, e_blob, e_grid;  // e_grid NaN where not computed
  double drift_kernel = 0.0, drift_blob = 0.0;
  bool grid_refused = false;
  std::vector<std::string> warnings;
  ReportTable table() const;
};

// Physical energy int |u|^2 of the delta = 0 sheet by the kernel form with the logarithm split
// off analytically.
double kernel_energy(const VortexSheet& sheet);
// Conserved energy of the blob system (equal to kernel_energy as delta -> 0).
double blob_energy(const VortexSheet& sheet, double delta);
// Strip quadrature: M periodic columns, sheet-adapted Gauss-Legendre panels in y on [-Y, Y].
double grid_energy(const VortexSheet& sheet, std::size_t M = 256, double y_max = 6.0, int gauss_nodes = 16);

EnergyLedger energy_ledger(const Trajectory& traj, const EnergyOptions& opt = {});

}  // namespace sheetlab
