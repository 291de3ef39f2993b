// Acceptance criteria 1-8: one PASS/FAIL line each, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sheetlab/scenario.hpp"

using namespace sheetlab;

namespace {

int failures = 0;

struct Item {
  std::string what;
  double value, tol;
  bool at_least = false;
  bool ok() const { return std::isfinite(value) && (at_least ? value >= tol : value <= tol); }
};

void line(int id, const std::string& title, const std::vector<Item>& items) {
  bool ok = true;
  std::string detail;
  for (const auto& it : items) {
    ok = ok && it.ok();
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s=%.3e %s %.1e", detail.empty() ? "" : "; ", it.what.c_str(), it.value,
                  it.at_least ? ">=" : "<=", it.tol);
    detail += buf;
  }
  if (!ok) ++failures;
  std::printf("criterion %d %-26s %s  [%s]\n", id, title.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double value(const VerificationReport& r, const std::string& group, const std::string& name) {
  for (const auto& c : r.checks())
    if (c.group == group && c.name == name) return c.value;
  return std::nan("");
}

// closed-form field of the flat gamma = sin alpha sheet
Vec2 sine_field(double x, double y) {
  const double e = 0.5 * std::exp(-std::abs(y));
  return {(y > 0 ? -1.0 : 1.0) * std::sin(x) * e, -std::cos(x) * e};
}

// S_3((0, h)) / h of the closed-form field: trapezoid in x, Gauss panels in y split at the
// jumps of u(x, y) and u(x, y - h)
double closed_form_s3_over_h(double h, double Y) {
  std::vector<double> gx, gw;
  gauss_legendre(24, gx, gw);
  std::vector<double> brk{-Y};
  for (double b : {-2.0, -0.5, -0.1, 0.0, h, h + 0.1, h + 0.5, h + 2.0, Y}) brk.push_back(b);
  const int nx = 512;
  double s = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = -pi + two_pi * i / nx;
    for (std::size_t p = 0; p + 1 < brk.size(); ++p) {
      const double a = brk[p], b = brk[p + 1], m = 0.5 * (a + b), r = 0.5 * (b - a);
      for (std::size_t k = 0; k < gx.size(); ++k) {
        const double y = m + r * gx[k];
        const double d = norm(sine_field(x, y - h) - sine_field(x, y));
        s += gw[k] * r * d * d * d * (two_pi / nx);
      }
    }
  }
  return s / h;
}

ScenarioConfig slit_config() {
  ScenarioConfig c;
  c.sheet = SheetKind::perturbed_analytic;
  c.amplitude = 0.05;
  c.mode = 1;
  c.gamma_mode = 1;
  c.N = 256;
  c.delta = 0.1;
  c.dt = 1e-3;
  c.t_end = 0.5;
  c.M = 256;
  c.y_max = 6.0;
  return c;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;

  // 1. one-sided traces of flat sheets
  {
    const auto t0 = clock::now();
    const auto s1 = VortexSheet::graph(256, [](double) { return 0.0; }, [](double) { return 1.0; });
    const auto s2 = VortexSheet::graph(256, [](double) { return 0.0; }, [](double a) { return std::sin(a); });
    const auto a = one_sided_limits(s1), b = one_sided_limits(s2);
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t j = 0; j < 256; ++j) {
      e1 = std::max({e1, norm(a.u_plus[j] - Vec2{-0.5, 0.0}), norm(a.u_minus[j] - Vec2{0.5, 0.0})});
      const double al = s2.alpha(j);
      e2 = std::max({e2, norm(b.u_plus[j] - Vec2{-0.5 * std::sin(al), -0.5 * std::cos(al)}),
                     norm(b.u_minus[j] - Vec2{0.5 * std::sin(al), -0.5 * std::cos(al)})});
    }
    line(1, "(plemelj traces)", {{"uniform_err", e1, 1e-10}, {"sine_err", e2, 1e-10}, {"runtime_s", seconds_since(t0), 1.0}});
  }

  // 2 + 3. slit identities and energy on the evolved perturbed sheet
  {
    const auto t0 = clock::now();
    const auto r = run_slit_energy(slit_config());
    const double rt = seconds_since(t0);
    line(2, "(slit identities)",
         {{"normal_continuity", value(r, "slit", "normal_velocity_continuity"), 1e-7},
          {"pressure_continuity", value(r, "slit", "pressure_continuity"), 1e-6},
          {"kinematic", value(r, "slit", "kinematic_measure_identity"), 1e-5},
          {"runtime_s", rt, 120.0}});
    line(3, "(energy conservation)",
         {{"E0_kernel_err", value(r, "energy", "initial_kernel"), 1e-3},
          {"E0_grid_err", value(r, "energy", "initial_grid"), 1e-3},
          {"drift", value(r, "energy", "relative_drift"), 1e-4},
          {"halving_ratio", value(r, "energy", "drift_halving_ratio"), 8.0, true}});
  }

  // 4. pressure cross-validation
  {
    ScenarioConfig c;
    c.sheet = SheetKind::zero_circulation;
    c.N = 256;
    c.M = 256;
    c.M_y = 16384;
    c.y_max = 6.0;
    const auto r = run_pressure(c);
    line(4, "(pressure cross-check)",
         {{"riesz_vs_sheet", value(r, "pressure", "riesz_vs_sheet_max"), 1e-4},
          {"taylor_green", value(r, "pressure", "taylor_green_max"), 1e-12}});
  }

  // 5. critical regularity
  {
    ScenarioConfig c;
    c.sheet = SheetKind::zero_circulation;
    c.N = 256;
    c.M = 256;
    c.M_y = 512;
    c.y_max = 6.0;
    const auto r = run_regularity(c);
    // oracle: brute-force S_3/h of the closed-form field at three offsets, Richardson-extrapolated
    const double f1 = closed_form_s3_over_h(0.04, 6.0), f2 = closed_form_s3_over_h(0.02, 6.0),
                 f4 = closed_form_s3_over_h(0.01, 6.0);
    const double oracle = (8.0 * f4 - 6.0 * f2 + f1) / 3.0;
    const auto u = sample_sheet_velocity(make_sheet(c), Domain::strip(c.y_max, c.M_y), c.M, c.M_y);
    const double measured = structure_function(u, {{0, 1}}).rows[0].s3_over_y;
    line(5, "(critical regularity)",
         {{"sheet_flux_variation", value(r, "flux", "sheet_plateau_variation"), 2.0},
          {"taylor_green_drop", value(r, "flux", "taylor_green_drop"), 1e3, true},
          {"s3_rel_err_vs_oracle", std::abs(measured - oracle) / oracle, 0.10}});
  }

  // 6. microlocal limits on a travelling curved sheet
  {
    ScenarioConfig c;
    c.N = 64;
    c.amplitude = 0.05;
    c.dt = 0.05;
    c.t_end = 1.0;
    c.tube_eps1 = 0.3;
    c.eps_list = {0.08, 0.04, 0.02, 0.01};
    const auto r = run_microlocal(c);
    line(6, "(microlocal limits)",
         {{"rel_error", value(r, "microlocal", "scalar_rel_error"), 0.05},
          {"order", value(r, "microlocal", "scalar_order"), 1.0, true}});
  }

  // 7. shrinking-neighbourhood criterion
  {
    ScenarioConfig c;
    c.sheet = SheetKind::perturbed_analytic;
    c.amplitude = 0.05;
    c.N = 256;
    c.M = 512;
    c.M_y = 1024;
    c.y_max = 6.0;
    c.eps_list = {0.4, 0.2, 0.1, 0.05};
    c.q_list = {6.0};
    c.set_gamma = 0.75;
    const auto r = run_criterion(c);
    line(7, "(neighbourhood criterion)",
         {{"point_slope_err", value(r, "criterion_point_q6", "area_slope_error"), 0.1},
          {"slit_slope_err", value(r, "criterion_slit_q6", "area_slope_error"), 0.1},
          {"q1_increases", value(r, "criterion_point_q6", "q1_increases"), 0.0},
          {"q2_increases", value(r, "criterion_point_q6", "q2_increases"), 0.0},
          {"mixed_norm", value(r, "criterion_slit_q6", "mixed_norm"), 0.0, true}});
  }

  // 8. weak-solution residuals
  {
    const std::size_t n = 64;
    auto series = [](const GridField& f) {
      FieldSeries s;
      for (int k = 0; k < 5; ++k) s.times.push_back(0.1 * k), s.fields.push_back(f);
      return s;
    };
    auto pressures = [](FieldSeries s) {
      for (auto& f : s.fields) f = riesz_pressure(f);
      return s;
    };
    const MollifierSpec spec{0.3};
    const auto tg = series(taylor_green(n));
    const auto bad = series(GridField::vector(Domain::torus(), n, n, [](double x, double y) {
      return Vec2{std::sin(x) * std::cos(y) + std::sin(2 * y), -std::cos(x) * std::sin(y)};
    }));
    auto max_res = [&](const FieldSeries& u) {
      double m = 0.0;
      for (const auto& r : momentum_residual(u, spec)) m = std::max(m, r.residual);
      return m;
    };
    auto min_res = [&](const FieldSeries& u) {
      double m = INFINITY;
      for (const auto& r : momentum_residual(u, spec)) m = std::min(m, r.residual);
      return m;
    };
    const auto phi = TestFunction::periodic_bump(1.0, 2.0, 4.0, 1.0, 0.5);
    line(8, "(weak-solution residuals)",
         {{"tg_momentum", max_res(tg), 1e-10},
          {"tg_energy_balance", energy_balance_residual(tg, pressures(tg), phi, 0.1, 0.3).residual, 1e-8},
          {"bad_momentum", min_res(bad), 0.1, true},
          {"bad_energy_balance", energy_balance_residual(bad, pressures(bad), phi, 0.1, 0.3).residual, 0.1, true}});
  }

  std::printf("acceptance: %d of 8 criteria failed\n", failures);
  return failures ? 1 : 0;
}
