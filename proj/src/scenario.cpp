#include "sheetlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "sheetlab/sheet_io.hpp"

namespace sheetlab {

namespace {

void note(std::ostream* log, const std::string& s) {
  if (log) *log << s << '\n' << std::flush;
}

double check_value(const VerificationReport& r, const std::string& name) {
  for (const auto& c : r.checks())
    if (c.name == name) return c.value;
  return std::nan("");
}

double relative_drift(const std::vector<double>& e) {
  double d = 0.0;
  for (double v : e) d = std::max(d, std::abs(v - e.front()));
  return d / std::abs(e.front());
}

}  // namespace

VortexSheet make_sheet(const ScenarioConfig& c) {
  const double k = c.gamma_mode;
  switch (c.sheet) {
    case SheetKind::flat_uniform:
      return VortexSheet::graph(c.N, [](double) { return 0.0; }, [](double) { return 1.0; }, 0.0, false);
    case SheetKind::zero_circulation:
      return VortexSheet::graph(c.N, [](double) { return 0.0; }, [k](double a) { return std::sin(k * a); }, 0.0,
                                true);
    case SheetKind::perturbed_analytic: {
      const double A = c.amplitude, m = c.mode;
      return VortexSheet::graph(c.N, [A, m](double a) { return A * std::sin(m * a); },
                                [k](double a) { return std::sin(k * a); }, 0.0, true);
    }
  }
  throw InvalidArgument("make_sheet: unknown sheet kind");
}

GridField taylor_green(std::size_t n) {
  return GridField::vector(Domain::torus(), n, n, [](double x, double y) {
    return Vec2{std::sin(x) * std::cos(y), -std::cos(x) * std::sin(y)};
  });
}

double taylor_green_pressure(double x, double y) { return 0.25 * (std::cos(2.0 * x) + std::cos(2.0 * y)); }

double structure_limit(const VortexSheet& sheet) {
  // |[u]| = |gamma| / |zeta_a|, dsigma = |zeta_a| da
  const auto fr = build_frame(sheet);
  double s = 0.0;
  for (std::size_t j = 0; j < sheet.size(); ++j) {
    const double jump = std::abs(sheet.gamma()[j]) / fr.speed[j];
    s += jump * jump * jump * std::abs(fr.normal[j].y) * fr.dsigma[j];
  }
  return s;
}

Trajectory travelling_wave(std::size_t n, double a, double b, double c, double dt, double t_end) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw InvalidArgument("travelling_wave: dt and t_end must be positive");
  Trajectory tr;
  tr.dt = dt;
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    tr.snapshots.push_back(VortexSheet::graph(
        n, [=](double x) { return b * t + a * std::sin(x - c * t); }, [](double) { return 1.0; }, t));
  }
  return tr;
}

// ---- slit conditions and energy ----

VerificationReport run_slit_energy(const ScenarioConfig& c, std::ostream* log, Trajectory* traj_out) {
  VerificationReport rep;
  const VortexSheet s0 = make_sheet(c);
  const BlobParameter blob(c.delta);
  note(log, "evolving " + std::to_string(c.N) + " markers to t=" + std::to_string(c.t_end));
  const Trajectory traj = evolve(s0, blob, c.dt, c.t_end, c.filter_threshold);
  const std::size_t K = traj.snapshots.size();
  rep.info("run", "snapshots", static_cast<double>(K));
  rep.info("run", "circulation", s0.circulation());

  // slit conditions at interior snapshots
  SlitTolerances tol;
  tol.normal_continuity = c.tol_normal_continuity;
  tol.pressure_continuity = c.tol_pressure_continuity;
  tol.kinematic = c.tol_kinematic;
  ReportTable slit{"slit", {"t", "normal_velocity_continuity", "pressure_continuity", "kinematic_measure_identity"}, {}};
  double nc = 0.0, pc = 0.0, kin = 0.0, tail = 0.0;
  if (K < 3) throw InvalidArgument("slit pipeline: need at least two time steps");
  std::vector<std::size_t> idx;
  for (std::size_t k = 1; k + 1 < K; k += c.energy_stride) idx.push_back(k);
  if (idx.back() != K - 2) idx.push_back(K - 2);
  note(log, "slit conditions at " + std::to_string(idx.size()) + " snapshots");
  for (std::size_t k : idx) {
    const auto& s = traj.snapshots[k];
    const auto traces = one_sided_limits(s);
    tail = std::max(tail, traces.spectral_tail);
    auto [sp, ptr] = sheet_pressure(s, traces);
    const auto mu = sheet_measure(traj.snapshots[k - 1], s, traj.snapshots[k + 1]);
    const auto frame = build_frame(s);
    const auto U = mean_velocity_rhs(s, blob);
    const auto r = slit_report(s, traces, ptr, mu, frame, tol, &U);
    const double a = check_value(r, "normal_velocity_continuity"), b = check_value(r, "pressure_continuity"),
                 d = check_value(r, "kinematic_measure_identity");
    slit.rows.push_back({s.time(), a, b, d});
    nc = std::max(nc, a);
    pc = std::max(pc, b);
    kin = std::max(kin, d);
  }
  rep.check("slit", "normal_velocity_continuity", nc, tol.normal_continuity, Comparator::at_most,
            "max over sampled snapshots");
  rep.check("slit", "pressure_continuity", pc, tol.pressure_continuity, Comparator::at_most,
            "max over sampled snapshots");
  rep.check("slit", "kinematic_measure_identity", kin, tol.kinematic, Comparator::at_most,
            "max over sampled snapshots");
  rep.info("slit", "spectral_tail", tail);
  rep.table(std::move(slit));

  const auto kr = kinematic_residual(traj);
  rep.info("kinematics", "max_residual", kr.max());
  rep.info("kinematics", "form", kr.graph_form ? "graph" : "normal");

  // maximal functions on the final snapshot
  {
    const auto& s = traj.back();
    auto [sp, ptr] = sheet_pressure(s, one_sided_limits(s));
    TubeSpec tube;
    tube.eps1 = c.tube_eps1;
    tube.n_samples = c.tube_samples;
    const auto mf = normal_maximal(sheet_evaluators(sp), s, tube);
    rep.info("maximal", "u_star_l3_plus", mf.u_l3_plus);
    rep.info("maximal", "u_star_l3_minus", mf.u_l3_minus);
    rep.info("maximal", "p_star_l32_plus", mf.p_l32_plus);
    rep.info("maximal", "p_star_l32_minus", mf.p_l32_minus);
  }

  // energy
  const bool finite = std::abs(s0.circulation()) < 1e-12;
  if (!finite) {
    rep.info("energy", "status", "infinite energy: local balance only");
  } else {
    EnergyOptions eo;
    eo.grid = true;
    eo.M = c.M;
    eo.y_max = c.y_max;
    eo.stride = c.energy_stride;
    eo.grid_snapshots = {0};
    note(log, "energy ledger");
    const auto led = energy_ledger(traj, eo);
    const double ref = pi / (2.0 * c.gamma_mode);
    rep.info("energy", "reference_flat", ref);
    rep.check("energy", "initial_kernel", std::abs(led.e_kernel.front() - ref), c.tol_energy_initial);
    rep.check("energy", "initial_grid", std::abs(led.e_grid.front() - ref), c.tol_energy_initial);
    rep.check("energy", "estimator_agreement",
              std::abs(led.e_kernel.front() - led.e_grid.front()) / std::abs(led.e_kernel.front()),
              c.tol_energy_agreement);
    const double drift = c.delta > 0.0 ? led.drift_blob : led.drift_kernel;
    rep.check("energy", "relative_drift", drift, c.tol_drift, Comparator::at_most,
              c.delta > 0.0 ? "blob energy" : "kernel energy");
    rep.info("energy", "drift_kernel", led.drift_kernel);
    for (const auto& w : led.warnings) rep.info("energy", "warning", w);
    rep.table(led.table());

    // time-step convergence of the drift
    std::vector<double> d;
    for (double h : c.drift_dt_pair) {
      const auto tr = evolve(s0, blob, h, c.t_end, c.filter_threshold);
      std::vector<double> e;
      for (const auto& s : tr.snapshots) e.push_back(c.delta > 0.0 ? blob_energy(s, c.delta) : kernel_energy(s));
      d.push_back(relative_drift(e));
    }
    ReportTable dt_tab{"drift_dt", {"dt", "drift"}, {}};
    for (std::size_t i = 0; i < d.size(); ++i) dt_tab.rows.push_back({c.drift_dt_pair[i], d[i]});
    rep.table(std::move(dt_tab));
    rep.check("energy", "drift_halving_ratio", d[0] / d[1], c.tol_drift_ratio, Comparator::at_least,
              "drift(dt) / drift(dt/2)");
  }
  if (traj_out) *traj_out = traj;
  return rep;
}

// ---- regularity of the sheet field ----

VerificationReport run_regularity(const ScenarioConfig& c, std::ostream* log) {
  VerificationReport rep;
  const VortexSheet s0 = make_sheet(c);
  const Domain dom = Domain::strip(c.y_max, c.M_y);
  note(log, "sampling sheet velocity on " + std::to_string(c.M) + "x" + std::to_string(c.M_y));
  const GridField u = sample_sheet_velocity(s0, dom, c.M, c.M_y);
  rep.info("regularity", "boundary_ratio", u.boundary_ratio());

  const auto flux = dyadic_flux(u);
  ReportTable ft{"flux", {"q", "flux", "norm3", "resolved"}, {}};
  for (const auto& r : flux) ft.rows.push_back({double(r.q), r.flux, r.norm3, r.resolved ? 1.0 : 0.0});
  rep.table(std::move(ft));
  const auto w = flux_window(flux);
  rep.info("flux", "window", std::to_string(w.q_first) + ".." + std::to_string(w.q_last));
  rep.check("flux", "sheet_plateau_variation", w.variation, c.tol_flux_plateau);

  const auto tg = dyadic_flux(taylor_green(c.M));
  const auto wt = flux_window(tg);
  rep.check("flux", "taylor_green_drop", wt.drop, c.tol_flux_drop, Comparator::at_least);

  std::vector<Offset> offs;
  for (int m = 1; m <= static_cast<int>(c.M_y / 16); ++m) offs.push_back({0, m});
  const auto sf = structure_function(u, offs);
  ReportTable st{"structure", {"dy", "length", "s3", "s3_over_y"}, {}};
  for (const auto& r : sf.rows) st.rows.push_back({double(r.off.dy), r.length, r.s3, r.s3_over_y});
  rep.table(std::move(st));
  rep.info("structure", "zeta3", sf.zeta3);
  rep.info("structure", "fit_points", static_cast<double>(sf.fit_points));
  const double lim = structure_limit(s0);
  rep.info("structure", "limit", lim);
  rep.info("structure", "richardson", 2.0 * sf.rows[0].s3_over_y - sf.rows[1].s3_over_y);
  rep.check("structure", "s3_over_y_relative_error", std::abs(sf.rows[0].s3_over_y - lim) / lim, c.tol_s3,
            Comparator::at_most, "smallest offset");
  return rep;
}

// ---- shrinking neighbourhoods ----

VerificationReport run_criterion(const ScenarioConfig& c, std::ostream* log) {
  VerificationReport rep;
  const VortexSheet s0 = make_sheet(c);
  const Domain dom = Domain::strip(c.y_max, c.M_y);
  note(log, "sampling sheet velocity for the criterion");
  const GridField u = sample_sheet_velocity(s0, dom, c.M, c.M_y);
  // the sampled field is frozen in time; the point set drifts through it
  FieldSeries fs;
  for (int k = 0; k <= 2; ++k) {
    fs.times.push_back(0.5 * k);
    fs.fields.push_back(u);
  }
  const auto pt = SingularSetSpec::point([](double t) { return Vec2{0.2 * t, 1.5}; }, c.set_gamma);
  const auto sl = SingularSetSpec::sheet(s0, c.set_gamma);
  for (double q : c.q_list) {
    const std::string tag = "q" + std::to_string(static_cast<int>(q));
    for (const auto* spec : {&pt, &sl}) {
      const std::string set = spec->kind == SetKind::point ? "point" : "slit";
      const auto tab = neighborhood_criterion(fs, *spec, c.eps_list, q);
      rep.table(tab.table("criterion_" + set + "_" + tag));
      const std::string g = "criterion_" + set + "_" + tag;
      rep.check(g, "area_slope_error", std::abs(tab.area_slope - tab.expected_slope), c.tol_area_slope);
      rep.info(g, "area_slope", tab.area_slope);
      rep.info(g, "admissible", tab.admissibility.ok ? "yes" : "no: " + tab.admissibility.reason);
      if (tab.admissibility.ok) {
        rep.check(g, "q1_increases", tab.q1_monotone ? 0.0 : 1.0, 0.0);
        rep.check(g, "q2_increases", tab.q2_monotone ? 0.0 : 1.0, 0.0);
      }
      if (spec->kind != SetKind::point)
        rep.check(g, "mixed_norm", tab.mixed_norm, 0.0, Comparator::at_least, "finite");
    }
  }
  return rep;
}

// ---- pressure ----

VerificationReport run_pressure(const ScenarioConfig& c, std::ostream* log) {
  VerificationReport rep;
  const VortexSheet s0 = make_sheet(c);
  const Domain dom = Domain::strip(c.y_max, c.M_y);
  note(log, "sampling sheet velocity on " + std::to_string(c.M) + "x" + std::to_string(c.M_y));
  const GridField u = sample_sheet_velocity(s0, dom, c.M, c.M_y);
  check_strip_decay(u, 3e-3);
  note(log, "Riesz pressure");
  const GridField pr = riesz_pressure(u, {true});

  const std::size_t sx = std::min<std::size_t>(128, c.M), sy = std::min<std::size_t>(128, c.M_y);
  const std::size_t kx = c.M / sx, ky = c.M_y / sy;
  std::vector<Vec2> pts;
  std::vector<double> riesz;
  for (std::size_t k = 0; k < sy; ++k) {
    const std::size_t iy = c.M_y / 2 + (k - sy / 2) * ky;
    for (std::size_t i = 0; i < sx; ++i) {
      pts.push_back({pr.x(i * kx), pr.y(iy)});
      riesz.push_back(pr.at(0, iy, i * kx));
    }
  }
  note(log, "sheet pressure at " + std::to_string(pts.size()) + " points");
  auto [sp, ptr] = sheet_pressure(s0, one_sided_limits(s0));
  const auto sides = graph_sides(SheetCurve(s0), pts);
  const auto full = sp->evaluate(pts, sides, PressureForm::full);
  const auto dl = sp->evaluate(pts, sides, PressureForm::double_layer);
  auto centred = [](std::vector<double> v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (double& x : v) x -= m;
    return v;
  };
  const auto a = centred(riesz), b = centred(full), d = centred(dl);
  double err = 0.0, err_dl = 0.0;
  ReportTable t{"pressure_subset", {"x", "y", "riesz", "sheet"}, {}};
  for (std::size_t i = 0; i < a.size(); ++i) {
    err = std::max(err, std::abs(a[i] - b[i]));
    err_dl = std::max(err_dl, std::abs(a[i] - d[i]));
    t.rows.push_back({pts[i].x, pts[i].y, a[i], b[i]});
  }
  rep.table(std::move(t));
  rep.check("pressure", "riesz_vs_sheet_max", err, c.tol_pressure_agreement, Comparator::at_most,
            "after mean subtraction");
  rep.info("pressure", "riesz_vs_double_layer_form_max", err_dl);

  const std::size_t n = 64;
  const GridField tg = taylor_green(n);
  const GridField ptg = riesz_pressure(tg);
  double e = 0.0;
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix)
      e = std::max(e, std::abs(ptg.at(0, iy, ix) - taylor_green_pressure(ptg.x(ix), ptg.y(iy))));
  rep.check("pressure", "taylor_green_max", e, c.tol_taylor_green);
  return rep;
}

// ---- microlocal limits ----

VerificationReport run_microlocal(const ScenarioConfig& c, std::ostream* log) {
  VerificationReport rep;
  const double a = c.amplitude, b = 0.3, speed = 1.0;
  const Trajectory tr = travelling_wave(c.N, a, b, speed, c.dt, c.t_end);
  auto h = [=](double x, double t) { return b * t + a * std::sin(x - speed * t); };
  ScalarJumpData f;
  f.value = [h](const Vec2& p, double t) { return (p.y > h(p.x, t) ? 1.0 : -1.0) * std::exp(p.y); };
  f.plus = [](const Vec2& p, double) { return std::exp(p.y); };
  f.minus = [](const Vec2& p, double) { return -std::exp(p.y); };
  MicrolocalOptions opt;
  opt.tube_eps1 = c.tube_eps1;
  note(log, "microlocal limits over " + std::to_string(tr.snapshots.size()) + " snapshots");
  const auto tab = microlocal_convergence(f, tr, c.eps_list, opt);
  rep.table(tab.table("microlocal_scalar"));
  rep.check("microlocal", "scalar_rel_error", tab.rows.back().rel_error, c.tol_microlocal_error,
            Comparator::at_most, "smallest eps");
  rep.check("microlocal", "scalar_order", tab.order, c.tol_microlocal_order, Comparator::at_least);

  const Vec2 V{0.3, 1.0};
  VectorJumpData u;
  u.value = [h, V](const Vec2& p, double t) { return (p.y > h(p.x, t) ? 1.0 : -1.0) * V; };
  u.plus = [V](const Vec2&, double) { return V; };
  u.minus = [V](const Vec2&, double) { return -V; };
  const auto ft = microlocal_flux_convergence(u, tr, c.eps_list, opt);
  rep.table(ft.table("microlocal_flux"));
  rep.info("microlocal", "flux_rel_error", ft.rows.back().rel_error);
  rep.info("microlocal", "flux_order", ft.order);
  return rep;
}

ScenarioResult run_scenario(const ScenarioConfig& c, std::ostream* log) {
  ScenarioResult res;
  switch (c.pipeline) {
    case Pipeline::slit_energy: {
      Trajectory tr;
      res.report = run_slit_energy(c, log, &tr);
      std::filesystem::create_directories(c.out_dir);
      io::write_sheet_csv(tr.back(), c.out_dir / "sheet_final.csv");
      res.files.push_back(c.out_dir / "sheet_final.csv");
      break;
    }
    case Pipeline::regularity: res.report = run_regularity(c, log); break;
    case Pipeline::criterion: res.report = run_criterion(c, log); break;
    case Pipeline::pressure: res.report = run_pressure(c, log); break;
    case Pipeline::microlocal: res.report = run_microlocal(c, log); break;
  }
  std::filesystem::create_directories(c.out_dir);
  res.report.write(c.out_dir);
  res.files.push_back(c.out_dir / "report.txt");
  for (const auto& t : res.report.tables()) res.files.push_back(c.out_dir / (t.name + ".csv"));
  std::ofstream m(c.out_dir / "manifest.txt");
  m << config_text(c) << "\n[files]\n";
  for (const auto& f : res.files) m << f.filename().string() << '\n';
  m << "status = " << (res.report.passed() ? "ok" : "failed") << '\n';
  res.files.push_back(c.out_dir / "manifest.txt");
  return res;
}

std::vector<ScenarioInfo> list_scenarios() {
  return {
      {"slit_energy", "evolve a blob-regularized sheet; slit conditions, maximal functions, energy ledger"},
      {"regularity", "dyadic flux, third-order structure function of the sheet velocity"},
      {"criterion", "shrinking-neighbourhood criterion for a moving point and the sheet itself"},
      {"pressure", "Riesz pressure of the sampled field against the sheet pressure; Taylor-Green"},
      {"microlocal", "band integrals against jump limits for a travelling curved sheet"},
  };
}

}  // namespace sheetlab
