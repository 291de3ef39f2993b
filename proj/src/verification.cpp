#include "sheetlab/verification.hpp"

#include <algorithm>
#include <limits>

#include "sheetlab/kernels.hpp"
#include "sheetlab/spectral.hpp"

namespace sheetlab {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw InvalidArgument("gauss_legendre: n must be positive");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

namespace {

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) continue;
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 2) return std::nan("");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// composite trapezoid weights on the given abscissae; a single point gets weight 1
std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  if (t.size() == 1) {
    w[0] = 1.0;
    return w;
  }
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double h = t[i + 1] - t[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

std::vector<double> column_heights(const SheetCurve& curve, const GridField& g) {
  std::vector<double> hs(g.nx());
  for (std::size_t ix = 0; ix < g.nx(); ++ix) hs[ix] = curve.crossing_height(g.x(ix));
  return hs;
}

}  // namespace

std::vector<Side> graph_sides(const SheetCurve& curve, const std::vector<Vec2>& points) {
  std::vector<Side> s(points.size());
  const long m = static_cast<long>(points.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long i = 0; i < m; ++i)
    s[i] = points[i].y > curve.crossing_height(points[i].x) ? Side::above : Side::below;
  return s;
}

GridField sample_sheet_velocity(const VortexSheet& sheet, const Domain& dom, std::size_t nx,
                                std::size_t ny, double far_gap) {
  if (!(far_gap > 0.0)) throw InvalidArgument("sample_sheet_velocity: far_gap must be positive");
  SheetCurve curve(sheet);
  if (!curve.is_graph()) throw InvalidArgument("sample_sheet_velocity: sheet is not a graph over x");
  GridField g(dom, nx, ny, 2, std::vector<std::string>{"velocity", "velocity"});
  const auto hs = sheet.heights();
  const double hmax = *std::max_element(hs.begin(), hs.end());
  const double hmin = *std::min_element(hs.begin(), hs.end());

  // far rows: conj(u) = -(1/4pi)[W0 + 2 sum_m e^{imz} What_m] above, (+) mirror below
  const int mmax = static_cast<int>(std::ceil(42.0 / far_gap));
  const std::size_t n = sheet.size();
  const double da = sheet.dalpha();
  double W0 = 0.0;
  std::vector<cplx> up(mmax + 1, 0.0), dn(mmax + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = sheet.gamma()[j] * da;
    const Vec2 z = sheet.position()[j];
    W0 += w;
    for (int m = 1; m <= mmax; ++m) {
      up[m] += w * std::exp(cplx(m * (z.y - hmax), -m * z.x));
      dn[m] += w * std::exp(cplx(-m * (z.y - hmin), m * z.x));
    }
  }
  std::vector<std::size_t> near_rows;
  const long nyl = static_cast<long>(ny);
#pragma omp parallel for schedule(dynamic)
  for (long iy = 0; iy < nyl; ++iy) {
    const double y = g.y(iy);
    const bool above = y >= hmax + far_gap, below = y <= hmin - far_gap;
    if (!above && !below) continue;
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double x = g.x(ix);
      cplx s = 0.0;
      const cplx step = above ? std::exp(cplx(-(y - hmax), x)) : std::exp(cplx(y - hmin, -x));
      cplx e = step;
      const auto& c = above ? up : dn;
      for (int m = 1; m <= mmax; ++m) {
        s += e * c[m];
        e *= step;
      }
      const cplx ubar = (above ? -1.0 : 1.0) * (W0 + 2.0 * s) / (4.0 * pi);
      g.at(0, iy, ix) = ubar.real();
      g.at(1, iy, ix) = -ubar.imag();
    }
  }
  for (std::size_t iy = 0; iy < ny; ++iy) {
    const double y = g.y(iy);
    if (!(y >= hmax + far_gap) && !(y <= hmin - far_gap)) near_rows.push_back(iy);
  }
  if (!near_rows.empty()) {
    const auto ch = column_heights(curve, g);
    std::vector<Vec2> pts;
    std::vector<Side> sides;
    pts.reserve(near_rows.size() * nx);
    for (auto iy : near_rows)
      for (std::size_t ix = 0; ix < nx; ++ix) {
        pts.push_back({g.x(ix), g.y(iy)});
        sides.push_back(g.y(iy) > ch[ix] ? Side::above : Side::below);
      }
    SheetVelocityField field(sheet);
    const auto u = field.evaluate(pts, sides);
    std::size_t k = 0;
    for (auto iy : near_rows)
      for (std::size_t ix = 0; ix < nx; ++ix, ++k) {
        g.at(0, iy, ix) = u[k].x;
        g.at(1, iy, ix) = u[k].y;
      }
  }
  return g;
}

GridField sample_sheet_pressure(const SheetPressure& p, const Domain& dom, std::size_t nx, std::size_t ny,
                                PressureForm form) {
  SheetCurve curve(p.velocity().sheet());
  if (!curve.is_graph()) throw InvalidArgument("sample_sheet_pressure: sheet is not a graph over x");
  GridField g(dom, nx, ny, 1, std::vector<std::string>{"pressure"});
  const auto ch = column_heights(curve, g);
  std::vector<Vec2> pts;
  std::vector<Side> sides;
  pts.reserve(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) {
      pts.push_back({g.x(ix), g.y(iy)});
      sides.push_back(g.y(iy) > ch[ix] ? Side::above : Side::below);
    }
  const auto v = p.evaluate(pts, sides, form);
  std::copy(v.begin(), v.end(), g.data().begin());
  return g;
}

// ---- normal maximal functions ----

std::vector<double> TubeSpec::distances() const {
  if (!(eps1 > 0.0)) throw InvalidArgument("TubeSpec: eps1 must be positive");
  if (n_samples < 16) throw InvalidArgument("TubeSpec: n_samples must be >= 16");
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidArgument("TubeSpec: ratio must lie in (0, 1)");
  std::vector<double> d(n_samples);
  for (int k = 0; k < n_samples; ++k) d[k] = eps1 * std::pow(ratio, static_cast<double>(k) / (n_samples - 1));
  return d;
}

SheetFieldEvaluators sheet_evaluators(std::shared_ptr<const SheetPressure> p) {
  SheetFieldEvaluators f;
  f.u = [p](const std::vector<Vec2>& pts, const std::vector<Side>& s) { return p->velocity().evaluate(pts, s); };
  f.p = [p](const std::vector<Vec2>& pts, const std::vector<Side>& s) { return p->evaluate(pts, s); };
  f.u_plus = p->velocity().traces().u_plus;
  f.u_minus = p->velocity().traces().u_minus;
  f.p_plus = p->traces().p_plus;
  f.p_minus = p->traces().p_minus;
  return f;
}

MaximalFunctions normal_maximal(const SheetFieldEvaluators& f, const VortexSheet& sheet, const TubeSpec& tube) {
  const auto d = tube.distances();
  const std::size_t n = sheet.size();
  if (f.u_plus.size() != n || f.u_minus.size() != n || f.p_plus.size() != n || f.p_minus.size() != n)
    throw InvalidArgument("normal_maximal: traces do not match the sheet");
  const auto fr = build_frame(sheet);
  SheetCurve curve(sheet);
  MaximalFunctions mf;
  for (int sgn : {1, -1}) {
    const Side side = sgn > 0 ? Side::above : Side::below;
    std::vector<Vec2> pts;
    pts.reserve(n * d.size());
    for (std::size_t j = 0; j < n; ++j)
      for (double dist : d) pts.push_back(sheet.position()[j] + (sgn * dist) * fr.normal[j]);
    // every ladder point must project back onto its own foot
    const long m = static_cast<long>(pts.size());
    bool bad = false;
#pragma omp parallel for schedule(dynamic, 64) reduction(|| : bad)
    for (long i = 0; i < m; ++i) {
      const std::size_t j = static_cast<std::size_t>(i) / d.size();
      const auto pr = curve.project(pts[i]);
      if (pr.ambiguous || std::abs(wrap_pi(pr.alpha - sheet.alpha(j))) > 1e-6 || sgn * pr.H <= 0.0) bad = true;
    }
    if (bad)
      throw InvalidArgument("normal_maximal: tube too wide, nearest-point projection is not unique (eps1 = " +
                            std::to_string(tube.eps1) + ")");
    const std::vector<Side> sides(pts.size(), side);
    const auto u = f.u(pts, sides);
    const auto p = f.p(pts, sides);
    auto& us = sgn > 0 ? mf.u_star_plus : mf.u_star_minus;
    auto& ps = sgn > 0 ? mf.p_star_plus : mf.p_star_minus;
    us.assign(n, 0.0);
    ps.assign(n, 0.0);
    double l3 = 0.0, l32 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double a = norm(sgn > 0 ? f.u_plus[j] : f.u_minus[j]);
      double b = std::abs(sgn > 0 ? f.p_plus[j] : f.p_minus[j]);
      for (std::size_t k = 0; k < d.size(); ++k) {
        a = std::max(a, norm(u[j * d.size() + k]));
        b = std::max(b, std::abs(p[j * d.size() + k]));
      }
      us[j] = a;
      ps[j] = b;
      l3 += a * a * a * fr.dsigma[j];
      l32 += std::pow(b, 1.5) * fr.dsigma[j];
    }
    (sgn > 0 ? mf.u_l3_plus : mf.u_l3_minus) = std::cbrt(l3);
    (sgn > 0 ? mf.p_l32_plus : mf.p_l32_minus) = std::pow(l32, 2.0 / 3.0);
  }
  return mf;
}

// ---- slit conditions ----

VerificationReport slit_report(const VortexSheet& sheet, const SheetTraces& traces, const PressureTraces& pt,
                               const SheetMeasure& mu, const SheetFrame& frame, const SlitTolerances& tol,
                               const std::vector<Vec2>* transport) {
  const std::size_t n = sheet.size();
  if (traces.u_plus.size() != n || traces.u_minus.size() != n || pt.p_plus.size() != n ||
      pt.p_minus.size() != n || mu.mu.size() != n || frame.normal.size() != n ||
      (transport && transport->size() != n))
    throw InvalidArgument("slit_report: inputs are not on the same node set");
  double nc = 0.0, pc = 0.0, kin = 0.0;
  int jump_nodes = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2 du = traces.u_plus[j] - traces.u_minus[j];
    nc = std::max(nc, std::abs(dot(du, frame.normal[j])));
    pc = std::max(pc, std::abs(pt.p_plus[j] - pt.p_minus[j]));
    if (norm(du) <= tol.jump_floor) continue;
    ++jump_nodes;
    const Vec2 U = transport ? (*transport)[j] : 0.5 * (traces.u_plus[j] + traces.u_minus[j]);
    kin = std::max(kin, std::abs(mu.mu[j] + dot(U, frame.normal[j]) * frame.dsigma[j]));
  }
  VerificationReport r;
  r.check("slit", "normal_velocity_continuity", nc, tol.normal_continuity);
  r.check("slit", "pressure_continuity", pc, tol.pressure_continuity);
  r.check("slit", "kinematic_measure_identity", kin, tol.kinematic, Comparator::at_most,
          transport ? "transport velocity supplied" : "trace mean velocity");
  r.info("slit", "jump_nodes", std::to_string(jump_nodes));
  r.info("slit", "jump_floor", tol.jump_floor);
  r.info("slit", "time", sheet.time());
  return r;
}

// ---- microlocal limits ----

ReportTable MicrolocalTable::table(const std::string& name) const {
  ReportTable t{name, {"eps", "bulk", "limit", "error", "rel_error"}, {}};
  for (const auto& r : rows) t.rows.push_back({r.eps, r.bulk, r.limit, r.error, r.rel_error});
  return t;
}

namespace {

void check_eps(const std::vector<double>& eps, const MicrolocalOptions& opt) {
  if (eps.empty()) throw InvalidArgument("microlocal: empty eps list");
  if (opt.band_nodes < 8)
    throw QuadratureError("microlocal: quadrature band under-resolved (fewer than 8 nodes across the band)");
  if (opt.columns < 8) throw QuadratureError("microlocal: fewer than 8 columns");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw InvalidArgument("microlocal: eps must be positive");
    if (i && !(eps[i] < eps[i - 1])) throw InvalidArgument("microlocal: eps list must decrease");
    if (!(3.0 * eps[i] < opt.tube_eps1)) throw InvalidArgument("microlocal: eps must be below tube half-width / 3");
  }
}

// y on the column through x where H = target (H increases with y near a graph sheet)
double band_edge(const CutoffFamily& fam, double x, double y_sheet, double target) {
  const double sgn = target > 0.0 ? 1.0 : -1.0;
  const double step = std::abs(target);
  auto g = [&](double y) { return fam.H({x, y}) - target; };
  double a = y_sheet, fa = g(a);
  double b = y_sheet + sgn * step, fb = g(b);
  int guard = 0;
  while (fa * fb > 0.0) {
    a = b;
    fa = fb;
    b += sgn * step;
    fb = g(b);
    if (++guard > 64) throw QuadratureError("microlocal: band edge not bracketed");
  }
  // Illinois regula falsi
  int side = 0;
  for (int it = 0; it < 100; ++it) {
    const double c = (a * fb - b * fa) / (fb - fa);
    const double fc = g(c);
    if (std::abs(fc) < 1e-14 || std::abs(b - a) < 1e-14) return c;
    if (fc * fb > 0.0) {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = c;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (a + b);
}

template <class Integrand>
double band_integral(const CutoffFamily& fam, std::size_t columns, int nodes, Integrand&& f) {
  std::vector<double> gx, gw;
  gauss_legendre(nodes, gx, gw);
  const double dx = two_pi / static_cast<double>(columns);
  const double eps = fam.epsilon();
  const long nc = static_cast<long>(columns);
  std::vector<double> col(columns, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < nc; ++i) {
    const double x = -pi + i * dx;
    const double ys = fam.curve().crossing_height(x);
    double s = 0.0;
    for (double sgn : {1.0, -1.0}) {
      const double y2 = band_edge(fam, x, ys, sgn * 2.0 * eps);
      const double y3 = band_edge(fam, x, y2, sgn * 3.0 * eps);
      const double lo = std::min(y2, y3), hi = std::max(y2, y3);
      for (int q = 0; q < nodes; ++q) {
        const Vec2 p{x, 0.5 * (lo + hi) + 0.5 * (hi - lo) * gx[q]};
        const auto cv = fam(p);
        if (cv.flagged) continue;
        s += 0.5 * (hi - lo) * gw[q] * f(p, cv);
      }
    }
    col[i] = s * dx;
  }
  double total = 0.0;
  for (double c : col) total += c;
  return total;
}

template <class Bulk, class Limit>
MicrolocalTable microlocal_table(const Trajectory& traj, const std::vector<double>& eps_list,
                                 const MicrolocalOptions& opt, Bulk&& bulk, Limit&& limit) {
  check_eps(eps_list, opt);
  const auto& S = traj.snapshots;
  if (S.size() < 4) throw InvalidArgument("microlocal: need at least 4 snapshots");
  std::vector<double> tin;
  for (std::size_t k = 1; k + 1 < S.size(); ++k) tin.push_back(S[k].time());
  const auto wt = trapezoid_weights(tin);
  double lim = 0.0;
  for (std::size_t k = 1; k + 1 < S.size(); ++k) lim += wt[k - 1] * limit(S[k - 1], S[k], S[k + 1]);
  MicrolocalTable tab;
  std::vector<double> es, errs;
  for (double eps : eps_list) {
    double b = 0.0;
    for (std::size_t k = 1; k + 1 < S.size(); ++k) {
      CutoffFamily fam(S[k - 1], S[k], S[k + 1], eps);
      b += wt[k - 1] * bulk(fam, S[k].time());
    }
    MicrolocalRow r;
    r.eps = eps;
    r.bulk = b;
    r.limit = lim;
    r.error = std::abs(b - lim);
    r.rel_error = lim != 0.0 ? r.error / std::abs(lim) : r.error;
    tab.rows.push_back(r);
    es.push_back(eps);
    errs.push_back(r.error);
  }
  tab.order = fit_slope(es, errs);
  return tab;
}

}  // namespace

MicrolocalTable microlocal_convergence(const ScalarJumpData& f, const Trajectory& traj,
                                       const std::vector<double>& eps_list, MicrolocalOptions opt) {
  auto bulk = [&](const CutoffFamily& fam, double t) {
    return band_integral(fam, opt.columns, opt.band_nodes,
                         [&](const Vec2& p, const CutoffValue& cv) { return f.value(p, t) * cv.dt; });
  };
  auto limit = [&](const VortexSheet& a, const VortexSheet& b, const VortexSheet& c) {
    const auto mu = sheet_measure(a, b, c);
    double s = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Vec2 z = b.position()[j];
      s += (f.plus(z, b.time()) - f.minus(z, b.time())) * mu.mu[j];
    }
    return s;
  };
  return microlocal_table(traj, eps_list, opt, bulk, limit);
}

MicrolocalTable microlocal_flux_convergence(const VectorJumpData& u, const Trajectory& traj,
                                            const std::vector<double>& eps_list, MicrolocalOptions opt) {
  auto bulk = [&](const CutoffFamily& fam, double t) {
    return band_integral(fam, opt.columns, opt.band_nodes,
                         [&](const Vec2& p, const CutoffValue& cv) { return dot(u.value(p, t), cv.grad); });
  };
  auto limit = [&](const VortexSheet&, const VortexSheet& b, const VortexSheet&) {
    const auto fr = build_frame(b);
    double s = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Vec2 z = b.position()[j];
      s += dot(u.plus(z, b.time()) - u.minus(z, b.time()), fr.normal[j]) * fr.dsigma[j];
    }
    return s;
  };
  return microlocal_table(traj, eps_list, opt, bulk, limit);
}

// ---- shrinking-neighbourhood criterion ----

SingularSetSpec SingularSetSpec::point(std::function<Vec2(double)> s, double gamma, double C) {
  SingularSetSpec sp;
  sp.kind = SetKind::point;
  sp.k = 0;
  sp.gamma = gamma;
  sp.C = C;
  sp.distance = [s = std::move(s)](const Vec2& x, double t) {
    const Vec2 c = s(t);
    return std::hypot(wrap_pi(x.x - c.x), x.y - c.y);
  };
  return sp;
}

SingularSetSpec SingularSetSpec::sheet(const VortexSheet& sheet, double gamma, double C) {
  SingularSetSpec sp;
  sp.kind = SetKind::slit;
  sp.k = 1;
  sp.gamma = gamma;
  sp.C = C;
  auto curve = std::make_shared<SheetCurve>(sheet);
  sp.distance = [curve](const Vec2& x, double) { return std::abs(curve->project(x).H); };
  return sp;
}

SingularSetSpec SingularSetSpec::horizontal_line(double y0, double gamma, double C) {
  SingularSetSpec sp;
  sp.kind = SetKind::curve;
  sp.k = 1;
  sp.gamma = gamma;
  sp.C = C;
  sp.distance = [y0](const Vec2& x, double) { return std::abs(x.y - y0); };
  return sp;
}

Admissibility admissible(int n, int k, double gamma, double q) {
  Admissibility a;
  const int c = n - k;
  a.q_min = c - 1 > 0 ? 3.0 * c / (c - 1.0) : std::numeric_limits<double>::infinity();
  a.gamma_min = q > 2.0 && c > 0 ? q / ((q - 2.0) * c) : std::numeric_limits<double>::infinity();
  std::vector<std::string> why;
  if (n < k + 2) why.push_back("n < k + 2");
  if (!(q >= a.q_min)) why.push_back("q below 3(n-k)/(n-k-1)");
  if (!(gamma >= a.gamma_min - 1e-12)) why.push_back("gamma below q/((q-2)(n-k))");
  a.ok = why.empty();
  for (std::size_t i = 0; i < why.size(); ++i) a.reason += (i ? "; " : "") + why[i];
  return a;
}

ReportTable CriterionTable::table(const std::string& name) const {
  ReportTable t{name, {"eps", "radius", "area", "lq", "q1", "q2"}, {}};
  for (const auto& r : rows) t.rows.push_back({r.eps, r.radius, r.area, r.lq, r.q1, r.q2});
  return t;
}

CriterionTable neighborhood_criterion(const FieldSeries& u, const SingularSetSpec& spec,
                                      const std::vector<double>& eps_list, double q, CriterionOptions opt) {
  if (u.fields.empty() || u.fields.size() != u.times.size())
    throw InvalidArgument("neighborhood_criterion: need matching times and fields");
  if (!spec.distance) throw InvalidArgument("neighborhood_criterion: set has no distance function");
  if (!(spec.gamma > 0.0 && spec.gamma <= 1.0)) throw InvalidArgument("neighborhood_criterion: need 0 < gamma <= 1");
  if (!(q > 0.0)) throw InvalidArgument("neighborhood_criterion: q must be positive");
  if (eps_list.empty()) throw InvalidArgument("neighborhood_criterion: empty eps list");
  for (std::size_t i = 0; i < eps_list.size(); ++i)
    if (!(eps_list[i] > 0.0) || (i && !(eps_list[i] < eps_list[i - 1])))
      throw InvalidArgument("neighborhood_criterion: eps list must be positive and decreasing");
  const auto& g0 = u.fields[0];
  for (const auto& f : u.fields)
    if (!f.same_grid(g0)) throw InvalidArgument("neighborhood_criterion: mismatched grids");

  CriterionTable tab;
  tab.admissibility = admissible(spec.n, spec.k, spec.gamma, q);
  tab.expected_slope = (spec.n - spec.k) * spec.gamma;
  const auto wt = trapezoid_weights(u.times);
  const std::size_t ne = eps_list.size(), np = g0.points();
  std::vector<double> area(ne, 0.0), lq_avg(ne, 0.0), i2(ne, 0.0), i3(ne, 0.0);
  double mixed = 0.0, tw = 0.0;
  const bool fibres = spec.kind != SetKind::point;
  for (std::size_t k = 0; k < u.fields.size(); ++k) {
    const auto& f = u.fields[k];
    const double t = u.times[k];
    std::vector<double> dist(np), uq(np);
    const long npl = static_cast<long>(np);
#pragma omp parallel for schedule(dynamic, 256)
    for (long i = 0; i < npl; ++i) {
      const std::size_t iy = static_cast<std::size_t>(i) / f.nx(), ix = static_cast<std::size_t>(i) % f.nx();
      dist[i] = spec.distance({f.x(ix), f.y(iy)}, t);
      uq[i] = std::pow(f.magnitude(static_cast<std::size_t>(i)), q);
    }
    for (std::size_t e = 0; e < ne; ++e) {
      const double r = spec.C * std::pow(eps_list[e], spec.gamma);
      double a = 0.0, s = 0.0;
      for (std::size_t i = 0; i < np; ++i)
        if (dist[i] <= r) {
          a += f.cell();
          s += uq[i] * f.cell();
        }
      area[e] = std::max(area[e], a);
      lq_avg[e] += wt[k] * s;
      i2[e] += wt[k] * std::pow(s, 2.0 / q);
      i3[e] += wt[k] * std::pow(s, 3.0 / q);
    }
    tw += wt[k];
    if (fibres) {
      double st = 0.0;
      for (std::size_t ix = 0; ix < f.nx(); ++ix) {
        double fib = 0.0;
        for (std::size_t iy = 0; iy < f.ny(); ++iy) {
          const std::size_t i = iy * f.nx() + ix;
          if (dist[i] <= opt.fibre_halfwidth) fib += uq[i] * f.dy();
        }
        st += std::pow(fib, 3.0 / q) * f.dx();
      }
      mixed += wt[k] * st;
    }
  }
  std::vector<double> es, as;
  for (std::size_t e = 0; e < ne; ++e) {
    CriterionRow r;
    r.eps = eps_list[e];
    r.radius = spec.C * std::pow(r.eps, spec.gamma);
    r.area = area[e];
    r.lq = lq_avg[e] / tw;
    r.q1 = r.area > 0.0 ? std::pow(r.area, (q - 2.0) / q) / r.eps * i2[e] : 0.0;
    r.q2 = r.area > 0.0 ? std::pow(r.area, (q - 3.0) / q) / std::pow(r.eps, spec.gamma) * i3[e] : 0.0;
    tab.rows.push_back(r);
    es.push_back(r.eps);
    as.push_back(r.area);
  }
  tab.area_slope = fit_slope(es, as);
  tab.q1_monotone = tab.q2_monotone = true;
  for (std::size_t e = 1; e < ne; ++e) {
    if (tab.rows[e].q1 > tab.rows[e - 1].q1) tab.q1_monotone = false;
    if (tab.rows[e].q2 > tab.rows[e - 1].q2) tab.q2_monotone = false;
  }
  if (fibres) tab.mixed_norm = std::cbrt(mixed);
  return tab;
}

// ---- energy ledger ----

double kernel_energy(const VortexSheet& sheet) {
  const std::size_t n = sheet.size();
  const double da = sheet.dalpha();
  const auto c = spectral::coefficients(sheet.gamma());
  // pi sum_{m != 0} |gamma_m|^2 / |m|, Nyquist split evenly between +-N/2
  double spec = 0.0;
  for (std::size_t m = 1; m < n / 2; ++m) spec += 2.0 * std::norm(c[m]) / static_cast<double>(m);
  spec += 2.0 * std::norm(0.5 * c[n / 2]) / static_cast<double>(n / 2);
  spec *= pi;
  const auto fr = build_frame(sheet);
  double diag = 0.0;
  for (std::size_t j = 0; j < n; ++j) diag += sheet.gamma()[j] * sheet.gamma()[j] * std::log(fr.speed[j] * fr.speed[j]);
  const double rem = kernels::remainder_pair_log(sheet.position(), sheet.gamma()) + diag;
  return spec - rem * da * da / (4.0 * pi);
}

double blob_energy(const VortexSheet& sheet, double delta) {
  const double da = sheet.dalpha();
  return -kernels::blob_pair_log(sheet.position(), sheet.gamma(), delta) * da * da / (4.0 * pi);
}

double grid_energy(const VortexSheet& sheet, std::size_t M, double y_max, int gauss_nodes) {
  if (std::abs(sheet.circulation()) > 1e-10)
    throw InvalidArgument("grid_energy: nonzero circulation, the kinetic energy is infinite");
  if (M < 8 || !(y_max > 0.0) || gauss_nodes < 2) throw InvalidArgument("grid_energy: bad quadrature parameters");
  SheetCurve curve(sheet);
  if (!curve.is_graph()) throw InvalidArgument("grid_energy: sheet is not a graph over x");
  std::vector<double> gx, gw;
  gauss_legendre(gauss_nodes, gx, gw);
  static const double graded[] = {0.0, 0.01, 0.03, 0.1, 0.3, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  const double dx = two_pi / static_cast<double>(M);
  std::vector<Vec2> pts;
  std::vector<Side> sides;
  std::vector<double> wts;
  for (std::size_t i = 0; i < M; ++i) {
    const double x = -pi + i * dx;
    const double ys = curve.crossing_height(x);
    if (!(std::abs(ys) < y_max)) throw InvalidArgument("grid_energy: sheet leaves the strip");
    for (int sgn : {1, -1}) {
      const double room = sgn > 0 ? y_max - ys : ys + y_max;
      for (std::size_t b = 0; b + 1 < std::size(graded) && graded[b] < room; ++b) {
        const double a0 = graded[b], a1 = std::min(graded[b + 1], room);
        for (int q = 0; q < gauss_nodes; ++q) {
          const double off = 0.5 * (a0 + a1) + 0.5 * (a1 - a0) * gx[q];
          pts.push_back({x, ys + sgn * off});
          sides.push_back(sgn > 0 ? Side::above : Side::below);
          wts.push_back(0.5 * (a1 - a0) * gw[q] * dx);
        }
        if (a1 >= room) break;
      }
    }
  }
  SheetVelocityField field(sheet);
  const auto u = field.evaluate(pts, sides);
  double e = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) e += wts[i] * norm2(u[i]);
  return e;
}

ReportTable EnergyLedger::table() const {
  ReportTable t{"energy", {"time", "e_kernel", "e_blob", "e_grid"}, {}};
  for (std::size_t i = 0; i < times.size(); ++i) t.rows.push_back({times[i], e_kernel[i], e_blob[i], e_grid[i]});
  return t;
}

EnergyLedger energy_ledger(const Trajectory& traj, const EnergyOptions& opt) {
  if (traj.snapshots.empty()) throw InvalidArgument("energy_ledger: empty trajectory");
  if (opt.stride == 0) throw InvalidArgument("energy_ledger: stride must be positive");
  const auto& S = traj.snapshots;
  const bool zero_circ = std::abs(S.front().circulation()) <= 1e-10;
  if (opt.grid && !zero_circ)
    throw InvalidArgument("energy_ledger: E_grid requested for a sheet with nonzero circulation (infinite energy)");
  EnergyLedger L;
  if (!zero_circ) {
    L.grid_refused = true;
    L.warnings.push_back("nonzero circulation: kinetic energy is infinite, E_kernel is a renormalized value "
                         "and only local balance is meaningful");
  }
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < S.size(); k += opt.stride) idx.push_back(k);
  if (idx.back() != S.size() - 1) idx.push_back(S.size() - 1);
  for (std::size_t k : idx) {
    L.times.push_back(S[k].time());
    L.e_kernel.push_back(kernel_energy(S[k]));
    L.e_blob.push_back(traj.blob.delta > 0.0 ? blob_energy(S[k], traj.blob.delta) : L.e_kernel.back());
    double eg = std::nan("");
    if (opt.grid && std::find(opt.grid_snapshots.begin(), opt.grid_snapshots.end(), k) != opt.grid_snapshots.end())
      eg = grid_energy(S[k], opt.M, opt.y_max, opt.gauss_nodes);
    L.e_grid.push_back(eg);
  }
  auto drift = [](const std::vector<double>& e) {
    double d = 0.0;
    for (double v : e) d = std::max(d, std::abs(v - e.front()));
    return e.front() != 0.0 ? d / std::abs(e.front()) : d;
  };
  L.drift_kernel = drift(L.e_kernel);
  L.drift_blob = drift(L.e_blob);
  return L;
}

}  // namespace sheetlab
