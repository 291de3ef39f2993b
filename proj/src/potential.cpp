#include "sheetlab/potential.hpp"

namespace sheetlab {

double PeriodicGreen::value(double dx, double dy) {
  return std::log(2.0 * (std::cosh(dy) - std::cos(dx))) / (4.0 * pi);
}

Vec2 PeriodicGreen::gradient(double dx, double dy) {
  const double den = 4.0 * pi * (std::cosh(dy) - std::cos(dx));
  return {std::sin(dx) / den, std::sinh(dy) / den};
}

namespace {

void check_off_sheet(const VortexSheet& sheet, const std::vector<Vec2>& points, const char* who) {
  const double h = max_node_spacing(sheet);
  std::unique_ptr<SheetCurve> curve;
  for (const auto& p : points) {
    double best = 1e300;
    for (const auto& q : sheet.position()) {
      const double dx = wrap_pi(p.x - q.x), dy = p.y - q.y;
      best = std::min(best, dx * dx + dy * dy);
    }
    if (std::sqrt(best) >= 2.0 * h) continue;
    if (!curve) curve = std::make_unique<SheetCurve>(sheet);
    if (std::abs(curve->project(p).H) < h)
      throw QuadratureError(std::string(who) +
                            ": point within one node spacing of the sheet; request a one-sided value");
  }
}

// D(f) = -Re[(i/4pi) I[f]]
inline double dl_from_cauchy(const cplx& I) { return -(cplx(0.0, 1.0) * I).real() / (4.0 * pi); }

}  // namespace

std::vector<double> double_layer(const VortexSheet& sheet, const std::vector<double>& f,
                                 const std::vector<Vec2>& points) {
  if (f.size() != sheet.size()) throw InvalidArgument("double_layer: density size mismatch");
  check_off_sheet(sheet, points, "double_layer");
  const auto fr = build_frame(sheet);
  std::vector<double> out(points.size());
  const long m = static_cast<long>(points.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < m; ++i) {
    double a = 0.0;
    for (std::size_t j = 0; j < sheet.size(); ++j) {
      const Vec2 w = points[i] - sheet.position()[j];
      // d/dnu' of G(z - zeta') = -grad G . nu'
      a -= dot(PeriodicGreen::gradient(w.x, w.y), fr.normal[j]) * f[j] * fr.dsigma[j];
    }
    out[i] = a;
  }
  return out;
}

double double_layer(const VortexSheet& sheet, const std::vector<double>& f, const Vec2& z) {
  return double_layer(sheet, f, std::vector<Vec2>{z})[0];
}

DoubleLayerTraces double_layer_traces(const VortexSheet& sheet, const std::vector<double>& f) {
  if (f.size() != sheet.size()) throw InvalidArgument("double_layer_traces: density size mismatch");
  const auto fr = build_frame(sheet);
  CauchyIntegral c(sheet, fr, std::vector<cplx>(f.begin(), f.end()));
  DoubleLayerTraces t;
  const std::size_t n = sheet.size();
  t.pv.resize(n);
  t.plus.resize(n);
  t.minus.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    t.pv[j] = dl_from_cauchy(c.principal_value()[j]);
    t.plus[j] = t.pv[j] - 0.5 * f[j];
    t.minus[j] = t.pv[j] + 0.5 * f[j];
  }
  return t;
}

DoubleLayerField::DoubleLayerField(const VortexSheet& sheet, const std::vector<double>& f) {
  if (f.size() != sheet.size()) throw InvalidArgument("DoubleLayerField: density size mismatch");
  cauchy_ = std::make_unique<CauchyIntegral>(sheet, build_frame(sheet),
                                             std::vector<cplx>(f.begin(), f.end()));
}

std::vector<double> DoubleLayerField::evaluate(const std::vector<Vec2>& points, Side side) const {
  return evaluate(points, std::vector<Side>(points.size(), side));
}

std::vector<double> DoubleLayerField::evaluate(const std::vector<Vec2>& points,
                                               const std::vector<Side>& sides) const {
  const auto I = cauchy_->evaluate(points, sides);
  std::vector<double> d(I.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = dl_from_cauchy(I[i]);
  return d;
}

SheetPressure::SheetPressure(const VortexSheet& sheet, const SheetTraces& traces) : vel_(sheet) {
  const std::size_t n = sheet.size();
  if (traces.u_plus.size() != n || traces.u_minus.size() != n || traces.u_mean.size() != n)
    throw InvalidArgument("sheet_pressure: traces do not match the sheet");
  const auto& fr = vel_.frame();
  std::vector<cplx> jv(n), dd(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double jump = -sheet.gamma()[j] / fr.speed[j];
    const double V = dot(traces.u_mean[j], fr.normal[j]);
    jv[j] = jump * V;
    dd[j] = norm2(traces.u_plus[j]) - norm2(traces.u_minus[j]);
  }
  layer_ = std::make_unique<CauchyIntegral>(sheet, fr, jv);
  delta_ = std::make_unique<CauchyIntegral>(sheet, fr, dd);

  const auto lp = layer_->trace(Side::above), lm = layer_->trace(Side::below);
  const auto dp = delta_->trace(Side::above), dm = delta_->trace(Side::below);
  traces_.p_plus.resize(n);
  traces_.p_minus.resize(n);
  traces_.p_mean.resize(n);
  double mean = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    traces_.p_plus[j] = -0.5 * norm2(traces.u_plus[j]) - lp[j].real() / (4.0 * pi) -
                        0.5 * dl_from_cauchy(dp[j]);
    traces_.p_minus[j] = -0.5 * norm2(traces.u_minus[j]) - lm[j].real() / (4.0 * pi) -
                         0.5 * dl_from_cauchy(dm[j]);
    traces_.p_mean[j] = 0.5 * (traces_.p_plus[j] + traces_.p_minus[j]);
    mean += traces_.p_mean[j];
  }
  traces_.constant = -mean / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    traces_.p_plus[j] += traces_.constant;
    traces_.p_minus[j] += traces_.constant;
    traces_.p_mean[j] += traces_.constant;
  }
}

std::vector<double> SheetPressure::evaluate(const std::vector<Vec2>& points, Side side,
                                            PressureForm form) const {
  return evaluate(points, std::vector<Side>(points.size(), side), form);
}

std::vector<double> SheetPressure::evaluate(const std::vector<Vec2>& points,
                                            const std::vector<Side>& sides, PressureForm form) const {
  // automatic sides resolve identically in all three evaluations (same geometry)
  const auto& sd = sides;
  const auto u = vel_.evaluate(points, sd);
  const auto D = delta_->evaluate(points, sd);
  std::vector<double> p(points.size());
  if (form == PressureForm::full) {
    const auto L = layer_->evaluate(points, sd);
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] = -0.5 * norm2(u[i]) - L[i].real() / (4.0 * pi) - 0.5 * dl_from_cauchy(D[i]) +
             traces_.constant;
  } else {
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] = -0.5 * norm2(u[i]) + 0.5 * dl_from_cauchy(D[i]) + traces_.constant;
  }
  return p;
}

double SheetPressure::operator()(const Vec2& p, Side side) const {
  return evaluate(std::vector<Vec2>{p}, side)[0];
}

std::pair<std::shared_ptr<SheetPressure>, PressureTraces> sheet_pressure(const VortexSheet& sheet,
                                                                         const SheetTraces& traces) {
  auto sp = std::make_shared<SheetPressure>(sheet, traces);
  return {sp, sp->traces()};
}

}  // namespace sheetlab
