#include "sheetlab/biot_savart.hpp"

#include <algorithm>
#include <limits>
#include <memory>

#include "sheetlab/kernels.hpp"

namespace sheetlab {

namespace {

constexpr std::size_t kChunk = 8192;

double min_node_distance(const std::vector<Vec2>& nodes, const Vec2& p) {
  double best = std::numeric_limits<double>::max();
  for (const auto& q : nodes) {
    const double dx = wrap_pi(p.x - q.x), dy = p.y - q.y;
    best = std::min(best, dx * dx + dy * dy);
  }
  return std::sqrt(best);
}

}  // namespace

std::vector<Vec2> velocity_at_points(const VortexSheet& sheet, const std::vector<Vec2>& points,
                                     BlobParameter blob) {
  if (blob.delta == 0.0) {
    const double h = max_node_spacing(sheet);
    std::unique_ptr<SheetCurve> curve;
    for (const auto& p : points) {
      const double d = min_node_distance(sheet.position(), p);
      if (d >= 2.0 * h) continue;
      if (!curve) curve = std::make_unique<SheetCurve>(sheet);
      if (std::abs(curve->project(p).H) < h)
        throw QuadratureError("velocity_at_points: point (" + std::to_string(p.x) + ", " +
                              std::to_string(p.y) +
                              ") lies within one node spacing of the sheet; use one-sided limits "
                              "or the near-sheet evaluator");
    }
  }
  return kernels::point_velocity(sheet.position(), sheet.gamma(), blob.delta, points);
}

SheetTraces one_sided_limits(const VortexSheet& sheet) {
  const auto fr = build_frame(sheet);
  SheetTraces t;
  t.u_mean = kernels::node_velocity(sheet.position(), sheet.gamma(), 0.0,
                                    kernels::PairMode::opposite_parity);
  const std::size_t n = sheet.size();
  t.u_plus.resize(n);
  t.u_minus.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2 jump = (sheet.gamma()[j] / (2.0 * fr.speed[j])) * fr.tangent[j];
    t.u_plus[j] = t.u_mean[j] - jump;
    t.u_minus[j] = t.u_mean[j] + jump;
  }
  t.spectral_tail = std::max({spectral::tail_ratio(sheet.x_periodic()),
                              spectral::tail_ratio(sheet.heights()),
                              spectral::tail_ratio(sheet.gamma())});
  t.under_resolved = t.spectral_tail > 1e-10;
  return t;
}

std::vector<Vec2> mean_velocity_rhs(const VortexSheet& sheet, BlobParameter blob) {
  if (blob.delta == 0.0)
    return kernels::node_velocity(sheet.position(), sheet.gamma(), 0.0,
                                  kernels::PairMode::opposite_parity);
  return kernels::node_velocity(sheet.position(), sheet.gamma(), blob.delta,
                                kernels::PairMode::all_but_self);
}

CauchyIntegral::CauchyIntegral(const VortexSheet& sheet, const SheetFrame& frame,
                               std::vector<cplx> density)
    : sheet_(sheet), curve_(sheet), g_(std::move(density)) {
  const std::size_t n = sheet.size();
  if (g_.size() != n) throw InvalidArgument("CauchyIntegral: density size mismatch");
  const double da = sheet.dalpha();
  za_.resize(n);
  std::vector<cplx> w(n);
  moment_ = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    za_[j] = to_cplx(frame.zeta_alpha[j]);
    w[j] = g_[j] * za_[j] * da;
    moment_ += w[j];
  }
  kernels::cot_pv(sheet.position(), w, 1, pv_);
  spacing_ = max_node_spacing(sheet);
}

std::vector<cplx> CauchyIntegral::trace(Side side) const {
  if (side == Side::automatic) throw InvalidArgument("CauchyIntegral::trace: side required");
  const cplx jump = (side == Side::above ? -1.0 : 1.0) * cplx(0.0, two_pi);
  std::vector<cplx> t(pv_.size());
  for (std::size_t j = 0; j < t.size(); ++j) t[j] = pv_[j] + jump * g_[j];
  return t;
}

cplx CauchyIntegral::at_infinity(Side side) const {
  if (side == Side::automatic) throw InvalidArgument("CauchyIntegral::at_infinity: side required");
  return (side == Side::above ? cplx(0.0, -1.0) : cplx(0.0, 1.0)) * moment_;
}

std::vector<cplx> CauchyIntegral::evaluate(const std::vector<Vec2>& points, Side side) const {
  return evaluate(points, std::vector<Side>(points.size(), side));
}

std::vector<cplx> CauchyIntegral::evaluate(const std::vector<Vec2>& points,
                                           const std::vector<Side>& sides) const {
  if (sides.size() != points.size()) throw InvalidArgument("CauchyIntegral: sides/points size mismatch");
  const std::size_t n = sheet_.size();
  const double da = sheet_.dalpha();
  std::vector<cplx> w(3 * n);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = pv_[j] * za_[j] * da;
    w[n + j] = g_[j] * za_[j] * da;
    w[2 * n + j] = za_[j] * da;
  }
  const cplx tpi(0.0, two_pi);
  const cplx inf_up = at_infinity(Side::above), inf_dn = at_infinity(Side::below);
  std::vector<cplx> out(points.size());
  std::vector<cplx> s;
  for (std::size_t start = 0; start < points.size(); start += kChunk) {
    const std::size_t stop = std::min(points.size(), start + kChunk);
    const std::vector<Vec2> sub(points.begin() + start, points.begin() + stop);
    kernels::cot_sums(sheet_.position(), w, 3, sub, s);
    const long m = static_cast<long>(sub.size());
    bool on_sheet = false;
#pragma omp parallel for schedule(dynamic, 64) reduction(|| : on_sheet)
    for (long i = 0; i < m; ++i) {
      const cplx A = s[3 * i], B = s[3 * i + 1], C = s[3 * i + 2];
      Side sd = sides[start + i];
      if (sd == Side::automatic) {
        if (min_node_distance(sheet_.position(), sub[i]) > 3.0 * spacing_) {
          sd = C.imag() < 0.0 ? Side::above : Side::below;
        } else {
          const double H = curve_.project(sub[i]).H;
          if (H == 0.0) on_sheet = true;
          sd = H > 0.0 ? Side::above : Side::below;
        }
      }
      if (sd == Side::above)
        out[start + i] = (A - tpi * B - tpi * inf_up) / (C - tpi);
      else
        out[start + i] = (A + tpi * B + tpi * inf_dn) / (C + tpi);
    }
    if (on_sheet) throw QuadratureError("CauchyIntegral: evaluation point lies on the sheet");
  }
  return out;
}

std::vector<cplx> CauchyIntegral::direct(const std::vector<Vec2>& points) const {
  const std::size_t n = sheet_.size();
  std::vector<cplx> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = g_[j] * za_[j] * sheet_.dalpha();
  std::vector<cplx> out;
  kernels::cot_sums(sheet_.position(), w, 1, points, out);
  return out;
}

namespace {

std::vector<cplx> velocity_density(const VortexSheet& sheet, const SheetFrame& fr) {
  std::vector<cplx> g(sheet.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = sheet.gamma()[j] / to_cplx(fr.zeta_alpha[j]);
  return g;
}

}  // namespace

SheetVelocityField::SheetVelocityField(const VortexSheet& sheet)
    : frame_(build_frame(sheet)), traces_(one_sided_limits(sheet)),
      cauchy_(sheet, frame_, velocity_density(sheet, frame_)) {}

std::vector<Vec2> SheetVelocityField::evaluate(const std::vector<Vec2>& points, Side side) const {
  return evaluate(points, std::vector<Side>(points.size(), side));
}

std::vector<Vec2> SheetVelocityField::evaluate(const std::vector<Vec2>& points,
                                               const std::vector<Side>& sides) const {
  const auto phi = cauchy_.evaluate(points, sides);
  std::vector<Vec2> u(phi.size());
  // conj(u) = Phi / (4 pi i)
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = to_vec(std::conj(phi[i] / cplx(0.0, 4.0 * pi)));
  return u;
}

Vec2 SheetVelocityField::operator()(const Vec2& p, Side side) const {
  return evaluate(std::vector<Vec2>{p}, side)[0];
}

std::vector<Side> classify_sides(const SheetCurve& curve, const std::vector<Vec2>& points) {
  std::vector<Side> s(points.size());
  const long m = static_cast<long>(points.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long i = 0; i < m; ++i) s[i] = curve.project(points[i]).H >= 0.0 ? Side::above : Side::below;
  return s;
}

}  // namespace sheetlab
