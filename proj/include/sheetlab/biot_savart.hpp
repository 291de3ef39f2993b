#pragma once

#include <vector>

#include "sheetlab/geometry.hpp"

namespace sheetlab {

struct BlobParameter {
  double delta = 0.0;
  BlobParameter() = default;
  explicit BlobParameter(double d) : delta(d) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidArgument("BlobParameter: delta must be >= 0");
  }
};

struct SheetTraces {
  std::vector<Vec2> u_plus, u_minus, u_mean;
  double spectral_tail = 0.0;   // max tail ratio of (x - alpha, h, gamma)
  bool under_resolved = false;  // tail above 1e-10
};

// Direct trapezoid sum of the periodic Biot-Savart integral (blob form for delta > 0).
// With delta = 0 points closer than one node spacing to the curve raise QuadratureError.
std::vector<Vec2> velocity_at_points(const VortexSheet& sheet, const std::vector<Vec2>& points,
                                     BlobParameter blob = {});

// u_+- = U_PV -+ (gamma / (2 |zeta_alpha|)) s with the alternate-point principal value.
SheetTraces one_sided_limits(const VortexSheet& sheet);

// delta = 0: alternate-point PV at the nodes; delta > 0: blob sum over k != j.
std::vector<Vec2> mean_velocity_rhs(const VortexSheet& sheet, BlobParameter blob = {});

// Periodic Cauchy integral I[g](z) = int cot((z - zeta(a))/2) g(a) zeta_a(a) da for a
// smooth complex density on the sheet. Off-sheet values are obtained from the one-sided
// traces PV -+ 2 pi i g by the barycentric form of the trapezoid rule
//   above: (I_h[Phi_+] - 2 pi i Phi(+i oo)) / (I_h[1] - 2 pi i)
//   below: (I_h[Phi_-] + 2 pi i Phi(-i oo)) / (I_h[1] + 2 pi i)
// which stays spectrally accurate arbitrarily close to the curve.
class CauchyIntegral {
 public:
  CauchyIntegral(const VortexSheet& sheet, const SheetFrame& frame, std::vector<cplx> density);

  const std::vector<cplx>& principal_value() const { return pv_; }
  std::vector<cplx> trace(Side side) const;
  cplx at_infinity(Side side) const;
  // Side::automatic resolves each point by the trapezoid winding value far from the
  // nodes and by nearest-point projection close to them.
  std::vector<cplx> evaluate(const std::vector<Vec2>& points, const std::vector<Side>& sides) const;
  std::vector<cplx> evaluate(const std::vector<Vec2>& points, Side side = Side::automatic) const;
  // plain trapezoid sum I_h[g](z) (inaccurate near the curve)
  std::vector<cplx> direct(const std::vector<Vec2>& points) const;

  const VortexSheet& sheet() const { return sheet_; }

 private:
  VortexSheet sheet_;
  SheetCurve curve_;
  std::vector<cplx> g_, za_, pv_;
  cplx moment_;  // int g zeta_a da
  double spacing_;
};

// Velocity of the delta = 0 sheet anywhere off the sheet, including arbitrarily close to it.
class SheetVelocityField {
 public:
  explicit SheetVelocityField(const VortexSheet& sheet);
  std::vector<Vec2> evaluate(const std::vector<Vec2>& points, Side side = Side::automatic) const;
  std::vector<Vec2> evaluate(const std::vector<Vec2>& points, const std::vector<Side>& sides) const;
  Vec2 operator()(const Vec2& p, Side side = Side::automatic) const;
  const SheetTraces& traces() const { return traces_; }
  const SheetFrame& frame() const { return frame_; }
  const VortexSheet& sheet() const { return cauchy_.sheet(); }

 private:
  SheetFrame frame_;
  SheetTraces traces_;
  CauchyIntegral cauchy_;
};

// side of each point by projection (for callers without geometric knowledge)
std::vector<Side> classify_sides(const SheetCurve& curve, const std::vector<Vec2>& points);

}  // namespace sheetlab
