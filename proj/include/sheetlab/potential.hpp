#pragma once

#include <memory>
#include <vector>

#include "sheetlab/biot_savart.hpp"

namespace sheetlab {

// G(dx, dy) = (1/4pi) log(2 (cosh dy - cos dx))
struct PeriodicGreen {
  static double value(double dx, double dy);
  static Vec2 gradient(double dx, double dy);
};

// D(f)(z) = int d_{nu'} G(z - zeta(a')) f(a') |zeta_a|(a') da', trapezoid in a'.
// Points within one node spacing of the curve raise QuadratureError.
double double_layer(const VortexSheet& sheet, const std::vector<double>& f, const Vec2& z);
std::vector<double> double_layer(const VortexSheet& sheet, const std::vector<double>& f,
                                 const std::vector<Vec2>& points);

// On-sheet values: D_+- = D_PV -+ f/2 (alternate-point PV).
struct DoubleLayerTraces {
  std::vector<double> plus, minus, pv;
};
DoubleLayerTraces double_layer_traces(const VortexSheet& sheet, const std::vector<double>& f);

// D(f) anywhere off the sheet via the barycentric Cauchy evaluator.
class DoubleLayerField {
 public:
  DoubleLayerField(const VortexSheet& sheet, const std::vector<double>& f);
  std::vector<double> evaluate(const std::vector<Vec2>& points, Side side = Side::automatic) const;
  std::vector<double> evaluate(const std::vector<Vec2>& points, const std::vector<Side>& sides) const;

 private:
  std::unique_ptr<CauchyIntegral> cauchy_;
};

struct PressureTraces {
  std::vector<double> p_plus, p_minus, p_mean;
  double constant = 0.0;  // additive normalization that was applied
};

enum class PressureForm {
  full,          // -|u|^2/2 - D(Delta)/2 + single layer of d_s(j V)
  double_layer,  // -|u|^2/2 + D(Delta)/2 exactly as printed, for comparison only
};

// Sheet pressure. Off the sheet
//   p = -|u|^2/2 - Re I[jV](z)/(4 pi) - D(Delta)(z)/2 + c,
// with Delta = |u_+|^2 - |u_-|^2, j = -gamma/|zeta_a| the tangential jump and V = U.nu the
// normal velocity of the sheet. The first layer term accounts for the jump of the normal
// derivative of d_t phi across a moving sheet. c makes the node mean of p_mean zero.
class SheetPressure {
 public:
  SheetPressure(const VortexSheet& sheet, const SheetTraces& traces);

  std::vector<double> evaluate(const std::vector<Vec2>& points, Side side = Side::automatic,
                               PressureForm form = PressureForm::full) const;
  std::vector<double> evaluate(const std::vector<Vec2>& points, const std::vector<Side>& sides,
                               PressureForm form = PressureForm::full) const;
  double operator()(const Vec2& p, Side side = Side::automatic) const;
  const PressureTraces& traces() const { return traces_; }
  const SheetVelocityField& velocity() const { return vel_; }

 private:
  SheetVelocityField vel_;
  std::unique_ptr<CauchyIntegral> layer_, delta_;
  PressureTraces traces_;
};

std::pair<std::shared_ptr<SheetPressure>, PressureTraces> sheet_pressure(const VortexSheet& sheet,
                                                                         const SheetTraces& traces);

}  // namespace sheetlab
