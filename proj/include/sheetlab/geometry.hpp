#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "sheetlab/core.hpp"
#include "sheetlab/spectral.hpp"

namespace sheetlab {

// Periodic sheet zeta(alpha) = (x(alpha), h(alpha)) with x(alpha + 2pi) = x(alpha) + 2pi,
// sampled on alpha_j = -pi + j*dalpha, carrying circulation density gamma_j.
class VortexSheet {
 public:
  VortexSheet() = default;
  VortexSheet(std::vector<Vec2> position, std::vector<double> gamma, double time,
              bool finite_energy = false);

  // graph sheet x = alpha, h = h(alpha)
  static VortexSheet graph(std::size_t n, const std::function<double(double)>& h,
                           const std::function<double(double)>& gamma, double time = 0.0,
                           bool finite_energy = false);

  std::size_t size() const { return pos_.size(); }
  double dalpha() const { return two_pi / static_cast<double>(pos_.size()); }
  double alpha(std::size_t j) const { return -pi + static_cast<double>(j) * dalpha(); }
  std::vector<double> alphas() const;
  const std::vector<Vec2>& position() const { return pos_; }
  const std::vector<double>& gamma() const { return gamma_; }
  double time() const { return time_; }
  bool finite_energy() const { return finite_energy_; }
  double circulation() const;

  // periodic parts x - alpha and h as separate arrays
  std::vector<double> x_periodic() const;
  std::vector<double> heights() const;

  VortexSheet with_time(double t) const;
  VortexSheet with_positions(std::vector<Vec2> pos, double t) const;
  VortexSheet with_gamma(std::vector<double> gamma) const;

 private:
  std::vector<Vec2> pos_;
  std::vector<double> gamma_;
  double time_ = 0.0;
  bool finite_energy_ = false;
};

// Frame data per node.
struct SheetFrame {
  std::vector<Vec2> tangent;    // s
  std::vector<Vec2> normal;     // nu = perp(s)
  std::vector<double> speed;    // |zeta_alpha|
  std::vector<double> dsigma;   // |zeta_alpha| dalpha
  std::vector<double> jacobian; // J (= |zeta_alpha|)
  std::vector<Vec2> zeta_alpha;
};

SheetFrame build_frame(const VortexSheet& sheet);

struct SheetMeasure {
  std::vector<double> mu;
  double total() const;
};

// mu_j = -(d_t r)_j . nu_j |zeta_alpha|_j dalpha, d_t r by centred difference.
SheetMeasure sheet_measure(const VortexSheet& prev, const VortexSheet& mid, const VortexSheet& next);
// graph-sheet form -d_t h dalpha (requires x(alpha) = alpha)
SheetMeasure sheet_measure_graph(const VortexSheet& prev, const VortexSheet& mid,
                                 const VortexSheet& next);

struct Projection {
  double alpha = 0.0;     // foot parameter
  Vec2 foot;              // zeta(alpha)
  Vec2 normal;            // unit normal at the foot
  double H = 0.0;         // signed distance, > 0 on the +nu side
  int iterations = 0;
  bool ambiguous = false; // Newton failed or competing feet at equal distance
};

// Trigonometric interpolant of a sheet, for off-node evaluation.
class SheetCurve {
 public:
  SheetCurve() = default;
  explicit SheetCurve(const VortexSheet& sheet);

  // zeta, zeta_alpha, zeta_alphaalpha at arbitrary alpha
  void eval(double alpha, Vec2& z, Vec2& z1, Vec2& z2) const;
  Vec2 point(double alpha) const;
  // nearest point: coarse node search, then Newton (tol 1e-12, <= 50 iterations)
  // from the two best local minima; ties broken by smallest |H|
  Projection project(const Vec2& p) const;
  // height of the graph crossing x = x0 (requires x(alpha) increasing); alpha returned through out
  double crossing_height(double x0, double* alpha_out = nullptr) const;
  bool is_graph() const { return graph_; }
  const VortexSheet& sheet() const { return sheet_; }

 private:
  VortexSheet sheet_;
  spectral::TrigSeries xs_, hs_;
  bool graph_ = false;
};

// Quintic smoothstep profile: 1 on [-2,2], 0 outside [-3,3].
double eta(double s);
double eta_prime(double s);

struct CutoffValue {
  double chi = 1.0;
  Vec2 grad;          // grad_x chi
  double dt = 0.0;    // d_t chi
  double H = 0.0;
  bool flagged = false; // ambiguous projection: chi reported as 1
};

// chi_eps = 1 - eta(H/eps); snapshots at t-dt, t, t+dt supply d_t H by centred differences.
class CutoffFamily {
 public:
  CutoffFamily(const VortexSheet& sheet, double epsilon);
  CutoffFamily(const VortexSheet& prev, const VortexSheet& mid, const VortexSheet& next,
               double epsilon);

  double epsilon() const { return eps_; }
  double H(const Vec2& p) const;
  double dHdt(const Vec2& p) const;
  CutoffValue operator()(const Vec2& p) const;
  const SheetCurve& curve() const { return mid_; }

 private:
  SheetCurve mid_, prev_, next_;
  bool has_time_ = false;
  double dt_ = 0.0;
  double eps_ = 0.0;
};

// Band-limited resampling of a sheet on factor*N nodes.
VortexSheet upsample(const VortexSheet& sheet, std::size_t factor);

// node-to-node spacing max_j |zeta_{j+1} - zeta_j|
double max_node_spacing(const VortexSheet& sheet);

}  // namespace sheetlab
