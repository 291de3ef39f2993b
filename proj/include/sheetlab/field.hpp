#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sheetlab/core.hpp"

namespace sheetlab {

enum class DomainKind { torus, strip };

// Uniform periodic-in-x sampling; the first sample sits at (x0, y0), spacing lx/nx, ly/ny.
struct Domain {
  DomainKind kind = DomainKind::torus;
  double x0 = 0.0, y0 = 0.0, lx = two_pi, ly = two_pi;

  static Domain torus() { return {}; }
  // 2pi x [-ymax, ymax], x from -pi, cell-centred in y so no row sits on y = 0
  static Domain strip(double ymax, std::size_t ny);
  double ymax() const { return kind == DomainKind::strip ? 0.5 * ly : 0.0; }
};

class GridField {
 public:
  GridField() = default;
  GridField(Domain dom, std::size_t nx, std::size_t ny, std::size_t ncomp,
            std::vector<std::string> units = {});
  GridField(Domain dom, std::size_t nx, std::size_t ny, std::size_t ncomp, std::vector<double> data,
            std::vector<std::string> units = {});

  static GridField vector(Domain dom, std::size_t nx, std::size_t ny,
                          const std::function<Vec2(double, double)>& f);
  static GridField scalar(Domain dom, std::size_t nx, std::size_t ny,
                          const std::function<double(double, double)>& f);

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t components() const { return nc_; }
  std::size_t points() const { return nx_ * ny_; }
  const Domain& domain() const { return dom_; }
  const std::vector<std::string>& units() const { return units_; }

  double dx() const { return dom_.lx / static_cast<double>(nx_); }
  double dy() const { return dom_.ly / static_cast<double>(ny_); }
  double cell() const { return dx() * dy(); }
  double x(std::size_t ix) const { return dom_.x0 + static_cast<double>(ix) * dx(); }
  double y(std::size_t iy) const { return dom_.y0 + static_cast<double>(iy) * dy(); }

  double* comp(std::size_t c) { return data_.data() + c * points(); }
  const double* comp(std::size_t c) const { return data_.data() + c * points(); }
  double& at(std::size_t c, std::size_t iy, std::size_t ix) { return data_[c * points() + iy * nx_ + ix]; }
  double at(std::size_t c, std::size_t iy, std::size_t ix) const { return data_[c * points() + iy * nx_ + ix]; }
  Vec2 vec(std::size_t iy, std::size_t ix) const { return {at(0, iy, ix), at(1, iy, ix)}; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  // pointwise Euclidean magnitude over components
  double magnitude(std::size_t i) const;
  double max_magnitude() const;
  bool same_grid(const GridField& o) const;
  // max boundary-row magnitude / max interior magnitude (strip fields)
  double boundary_ratio() const;

 private:
  Domain dom_;
  std::size_t nx_ = 0, ny_ = 0, nc_ = 0;
  std::vector<double> data_;
  std::vector<std::string> units_;
  void validate() const;
};

// Strip decay check used for sheet-induced velocity fields; throws when violated.
void check_strip_decay(const GridField& u, double tol);

// flat little-endian float64, component-major then row-major, plus <stem>.hdr
void write_grid(const GridField& f, const std::filesystem::path& stem);
GridField read_grid(const std::filesystem::path& stem);

// key,value CSV table
using Table = std::vector<std::pair<std::string, double>>;
void write_table(const Table& t, const std::filesystem::path& file);

// ---- spectral helpers on the grid ----
// d/dx (axis 0) or d/dy (axis 1) of component c, spectral, Nyquist zeroed
std::vector<double> spectral_derivative(const GridField& f, std::size_t c, int axis);
// sum over grid of |f|^2 cell vs. Parseval sum of the spectrum; returns |difference| / value
double plancherel_defect(const GridField& f);

struct RieszOptions {
  // strip fields are periodized in y as they stand (no padding, no taper); they must be
  // decayed at |y| = Y_max (see check_strip_decay)
  bool allow_strip = false;
};

// p^(xi) = -(xi_l xi_k / |xi|^2) (u_l u_k)^(xi), p^(0) = 0, i.e. -Lap p = d_l d_k (u_l u_k)
GridField riesz_pressure(const GridField& u, RieszOptions opt = {});

struct DyadicPartition {
  int q_max = -1;  // -1: choose from the grid so every resolved |xi| >= 1 is covered
  // cos^2 taper in log2|xi|, one octave overlap
  static double phi(int q, double k);
  double low(double k, int qmax) const;
  int resolve_qmax(const GridField& u) const;
};

struct FluxRow {
  int q = 0;
  double flux = 0.0;     // 2^q ||Delta_q u||_3^3
  double norm3 = 0.0;    // ||Delta_q u||_3
  bool resolved = false; // 2^{q+1} <= min(k_max)
};

std::vector<FluxRow> dyadic_flux(const GridField& u, const DyadicPartition& part = {});
// max-norm of u - (low block + sum_q Delta_q u)
double dyadic_reconstruction_error(const GridField& u, const DyadicPartition& part = {});
// plateau / decay indicators over the last `octaves` resolved shells:
//   variation = max/min of the flux inside the window,
//   drop = (largest flux at or below the window start) / (largest flux inside the window)
struct FluxWindow {
  int q_first = 0, q_last = 0;
  double variation = 0.0, drop = 0.0;
};
FluxWindow flux_window(const std::vector<FluxRow>& rows, int octaves = 3);

struct Offset {
  int dx = 0, dy = 0;  // integer grid shifts
};
struct StructureRow {
  Offset off;
  double length = 0.0;  // |y|
  double s3 = 0.0;      // int |u(x - y) - u(x)|^3 dx
  double s3_over_y = 0.0;
};
struct StructureResult {
  std::vector<StructureRow> rows;
  double zeta3 = std::nan("");  // log-log slope over the fitting range
  double fit_min = 0.0, fit_max = 0.0;
  int fit_points = 0;
};
// fit range: 4 cells <= |y| <= L/8 (L = smaller domain side)
StructureResult structure_function(const GridField& u, const std::vector<Offset>& offsets);

struct MollifierSpec {
  double delta = 0.0;
  // radially symmetric (1 - |y/delta|^2)^4, discretely normalized
  static double profile(double r) { return r < 1.0 ? std::pow(1.0 - r * r, 4) : 0.0; }
};

// discrete stencil of h_delta on the grid (mass 1)
struct MollifierStencil {
  std::vector<int> dx, dy;
  std::vector<double> w;
};
MollifierStencil mollifier_stencil(const GridField& like, const MollifierSpec& spec);
GridField mollify(const GridField& f, const MollifierSpec& spec);

struct MollifyResult {
  GridField u_delta;
  GridField r_delta;       // components 11, 12, 22
  GridField ud_ud;         // u_delta (x) u_delta, components 11, 12, 22
  double r_norm = 0.0;     // ||r_delta||_{L^{3/2}} (Frobenius)
  double remainder_norm = 0.0;  // ||(u - u_delta) (x) (u - u_delta)||_{L^{3/2}}
};
MollifyResult mollify_and_commutators(const GridField& u, const MollifierSpec& spec);

struct FieldSeries {
  std::vector<double> times;
  std::vector<GridField> fields;
};

struct MomentumRow {
  double time = 0.0, residual = 0.0;
};
// ||d_t u_delta + div (u (x) u)_delta + grad p_delta||_2 at interior snapshots
std::vector<MomentumRow> momentum_residual(const FieldSeries& u, const MollifierSpec& spec,
                                           RieszOptions opt = {});

struct TestFunction {
  std::function<double(double, double, double)> value;
  std::function<Vec2(double, double, double)> grad;
  std::function<double(double, double, double)> dt;
  // support box; full = true for functions that are not compactly supported (torus only)
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool full = false;

  // smooth bump exp(1 - 1/(1 - r^2)) of radius R around (cx, cy), times (a + b t)
  static TestFunction bump(double cx, double cy, double R, double a = 1.0, double b = 0.0);
  // exp(kappa (cos(x - cx) + cos(y - cy) - 2)) (a + b t): smooth and 2pi-periodic, so grid
  // sums converge geometrically (torus only)
  static TestFunction periodic_bump(double cx, double cy, double kappa, double a = 1.0, double b = 0.0);
  static TestFunction constant(double c);
};

struct EnergyBalance {
  double lhs = 0.0, rhs = 0.0, residual = 0.0, scale = 0.0;
};
// residual = |lhs - rhs| / max(|lhs|, |rhs|, floor_rel * scale), where scale sums the
// absolute values of every integrand
EnergyBalance energy_balance_residual(const FieldSeries& u, const FieldSeries& p,
                                      const TestFunction& phi, double t0, double t1,
                                      double floor_rel = 1e-6);

}  // namespace sheetlab
