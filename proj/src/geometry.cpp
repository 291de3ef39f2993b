#include "sheetlab/geometry.hpp"

#include <algorithm>
#include <limits>

namespace sheetlab {

VortexSheet::VortexSheet(std::vector<Vec2> position, std::vector<double> gamma, double time,
                         bool finite_energy)
    : pos_(std::move(position)), gamma_(std::move(gamma)), time_(time),
      finite_energy_(finite_energy) {
  const std::size_t n = pos_.size();
  if (n < 8 || !is_pow2(n)) throw InvalidArgument("VortexSheet: N must be a power of two >= 8");
  if (gamma_.size() != n) throw InvalidArgument("VortexSheet: gamma/position size mismatch");
  for (std::size_t j = 0; j < n; ++j)
    if (!std::isfinite(pos_[j].x) || !std::isfinite(pos_[j].y) || !std::isfinite(gamma_[j]))
      throw InvalidArgument("VortexSheet: non-finite sample at node " + std::to_string(j));
  if (!std::isfinite(time_)) throw InvalidArgument("VortexSheet: non-finite time");
  if (finite_energy_ && std::abs(circulation()) > 1e-12)
    throw InvalidArgument("VortexSheet: finite_energy requires zero total circulation");
}

VortexSheet VortexSheet::graph(std::size_t n, const std::function<double(double)>& h,
                               const std::function<double(double)>& gamma, double time,
                               bool finite_energy) {
  std::vector<Vec2> pos(n);
  std::vector<double> g(n);
  const double da = two_pi / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = -pi + static_cast<double>(j) * da;
    pos[j] = {a, h(a)};
    g[j] = gamma(a);
  }
  return VortexSheet(std::move(pos), std::move(g), time, finite_energy);
}

std::vector<double> VortexSheet::alphas() const {
  std::vector<double> a(size());
  for (std::size_t j = 0; j < size(); ++j) a[j] = alpha(j);
  return a;
}

double VortexSheet::circulation() const {
  double s = 0.0;
  for (double g : gamma_) s += g;
  return s * dalpha();
}

std::vector<double> VortexSheet::x_periodic() const {
  std::vector<double> v(size());
  for (std::size_t j = 0; j < size(); ++j) v[j] = pos_[j].x - alpha(j);
  return v;
}

std::vector<double> VortexSheet::heights() const {
  std::vector<double> v(size());
  for (std::size_t j = 0; j < size(); ++j) v[j] = pos_[j].y;
  return v;
}

VortexSheet VortexSheet::with_time(double t) const {
  VortexSheet s = *this;
  s.time_ = t;
  return s;
}

VortexSheet VortexSheet::with_positions(std::vector<Vec2> pos, double t) const {
  return VortexSheet(std::move(pos), gamma_, t, finite_energy_);
}

VortexSheet VortexSheet::with_gamma(std::vector<double> gamma) const {
  return VortexSheet(pos_, std::move(gamma), time_, false);
}

SheetFrame build_frame(const VortexSheet& sheet) {
  const std::size_t n = sheet.size();
  const auto xa = spectral::derivative(sheet.x_periodic());
  const auto ha = spectral::derivative(sheet.heights());
  SheetFrame f;
  f.tangent.resize(n);
  f.normal.resize(n);
  f.speed.resize(n);
  f.dsigma.resize(n);
  f.jacobian.resize(n);
  f.zeta_alpha.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2 za{1.0 + xa[j], ha[j]};
    const double sp = norm(za);
    if (!(sp >= 1e-10)) throw InvalidArgument("build_frame: degenerate parametrization |zeta_alpha| < 1e-10");
    f.zeta_alpha[j] = za;
    f.speed[j] = sp;
    f.tangent[j] = (1.0 / sp) * za;
    f.normal[j] = perp(f.tangent[j]);
    f.dsigma[j] = sp * sheet.dalpha();
    f.jacobian[j] = sp;
  }
  return f;
}

double SheetMeasure::total() const {
  double s = 0.0;
  for (double m : mu) s += m;
  return s;
}

namespace {

double centred_dt(const VortexSheet& prev, const VortexSheet& mid, const VortexSheet& next) {
  if (prev.size() != mid.size() || next.size() != mid.size())
    throw InvalidArgument("sheet_measure: snapshots on different alpha grids");
  const double dt = 0.5 * (next.time() - prev.time());
  if (!(dt > 0.0)) throw InvalidArgument("sheet_measure: snapshot times must increase");
  if (std::abs((mid.time() - prev.time()) - dt) > 1e-9 * std::max(1.0, dt))
    throw InvalidArgument("sheet_measure: snapshots not uniformly spaced in time");
  return dt;
}

}  // namespace

SheetMeasure sheet_measure(const VortexSheet& prev, const VortexSheet& mid, const VortexSheet& next) {
  const double dt = centred_dt(prev, mid, next);
  const auto fr = build_frame(mid);
  SheetMeasure m;
  m.mu.resize(mid.size());
  for (std::size_t j = 0; j < mid.size(); ++j) {
    const Vec2 rt = (1.0 / (2.0 * dt)) * (next.position()[j] - prev.position()[j]);
    m.mu[j] = -dot(rt, fr.normal[j]) * fr.dsigma[j];
  }
  return m;
}

SheetMeasure sheet_measure_graph(const VortexSheet& prev, const VortexSheet& mid,
                                 const VortexSheet& next) {
  const double dt = centred_dt(prev, mid, next);
  for (const auto* s : {&prev, &mid, &next})
    for (std::size_t j = 0; j < s->size(); ++j)
      if (std::abs(s->position()[j].x - s->alpha(j)) > 1e-6)
        throw InvalidArgument("sheet_measure_graph: sheet is not in graph form x = alpha");
  SheetMeasure m;
  m.mu.resize(mid.size());
  for (std::size_t j = 0; j < mid.size(); ++j)
    m.mu[j] = -(next.position()[j].y - prev.position()[j].y) / (2.0 * dt) * mid.dalpha();
  return m;
}

SheetCurve::SheetCurve(const VortexSheet& sheet)
    : sheet_(sheet), xs_(sheet.x_periodic()), hs_(sheet.heights()) {
  const auto xa = spectral::derivative(sheet.x_periodic());
  graph_ = std::all_of(xa.begin(), xa.end(), [](double v) { return 1.0 + v > 1e-8; });
}

void SheetCurve::eval(double alpha, Vec2& z, Vec2& z1, Vec2& z2) const {
  double x, x1, x2, h, h1, h2;
  xs_.eval(alpha, x, x1, x2);
  hs_.eval(alpha, h, h1, h2);
  z = {alpha + x, h};
  z1 = {1.0 + x1, h1};
  z2 = {x2, h2};
}

Vec2 SheetCurve::point(double alpha) const {
  return {alpha + xs_(alpha), hs_(alpha)};
}

namespace {

struct NewtonResult {
  double alpha;
  Vec2 foot, z1;
  double dist;
  bool ok;
  int it;
};

}  // namespace

Projection SheetCurve::project(const Vec2& p) const {
  const auto& pos = sheet_.position();
  const std::size_t n = pos.size();
  std::vector<double> d2(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = wrap_pi(p.x - pos[j].x);
    const double dy = p.y - pos[j].y;
    d2[j] = dx * dx + dy * dy;
  }
  // local minima of the node distance (cyclic), best two
  std::size_t best[2] = {n, n};
  for (std::size_t j = 0; j < n; ++j) {
    const double l = d2[(j + n - 1) % n], r = d2[(j + 1) % n];
    if (d2[j] <= l && d2[j] <= r) {
      if (best[0] == n || d2[j] < d2[best[0]]) {
        best[1] = best[0];
        best[0] = j;
      } else if (best[1] == n || d2[j] < d2[best[1]]) {
        best[1] = j;
      }
    }
  }
  if (best[0] == n) best[0] = static_cast<std::size_t>(std::min_element(d2.begin(), d2.end()) - d2.begin());

  auto newton = [&](std::size_t j0) {
    // unwrap the target into the period of node j0
    const Vec2 q{pos[j0].x + wrap_pi(p.x - pos[j0].x), p.y};
    double a = sheet_.alpha(j0);
    Vec2 z, z1, z2;
    NewtonResult r{a, {}, {}, 0.0, false, 0};
    const double cap = 2.0 * sheet_.dalpha();
    for (int it = 1; it <= 50; ++it) {
      eval(a, z, z1, z2);
      const Vec2 d = z - q;
      const double g = dot(d, z1);
      double gp = norm2(z1) + dot(d, z2);
      if (gp <= 0.0) gp = norm2(z1);
      double step = g / gp;
      step = std::clamp(step, -cap, cap);
      a -= step;
      r.it = it;
      if (std::abs(step) < 1e-12) {
        r.ok = true;
        break;
      }
    }
    eval(a, z, z1, z2);
    r.alpha = a;
    r.foot = z;
    r.z1 = z1;
    r.dist = norm(z - q);
    return std::pair{r, q};
  };

  Projection out;
  auto [r0, q0] = newton(best[0]);
  NewtonResult r = r0;
  Vec2 q = q0;
  if (best[1] != n && d2[best[1]] <= std::pow(std::sqrt(d2[best[0]]) + max_node_spacing(sheet_), 2)) {
    auto [r1, q1] = newton(best[1]);
    const double sep = std::abs(wrap_pi(r1.alpha - r0.alpha));
    if (r1.ok && sep > 1e-6) {
      if (std::abs(r1.dist - r0.dist) <= 1e-12) out.ambiguous = true;
      if (r1.dist < r0.dist) {
        r = r1;
        q = q1;
      }
    }
  }
  if (!r.ok) out.ambiguous = true;
  out.alpha = r.alpha;
  out.foot = r.foot;
  out.normal = perp((1.0 / norm(r.z1)) * r.z1);
  out.H = dot(q - r.foot, out.normal);
  out.iterations = r.it;
  return out;
}

double SheetCurve::crossing_height(double x0, double* alpha_out) const {
  if (!graph_) throw InvalidArgument("crossing_height: sheet is not a graph over x");
  const auto& pos = sheet_.position();
  std::size_t jb = 0;
  double bd = std::numeric_limits<double>::max();
  for (std::size_t j = 0; j < pos.size(); ++j) {
    const double d = std::abs(wrap_pi(x0 - pos[j].x));
    if (d < bd) {
      bd = d;
      jb = j;
    }
  }
  const double target = pos[jb].x + wrap_pi(x0 - pos[jb].x);
  double a = sheet_.alpha(jb);
  Vec2 z, z1, z2;
  for (int it = 0; it < 60; ++it) {
    eval(a, z, z1, z2);
    const double step = (z.x - target) / z1.x;
    a -= step;
    if (std::abs(step) < 1e-14) break;
  }
  if (alpha_out) *alpha_out = a;
  return hs_(a);
}

double eta(double s) {
  const double a = std::abs(s);
  if (a <= 2.0) return 1.0;
  if (a >= 3.0) return 0.0;
  const double t = a - 2.0;
  return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double eta_prime(double s) {
  const double a = std::abs(s);
  if (a <= 2.0 || a >= 3.0) return 0.0;
  const double t = a - 2.0;
  const double d = 30.0 * t * t * (1.0 - t) * (1.0 - t);
  return s > 0 ? -d : d;
}

CutoffFamily::CutoffFamily(const VortexSheet& sheet, double epsilon) : mid_(sheet), eps_(epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("cutoff_family: epsilon must be positive");
}

CutoffFamily::CutoffFamily(const VortexSheet& prev, const VortexSheet& mid, const VortexSheet& next,
                           double epsilon)
    : mid_(mid), prev_(prev), next_(next), has_time_(true), eps_(epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("cutoff_family: epsilon must be positive");
  dt_ = 0.5 * (next.time() - prev.time());
  if (!(dt_ > 0.0)) throw InvalidArgument("cutoff_family: snapshot times must increase");
}

double CutoffFamily::H(const Vec2& p) const { return mid_.project(p).H; }

double CutoffFamily::dHdt(const Vec2& p) const {
  if (!has_time_) return 0.0;
  return (next_.project(p).H - prev_.project(p).H) / (2.0 * dt_);
}

CutoffValue CutoffFamily::operator()(const Vec2& p) const {
  CutoffValue v;
  const auto pr = mid_.project(p);
  v.H = pr.H;
  if (pr.ambiguous) {
    v.flagged = true;
    return v;
  }
  const double s = pr.H / eps_;
  v.chi = 1.0 - eta(s);
  const double ep = eta_prime(s);
  if (ep != 0.0) {
    v.grad = (-ep / eps_) * pr.normal;
    v.dt = -ep / eps_ * dHdt(p);
  }
  return v;
}

VortexSheet upsample(const VortexSheet& sheet, std::size_t factor) {
  if (factor == 0 || !is_pow2(factor)) throw InvalidArgument("upsample: factor must be a power of two");
  const auto xp = spectral::upsample(sheet.x_periodic(), factor);
  const auto hp = spectral::upsample(sheet.heights(), factor);
  const auto gp = spectral::upsample(sheet.gamma(), factor);
  const std::size_t m = xp.size();
  const double da = two_pi / static_cast<double>(m);
  std::vector<Vec2> pos(m);
  for (std::size_t j = 0; j < m; ++j) pos[j] = {-pi + static_cast<double>(j) * da + xp[j], hp[j]};
  return VortexSheet(std::move(pos), gp, sheet.time(), false);
}

double max_node_spacing(const VortexSheet& sheet) {
  const auto& pos = sheet.position();
  const std::size_t n = pos.size();
  double mx = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    Vec2 b = pos[(j + 1) % n];
    if (j + 1 == n) b.x += two_pi;
    mx = std::max(mx, norm(b - pos[j]));
  }
  return mx;
}

}  // namespace sheetlab
