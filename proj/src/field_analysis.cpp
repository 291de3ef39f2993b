#include <algorithm>
#include <limits>

#include "sheetlab/field.hpp"
#include "sheetlab/kernels.hpp"
#include "sheetlab/spectral.hpp"

namespace sheetlab {

namespace {

struct Spectrum {
  std::size_t ny = 0, nx = 0, nxh = 0;
  double kx0 = 0.0, ky0 = 0.0;  // fundamental wavenumbers
  std::vector<cplx> c;

  double kx(std::size_t i) const { return kx0 * static_cast<double>(i); }
  double ky(std::size_t j) const {
    const long jj = j <= ny / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(ny);
    return ky0 * static_cast<double>(jj);
  }
  // wavenumbers with the Nyquist entries zeroed (odd operators)
  double kx_odd(std::size_t i) const { return i == nx / 2 ? 0.0 : kx(i); }
  double ky_odd(std::size_t j) const { return j == ny / 2 ? 0.0 : ky(j); }
  double kmag(std::size_t j, std::size_t i) const { return std::hypot(kx(i), ky(j)); }
};

Spectrum forward(const GridField& f, const double* data) {
  Spectrum s;
  s.ny = f.ny();
  s.nx = f.nx();
  s.nxh = f.nx() / 2 + 1;
  s.kx0 = two_pi / f.domain().lx;
  s.ky0 = two_pi / f.domain().ly;
  s.c.resize(s.ny * s.nxh);
  spectral::forward2d(s.ny, s.nx, data, s.c.data());
  return s;
}

std::vector<double> backward(Spectrum s) {
  std::vector<double> out(s.nx * s.ny);
  spectral::backward2d(s.ny, s.nx, s.c.data(), out.data());
  return out;
}

std::vector<double> product(const GridField& f, std::size_t a, std::size_t b) {
  std::vector<double> p(f.points());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = f.comp(a)[i] * f.comp(b)[i];
  return p;
}

std::vector<double> derivative_of(const GridField& like, const std::vector<double>& data, int axis) {
  Spectrum s = forward(like, data.data());
  for (std::size_t j = 0; j < s.ny; ++j)
    for (std::size_t i = 0; i < s.nxh; ++i) {
      const double k = axis == 0 ? s.kx_odd(i) : s.ky_odd(j);
      s.c[j * s.nxh + i] *= cplx(0.0, k);
    }
  return backward(std::move(s));
}

double lp_norm_pow(const std::vector<double>& mag, double p, double cell) {
  double s = 0.0;
  for (double m : mag) s += std::pow(m, p);
  return s * cell;
}

std::vector<double> tensor_frobenius(const double* t11, const double* t12, const double* t22, std::size_t n) {
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i)
    m[i] = std::sqrt(t11[i] * t11[i] + 2.0 * t12[i] * t12[i] + t22[i] * t22[i]);
  return m;
}

}  // namespace

std::vector<double> spectral_derivative(const GridField& f, std::size_t c, int axis) {
  if (c >= f.components()) throw InvalidArgument("spectral_derivative: bad component");
  return derivative_of(f, std::vector<double>(f.comp(c), f.comp(c) + f.points()), axis);
}

double plancherel_defect(const GridField& f) {
  double grid = 0.0, spec = 0.0;
  for (std::size_t c = 0; c < f.components(); ++c) {
    for (std::size_t i = 0; i < f.points(); ++i) grid += f.comp(c)[i] * f.comp(c)[i];
    const Spectrum s = forward(f, f.comp(c));
    for (std::size_t j = 0; j < s.ny; ++j)
      for (std::size_t i = 0; i < s.nxh; ++i) {
        const double w = (i == 0 || i == s.nx / 2) ? 1.0 : 2.0;
        spec += w * std::norm(s.c[j * s.nxh + i]);
      }
  }
  grid *= f.cell();
  spec *= f.cell() / static_cast<double>(f.points());
  return grid > 0.0 ? std::abs(grid - spec) / grid : std::abs(spec);
}

GridField riesz_pressure(const GridField& u, RieszOptions opt) {
  if (u.components() != 2) throw InvalidArgument("riesz_pressure: velocity field required");
  if (u.domain().kind == DomainKind::strip && !opt.allow_strip)
    throw InvalidArgument("riesz_pressure: strip field given without the windowing/periodization flag");
  Spectrum a11 = forward(u, product(u, 0, 0).data());
  Spectrum a12 = forward(u, product(u, 0, 1).data());
  Spectrum a22 = forward(u, product(u, 1, 1).data());
  Spectrum p = a11;
  for (std::size_t j = 0; j < p.ny; ++j)
    for (std::size_t i = 0; i < p.nxh; ++i) {
      const std::size_t q = j * p.nxh + i;
      const double kx = p.kx(i), ky = p.ky(j);
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) {
        p.c[q] = 0.0;
        continue;
      }
      const double cx = p.kx_odd(i), cy = p.ky_odd(j);
      p.c[q] = -(kx * kx * a11.c[q] + 2.0 * cx * cy * a12.c[q] + ky * ky * a22.c[q]) / k2;
    }
  GridField out(u.domain(), u.nx(), u.ny(), 1, backward(std::move(p)), std::vector<std::string>{"pressure"});
  // exact zero mean
  double m = 0.0;
  for (double v : out.data()) m += v;
  m /= static_cast<double>(out.points());
  for (double& v : out.data()) v -= m;
  return out;
}

double DyadicPartition::phi(int q, double k) {
  if (k <= 0.0) return 0.0;
  const double t = std::log2(k) - static_cast<double>(q);
  if (std::abs(t) >= 1.0) return 0.0;
  const double c = std::cos(0.5 * pi * t);
  return c * c;
}

double DyadicPartition::low(double k, int qmax) const {
  double s = 0.0;
  for (int q = 0; q <= qmax; ++q) s += phi(q, k);
  return 1.0 - s;
}

int DyadicPartition::resolve_qmax(const GridField& u) const {
  if (q_max >= 0) return q_max;
  const double kx = two_pi / u.domain().lx * static_cast<double>(u.nx() / 2);
  const double ky = two_pi / u.domain().ly * static_cast<double>(u.ny() / 2);
  return std::max(0, static_cast<int>(std::ceil(std::log2(std::hypot(kx, ky)))));
}

namespace {

// Delta_q u for every component; q = -1 gives the low block
std::vector<std::vector<double>> block(const GridField& u, const std::vector<Spectrum>& S, int q, int qmax,
                                       const DyadicPartition& part) {
  std::vector<std::vector<double>> out;
  for (const auto& s0 : S) {
    Spectrum s = s0;
    for (std::size_t j = 0; j < s.ny; ++j)
      for (std::size_t i = 0; i < s.nxh; ++i) {
        const double k = s.kmag(j, i);
        s.c[j * s.nxh + i] *= (q < 0 ? part.low(k, qmax) : DyadicPartition::phi(q, k));
      }
    out.push_back(backward(std::move(s)));
  }
  (void)u;
  return out;
}

}  // namespace

std::vector<FluxRow> dyadic_flux(const GridField& u, const DyadicPartition& part) {
  const int qmax = part.resolve_qmax(u);
  std::vector<Spectrum> S;
  for (std::size_t c = 0; c < u.components(); ++c) S.push_back(forward(u, u.comp(c)));
  const double kres = std::min(pi / u.dx(), pi / u.dy());
  std::vector<FluxRow> rows(static_cast<std::size_t>(qmax) + 1);
#pragma omp parallel for schedule(dynamic)
  for (int q = 0; q <= qmax; ++q) {
    const auto b = block(u, S, q, qmax, part);
    std::vector<double> mag(u.points(), 0.0);
    for (const auto& comp : b)
      for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += comp[i] * comp[i];
    for (auto& m : mag) m = std::sqrt(m);
    const double l3 = lp_norm_pow(mag, 3.0, u.cell());
    FluxRow r;
    r.q = q;
    r.norm3 = std::cbrt(l3);
    r.flux = std::ldexp(l3, q);
    r.resolved = std::ldexp(1.0, q + 1) <= kres;
    rows[static_cast<std::size_t>(q)] = r;
  }
  return rows;
}

double dyadic_reconstruction_error(const GridField& u, const DyadicPartition& part) {
  const int qmax = part.resolve_qmax(u);
  std::vector<Spectrum> S;
  for (std::size_t c = 0; c < u.components(); ++c) S.push_back(forward(u, u.comp(c)));
  auto sum = block(u, S, -1, qmax, part);
  for (int q = 0; q <= qmax; ++q) {
    const auto b = block(u, S, q, qmax, part);
    for (std::size_t c = 0; c < b.size(); ++c)
      for (std::size_t i = 0; i < b[c].size(); ++i) sum[c][i] += b[c][i];
  }
  double err = 0.0;
  for (std::size_t c = 0; c < u.components(); ++c)
    for (std::size_t i = 0; i < u.points(); ++i) err = std::max(err, std::abs(sum[c][i] - u.comp(c)[i]));
  return err;
}

FluxWindow flux_window(const std::vector<FluxRow>& rows, int octaves) {
  int last = -1;
  for (const auto& r : rows)
    if (r.resolved) last = std::max(last, r.q);
  if (last < 0 || last - octaves + 1 < 0) throw InvalidArgument("flux_window: not enough resolved shells");
  FluxWindow w;
  w.q_last = last;
  w.q_first = last - octaves + 1;
  double mn = std::numeric_limits<double>::max(), mx = 0.0, before = 0.0;
  for (const auto& r : rows) {
    if (r.q >= w.q_first && r.q <= w.q_last) {
      mn = std::min(mn, r.flux);
      mx = std::max(mx, r.flux);
    }
    if (r.q <= w.q_first) before = std::max(before, r.flux);
  }
  w.variation = mn > 0.0 ? mx / mn : std::numeric_limits<double>::infinity();
  w.drop = mx > 0.0 ? before / mx : std::numeric_limits<double>::infinity();
  return w;
}

StructureResult structure_function(const GridField& u, const std::vector<Offset>& offsets) {
  const long nx = static_cast<long>(u.nx()), ny = static_cast<long>(u.ny());
  for (const auto& o : offsets)
    if (std::abs(o.dx) > nx / 2 || std::abs(o.dy) > ny / 2)
      throw InvalidArgument("structure_function: offset exceeds half the domain");
  StructureResult res;
  res.rows.resize(offsets.size());
  const long no = static_cast<long>(offsets.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < no; ++k) {
    const Offset o = offsets[static_cast<std::size_t>(k)];
    double s = 0.0;
    for (long iy = 0; iy < ny; ++iy) {
      const long jy = ((iy - o.dy) % ny + ny) % ny;
      for (long ix = 0; ix < nx; ++ix) {
        const long jx = ((ix - o.dx) % nx + nx) % nx;
        double d2 = 0.0;
        for (std::size_t c = 0; c < u.components(); ++c) {
          const double d = u.comp(c)[jy * nx + jx] - u.comp(c)[iy * nx + ix];
          d2 += d * d;
        }
        s += d2 * std::sqrt(d2);
      }
    }
    StructureRow r;
    r.off = o;
    r.length = std::hypot(o.dx * u.dx(), o.dy * u.dy());
    r.s3 = s * u.cell();
    r.s3_over_y = r.length > 0.0 ? r.s3 / r.length : 0.0;
    res.rows[static_cast<std::size_t>(k)] = r;
  }
  res.fit_min = 4.0 * std::min(u.dx(), u.dy());
  res.fit_max = std::min(u.domain().lx, u.domain().ly) / 8.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& r : res.rows) {
    if (r.length < res.fit_min - 1e-12 || r.length > res.fit_max + 1e-12 || !(r.s3 > 0.0)) continue;
    const double lx = std::log(r.length), ly = std::log(r.s3);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  res.fit_points = m;
  if (m >= 2) res.zeta3 = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return res;
}

MollifierStencil mollifier_stencil(const GridField& like, const MollifierSpec& spec) {
  const double h = std::max(like.dx(), like.dy());
  if (!(spec.delta >= 2.0 * h * (1.0 - 1e-12)))
    throw InvalidArgument("mollifier: delta below resolution (needs >= 2 grid spacings)");
  const int rx = static_cast<int>(std::ceil(spec.delta / like.dx()));
  const int ry = static_cast<int>(std::ceil(spec.delta / like.dy()));
  if (2 * rx >= static_cast<int>(like.nx()) || 2 * ry >= static_cast<int>(like.ny()))
    throw InvalidArgument("mollifier: support wider than the domain");
  MollifierStencil st;
  double mass = 0.0;
  for (int j = -ry; j <= ry; ++j)
    for (int i = -rx; i <= rx; ++i) {
      const double r = std::hypot(i * like.dx(), j * like.dy()) / spec.delta;
      const double w = MollifierSpec::profile(r);
      if (w <= 0.0) continue;
      st.dx.push_back(i);
      st.dy.push_back(j);
      st.w.push_back(w);
      mass += w;
    }
  for (auto& w : st.w) w /= mass;
  return st;
}

namespace {

kernels::Stencil as_kernel(const MollifierStencil& m) { return {m.dx, m.dy, m.w}; }

std::vector<double> convolve(const GridField& like, const double* in, const kernels::Stencil& st) {
  std::vector<double> out(like.points());
  kernels::stencil_convolve(in, like.ny(), like.nx(), st, out.data());
  return out;
}

}  // namespace

GridField mollify(const GridField& f, const MollifierSpec& spec) {
  const auto st = as_kernel(mollifier_stencil(f, spec));
  GridField out(f.domain(), f.nx(), f.ny(), f.components(), f.units());
  for (std::size_t c = 0; c < f.components(); ++c) {
    const auto v = convolve(f, f.comp(c), st);
    std::copy(v.begin(), v.end(), out.comp(c));
  }
  return out;
}

MollifyResult mollify_and_commutators(const GridField& u, const MollifierSpec& spec) {
  if (u.components() != 2) throw InvalidArgument("mollify_and_commutators: velocity field required");
  const auto st = as_kernel(mollifier_stencil(u, spec));
  MollifyResult r;
  r.u_delta = mollify(u, spec);
  const std::size_t n = u.points();
  r.r_delta = GridField(u.domain(), u.nx(), u.ny(), 3);
  kernels::stencil_commutator(u.comp(0), u.comp(1), u.ny(), u.nx(), st, r.r_delta.comp(0),
                              r.r_delta.comp(1), r.r_delta.comp(2));
  r.ud_ud = GridField(u.domain(), u.nx(), u.ny(), 3);
  std::vector<double> e11(n), e12(n), e22(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = r.u_delta.comp(0)[i], b = r.u_delta.comp(1)[i];
    r.ud_ud.comp(0)[i] = a * a;
    r.ud_ud.comp(1)[i] = a * b;
    r.ud_ud.comp(2)[i] = b * b;
    const double d1 = u.comp(0)[i] - a, d2 = u.comp(1)[i] - b;
    e11[i] = d1 * d1;
    e12[i] = d1 * d2;
    e22[i] = d2 * d2;
  }
  r.r_norm = std::pow(lp_norm_pow(tensor_frobenius(r.r_delta.comp(0), r.r_delta.comp(1),
                                                   r.r_delta.comp(2), n), 1.5, u.cell()), 2.0 / 3.0);
  r.remainder_norm =
      std::pow(lp_norm_pow(tensor_frobenius(e11.data(), e12.data(), e22.data(), n), 1.5, u.cell()), 2.0 / 3.0);
  return r;
}

namespace {

void check_series(const FieldSeries& s, const char* who) {
  if (s.fields.size() != s.times.size()) throw InvalidArgument(std::string(who) + ": times/fields size mismatch");
  for (std::size_t k = 1; k < s.fields.size(); ++k)
    if (!s.fields[k].same_grid(s.fields[0])) throw InvalidArgument(std::string(who) + ": mismatched grids");
  for (std::size_t k = 1; k < s.times.size(); ++k)
    if (!(s.times[k] > s.times[k - 1])) throw InvalidArgument(std::string(who) + ": times must increase");
}

}  // namespace

std::vector<MomentumRow> momentum_residual(const FieldSeries& u, const MollifierSpec& spec,
                                           RieszOptions opt) {
  check_series(u, "momentum_residual");
  if (u.fields.size() < 3) throw InvalidArgument("momentum_residual: need at least 3 snapshots");
  const double dt = u.times[1] - u.times[0];
  for (std::size_t k = 1; k + 1 < u.times.size(); ++k)
    if (std::abs((u.times[k + 1] - u.times[k]) - dt) > 1e-9 * std::max(1.0, dt))
      throw InvalidArgument("momentum_residual: snapshots must be uniformly spaced");
  const auto& g = u.fields[0];
  const auto st = as_kernel(mollifier_stencil(g, spec));
  const std::size_t n = g.points();
  std::vector<MomentumRow> rows;
  for (std::size_t k = 1; k + 1 < u.fields.size(); ++k) {
    const auto& f = u.fields[k];
    std::vector<double> R1(n), R2(n);
    for (std::size_t c = 0; c < 2; ++c) {
      const auto up = convolve(g, u.fields[k + 1].comp(c), st);
      const auto um = convolve(g, u.fields[k - 1].comp(c), st);
      auto& R = c == 0 ? R1 : R2;
      for (std::size_t i = 0; i < n; ++i) R[i] = (up[i] - um[i]) / (2.0 * dt);
    }
    const auto m11 = convolve(g, product(f, 0, 0).data(), st);
    const auto m12 = convolve(g, product(f, 0, 1).data(), st);
    const auto m22 = convolve(g, product(f, 1, 1).data(), st);
    const auto d11x = derivative_of(g, m11, 0), d12y = derivative_of(g, m12, 1);
    const auto d12x = derivative_of(g, m12, 0), d22y = derivative_of(g, m22, 1);
    const auto p = riesz_pressure(f, opt);
    const auto pd = convolve(g, p.comp(0), st);
    const auto px = derivative_of(g, pd, 0), py = derivative_of(g, pd, 1);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = R1[i] + d11x[i] + d12y[i] + px[i];
      const double b = R2[i] + d12x[i] + d22y[i] + py[i];
      s += a * a + b * b;
    }
    rows.push_back({u.times[k], std::sqrt(s * g.cell())});
  }
  return rows;
}

TestFunction TestFunction::bump(double cx, double cy, double R, double a, double b) {
  if (!(R > 0.0)) throw InvalidArgument("TestFunction::bump: radius must be positive");
  TestFunction f;
  auto shape = [=](double x, double y, double& val, Vec2& grad) {
    const double dx = x - cx, dy = y - cy;
    const double r2 = (dx * dx + dy * dy) / (R * R);
    if (r2 >= 1.0) {
      val = 0.0;
      grad = {};
      return;
    }
    val = std::exp(1.0 - 1.0 / (1.0 - r2));
    // d/dr2 exp(1 - 1/(1-r2)) = -val / (1-r2)^2
    const double dv = -val / ((1.0 - r2) * (1.0 - r2));
    grad = {dv * 2.0 * dx / (R * R), dv * 2.0 * dy / (R * R)};
  };
  f.value = [=](double x, double y, double t) {
    double v;
    Vec2 g;
    shape(x, y, v, g);
    return v * (a + b * t);
  };
  f.grad = [=](double x, double y, double t) {
    double v;
    Vec2 g;
    shape(x, y, v, g);
    return (a + b * t) * g;
  };
  f.dt = [=](double x, double y, double) {
    double v;
    Vec2 g;
    shape(x, y, v, g);
    return v * b;
  };
  f.xmin = cx - R;
  f.xmax = cx + R;
  f.ymin = cy - R;
  f.ymax = cy + R;
  return f;
}

TestFunction TestFunction::periodic_bump(double cx, double cy, double kappa, double a, double b) {
  if (!(kappa > 0.0)) throw InvalidArgument("TestFunction::periodic_bump: kappa must be positive");
  TestFunction f;
  auto shape = [=](double x, double y) { return std::exp(kappa * (std::cos(x - cx) + std::cos(y - cy) - 2.0)); };
  f.value = [=](double x, double y, double t) { return shape(x, y) * (a + b * t); };
  f.grad = [=](double x, double y, double t) {
    const double v = -kappa * shape(x, y) * (a + b * t);
    return Vec2{v * std::sin(x - cx), v * std::sin(y - cy)};
  };
  f.dt = [=](double x, double y, double) { return shape(x, y) * b; };
  f.full = true;
  return f;
}

TestFunction TestFunction::constant(double c) {
  TestFunction f;
  f.value = [=](double, double, double) { return c; };
  f.grad = [](double, double, double) { return Vec2{}; };
  f.dt = [](double, double, double) { return 0.0; };
  f.full = true;
  return f;
}

EnergyBalance energy_balance_residual(const FieldSeries& u, const FieldSeries& p,
                                      const TestFunction& phi, double t0, double t1, double floor_rel) {
  check_series(u, "energy_balance_residual");
  check_series(p, "energy_balance_residual");
  if (u.times.size() != p.times.size()) throw InvalidArgument("energy_balance_residual: u/p series differ");
  for (std::size_t k = 0; k < u.times.size(); ++k)
    if (u.times[k] != p.times[k] || !u.fields[k].same_grid(p.fields[k]))
      throw InvalidArgument("energy_balance_residual: u/p series differ");
  if (u.fields.empty()) throw InvalidArgument("energy_balance_residual: empty series");
  const auto& g = u.fields[0];
  const auto& d = g.domain();
  if (d.kind == DomainKind::strip) {
    const double band = 4.0 * g.dy();
    if (phi.full || phi.ymin < -d.ymax() + band || phi.ymax > d.ymax() - band)
      throw InvalidArgument("energy_balance_residual: test function support exceeds the domain");
  }
  if (!phi.full && (phi.xmin < d.x0 - 1e-12 || phi.xmax > d.x0 + d.lx + 1e-12 ||
                    (d.kind == DomainKind::torus && (phi.ymin < d.y0 - 1e-12 || phi.ymax > d.y0 + d.ly + 1e-12))))
    throw InvalidArgument("energy_balance_residual: test function support exceeds the domain");
  if (!(t1 > t0)) throw InvalidArgument("energy_balance_residual: need t'' > t'");
  auto index_of = [&](double t) {
    for (std::size_t k = 0; k < u.times.size(); ++k)
      if (std::abs(u.times[k] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return k;
    throw InvalidArgument("energy_balance_residual: t' and t'' must be snapshot times");
  };
  const std::size_t k0 = index_of(t0), k1 = index_of(t1);

  struct Slice {
    double e = 0, e_abs = 0, dt_term = 0, dt_abs = 0, flux = 0, flux_abs = 0;
  };
  auto slice = [&](std::size_t k) {
    Slice s;
    const auto& f = u.fields[k];
    const auto& pr = p.fields[k];
    const double t = u.times[k];
    for (std::size_t iy = 0; iy < f.ny(); ++iy)
      for (std::size_t ix = 0; ix < f.nx(); ++ix) {
        const double x = f.x(ix), y = f.y(iy);
        if (!phi.full && (x < phi.xmin || x > phi.xmax || y < phi.ymin || y > phi.ymax)) continue;
        const Vec2 v = f.vec(iy, ix);
        const double q = norm2(v);
        const double ph = phi.value(x, y, t);
        const double pt = phi.dt(x, y, t);
        const Vec2 gr = phi.grad(x, y, t);
        const double fl = (q + 2.0 * pr.at(0, iy, ix)) * dot(v, gr);
        s.e += q * ph;
        s.e_abs += q * std::abs(ph);
        s.dt_term += q * pt;
        s.dt_abs += std::abs(q * pt);
        s.flux += fl;
        s.flux_abs += std::abs(fl);
      }
    const double c = f.cell();
    s.e *= c;
    s.e_abs *= c;
    s.dt_term *= c;
    s.dt_abs *= c;
    s.flux *= c;
    s.flux_abs *= c;
    return s;
  };
  std::vector<Slice> S;
  for (std::size_t k = k0; k <= k1; ++k) S.push_back(slice(k));
  double int_dt = 0, int_dt_abs = 0, int_flux = 0, int_flux_abs = 0;
  for (std::size_t m = 0; m + 1 < S.size(); ++m) {
    const double h = u.times[k0 + m + 1] - u.times[k0 + m];
    int_dt += 0.5 * h * (S[m].dt_term + S[m + 1].dt_term);
    int_dt_abs += 0.5 * h * (S[m].dt_abs + S[m + 1].dt_abs);
    int_flux += 0.5 * h * (S[m].flux + S[m + 1].flux);
    int_flux_abs += 0.5 * h * (S[m].flux_abs + S[m + 1].flux_abs);
  }
  EnergyBalance eb;
  eb.lhs = S.back().e - S.front().e - int_dt;
  eb.rhs = int_flux;
  eb.scale = S.back().e_abs + S.front().e_abs + int_dt_abs + int_flux_abs;
  const double den = std::max({std::abs(eb.lhs), std::abs(eb.rhs), floor_rel * eb.scale});
  eb.residual = den > 0.0 ? std::abs(eb.lhs - eb.rhs) / den : 0.0;
  return eb;
}

}  // namespace sheetlab
