#include "sheetlab/kernels.hpp"

#include <omp.h>

#include <algorithm>

namespace sheetlab::kernels {

namespace {

// half-angle data of a point set; heights are taken relative to yc so that the
// addition formulas stay well conditioned for nearby pairs
struct HalfAngles {
  std::vector<double> sx, cx, sy, cy;
  explicit HalfAngles(const std::vector<Vec2>& p, double yc) : sx(p.size()), cx(p.size()), sy(p.size()), cy(p.size()) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      sx[j] = std::sin(0.5 * p[j].x);
      cx[j] = std::cos(0.5 * p[j].x);
      sy[j] = std::sinh(0.5 * (p[j].y - yc));
      cy[j] = std::cosh(0.5 * (p[j].y - yc));
    }
  }
};

double centre(const std::vector<Vec2>& nodes) {
  double s = 0.0;
  for (const auto& p : nodes) s += p.y;
  return nodes.empty() ? 0.0 : s / static_cast<double>(nodes.size());
}

// sn = sin(dx/2), cn = cos(dx/2), sh = sinh(dy/2), ch = cosh(dy/2) for dx = x_t - x_j
struct Pair {
  double sn, cn, sh, ch;
};
inline Pair pair(const HalfAngles& t, std::size_t i, const HalfAngles& s, std::size_t j) {
  return {t.sx[i] * s.cx[j] - t.cx[i] * s.sx[j], t.cx[i] * s.cx[j] + t.sx[i] * s.sx[j],
          t.sy[i] * s.cy[j] - t.cy[i] * s.sy[j], t.cy[i] * s.cy[j] - t.sy[i] * s.sy[j]};
}

inline bool use_pair(PairMode mode, std::size_t i, std::size_t j) {
  if (mode == PairMode::all_but_self) return i != j;
  return ((i ^ j) & 1u) != 0;
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

std::vector<Vec2> node_velocity(const std::vector<Vec2>& nodes, const std::vector<double>& gamma,
                                double delta, PairMode mode) {
  const std::size_t n = nodes.size();
  const HalfAngles h(nodes, centre(nodes));
  const double d2 = delta * delta;
  const double wmode = mode == PairMode::opposite_parity ? 2.0 : 1.0;
  const double scale = wmode * (two_pi / static_cast<double>(n)) / (4.0 * pi);
  std::vector<Vec2> u(n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    double a1 = 0.0, a2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!use_pair(mode, i, j)) continue;
      const Pair p = pair(h, i, h, j);
      const double inv = gamma[j] / (2.0 * (p.sh * p.sh + p.sn * p.sn) + d2);
      a1 -= 2.0 * p.sh * p.ch * inv;
      a2 += 2.0 * p.sn * p.cn * inv;
    }
    u[i] = {scale * a1, scale * a2};
  }
  return u;
}

std::vector<Vec2> point_velocity(const std::vector<Vec2>& nodes, const std::vector<double>& gamma,
                                 double delta, const std::vector<Vec2>& targets) {
  const std::size_t n = nodes.size(), nt = targets.size();
  const double yc = centre(nodes);
  const HalfAngles h(nodes, yc), t(targets, yc);
  const double d2 = delta * delta;
  const double scale = (two_pi / static_cast<double>(n)) / (4.0 * pi);
  std::vector<Vec2> u(nt);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < nt; ++i) {
    double a1 = 0.0, a2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const Pair p = pair(t, i, h, j);
      const double inv = gamma[j] / (2.0 * (p.sh * p.sh + p.sn * p.sn) + d2);
      a1 -= 2.0 * p.sh * p.ch * inv;
      a2 += 2.0 * p.sn * p.cn * inv;
    }
    u[i] = {scale * a1, scale * a2};
  }
  return u;
}

void cot_sums(const std::vector<Vec2>& nodes, const std::vector<cplx>& w, std::size_t K,
              const std::vector<Vec2>& targets, std::vector<cplx>& out) {
  const std::size_t n = nodes.size(), nt = targets.size();
  if (w.size() != K * n) throw InvalidArgument("cot_sums: weight array has wrong size");
  const double yc = centre(nodes);
  const HalfAngles h(nodes, yc), t(targets, yc);
  out.assign(nt * K, cplx(0.0));
  // split weights into re/im planes for the inner loop
  std::vector<double> wr(K * n), wi(K * n);
  for (std::size_t q = 0; q < K * n; ++q) {
    wr[q] = w[q].real();
    wi[q] = w[q].imag();
  }
#pragma omp parallel
  {
    std::vector<double> ar(K), ai(K);
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < nt; ++i) {
      std::fill(ar.begin(), ar.end(), 0.0);
      std::fill(ai.begin(), ai.end(), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        const Pair p = pair(t, i, h, j);
        const double inv = 1.0 / (p.sh * p.sh + p.sn * p.sn);
        // cot((a + ib)/2) = (sin a - i sinh b) / (cosh b - cos a)
        const double kr = p.sn * p.cn * inv, ki = -p.sh * p.ch * inv;
        for (std::size_t m = 0; m < K; ++m) {
          const double xr = wr[m * n + j], xi = wi[m * n + j];
          ar[m] += kr * xr - ki * xi;
          ai[m] += kr * xi + ki * xr;
        }
      }
      for (std::size_t m = 0; m < K; ++m) out[i * K + m] = {ar[m], ai[m]};
    }
  }
}

void cot_pv(const std::vector<Vec2>& nodes, const std::vector<cplx>& w, std::size_t K,
            std::vector<cplx>& out) {
  const std::size_t n = nodes.size();
  if (w.size() != K * n) throw InvalidArgument("cot_pv: weight array has wrong size");
  const HalfAngles h(nodes, centre(nodes));
  out.assign(n * K, cplx(0.0));
#pragma omp parallel
  {
    std::vector<cplx> acc(K);
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(acc.begin(), acc.end(), cplx(0.0));
      for (std::size_t j = (i + 1) & 1u; j < n; j += 2) {
        const Pair p = pair(h, i, h, j);
        const double inv = 1.0 / (p.sh * p.sh + p.sn * p.sn);
        const cplx k(p.sn * p.cn * inv, -p.sh * p.ch * inv);
        for (std::size_t m = 0; m < K; ++m) acc[m] += k * w[m * n + j];
      }
      for (std::size_t m = 0; m < K; ++m) out[i * K + m] = 2.0 * acc[m];
    }
  }
}

double blob_pair_log(const std::vector<Vec2>& nodes, const std::vector<double>& gamma, double delta) {
  const std::size_t n = nodes.size();
  const HalfAngles h(nodes, centre(nodes));
  const double d2 = delta * delta;
  std::vector<double> row(n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    double a = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Pair p = pair(h, i, h, j);
      a += gamma[j] * std::log(4.0 * (p.sh * p.sh + p.sn * p.sn) + 2.0 * d2);
    }
    row[i] = gamma[i] * a;
  }
  double s = 0.0;
  for (double r : row) s += r;
  return s;
}

double remainder_pair_log(const std::vector<Vec2>& nodes, const std::vector<double>& gamma) {
  const std::size_t n = nodes.size();
  const HalfAngles h(nodes, centre(nodes));
  const double da = two_pi / static_cast<double>(n);
  std::vector<double> sa(n), ca(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = -pi + static_cast<double>(j) * da;
    sa[j] = std::sin(0.5 * a);
    ca[j] = std::cos(0.5 * a);
  }
  std::vector<double> row(n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    double a = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Pair p = pair(h, i, h, j);
      const double s = sa[i] * ca[j] - ca[i] * sa[j];
      a += gamma[j] * std::log((p.sh * p.sh + p.sn * p.sn) / (s * s));
    }
    row[i] = gamma[i] * a;
  }
  double s = 0.0;
  for (double r : row) s += r;
  return s;
}

void stencil_convolve(const double* in, std::size_t ny, std::size_t nx, const Stencil& st, double* out) {
  const long NY = static_cast<long>(ny), NX = static_cast<long>(nx);
#pragma omp parallel for schedule(static)
  for (long iy = 0; iy < NY; ++iy) {
    for (long ix = 0; ix < NX; ++ix) {
      double a = 0.0;
      for (std::size_t s = 0; s < st.size(); ++s) {
        const long jy = ((iy - st.dy[s]) % NY + NY) % NY;
        const long jx = ((ix - st.dx[s]) % NX + NX) % NX;
        a += st.w[s] * in[jy * NX + jx];
      }
      out[iy * NX + ix] = a;
    }
  }
}

void stencil_commutator(const double* u1, const double* u2, std::size_t ny, std::size_t nx,
                        const Stencil& st, double* r11, double* r12, double* r22) {
  const long NY = static_cast<long>(ny), NX = static_cast<long>(nx);
#pragma omp parallel for schedule(static)
  for (long iy = 0; iy < NY; ++iy) {
    for (long ix = 0; ix < NX; ++ix) {
      const long c = iy * NX + ix;
      double a11 = 0.0, a12 = 0.0, a22 = 0.0;
      for (std::size_t s = 0; s < st.size(); ++s) {
        const long jy = ((iy - st.dy[s]) % NY + NY) % NY;
        const long jx = ((ix - st.dx[s]) % NX + NX) % NX;
        const double d1 = u1[jy * NX + jx] - u1[c], d2 = u2[jy * NX + jx] - u2[c];
        a11 += st.w[s] * d1 * d1;
        a12 += st.w[s] * d1 * d2;
        a22 += st.w[s] * d2 * d2;
      }
      r11[c] = a11;
      r12[c] = a12;
      r22[c] = a22;
    }
  }
}

namespace reference {

std::vector<Vec2> node_velocity(const std::vector<Vec2>& nodes, const std::vector<double>& gamma,
                                double delta, PairMode mode) {
  const std::size_t n = nodes.size();
  const double da = two_pi / static_cast<double>(n);
  const double wmode = mode == PairMode::opposite_parity ? 2.0 : 1.0;
  std::vector<Vec2> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a;
    for (std::size_t j = 0; j < n; ++j) {
      if (!use_pair(mode, i, j)) continue;
      const double dx = nodes[i].x - nodes[j].x, dy = nodes[i].y - nodes[j].y;
      const double den = std::cosh(dy) - std::cos(dx) + delta * delta;
      a.x -= gamma[j] * std::sinh(dy) / den;
      a.y += gamma[j] * std::sin(dx) / den;
    }
    u[i] = (wmode * da / (4.0 * pi)) * a;
  }
  return u;
}

std::vector<Vec2> point_velocity(const std::vector<Vec2>& nodes, const std::vector<double>& gamma,
                                 double delta, const std::vector<Vec2>& targets) {
  const double da = two_pi / static_cast<double>(nodes.size());
  std::vector<Vec2> u(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    Vec2 a;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double dx = targets[i].x - nodes[j].x, dy = targets[i].y - nodes[j].y;
      const double den = std::cosh(dy) - std::cos(dx) + delta * delta;
      a.x -= gamma[j] * std::sinh(dy) / den;
      a.y += gamma[j] * std::sin(dx) / den;
    }
    u[i] = (da / (4.0 * pi)) * a;
  }
  return u;
}

void cot_sums(const std::vector<Vec2>& nodes, const std::vector<cplx>& w, std::size_t K,
              const std::vector<Vec2>& targets, std::vector<cplx>& out) {
  const std::size_t n = nodes.size();
  out.assign(targets.size() * K, cplx(0.0));
  for (std::size_t i = 0; i < targets.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const cplx half = 0.5 * (to_cplx(targets[i]) - to_cplx(nodes[j]));
      const cplx k = std::cos(half) / std::sin(half);
      for (std::size_t m = 0; m < K; ++m) out[i * K + m] += k * w[m * n + j];
    }
}

void cot_pv(const std::vector<Vec2>& nodes, const std::vector<cplx>& w, std::size_t K,
            std::vector<cplx>& out) {
  const std::size_t n = nodes.size();
  out.assign(n * K, cplx(0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (((i ^ j) & 1u) == 0) continue;
      const cplx half = 0.5 * (to_cplx(nodes[i]) - to_cplx(nodes[j]));
      const cplx k = 2.0 * std::cos(half) / std::sin(half);
      for (std::size_t m = 0; m < K; ++m) out[i * K + m] += k * w[m * n + j];
    }
}

double blob_pair_log(const std::vector<Vec2>& nodes, const std::vector<double>& gamma, double delta) {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i == j) continue;
      const double dx = nodes[i].x - nodes[j].x, dy = nodes[i].y - nodes[j].y;
      s += gamma[i] * gamma[j] * std::log(2.0 * (std::cosh(dy) - std::cos(dx) + delta * delta));
    }
  return s;
}

double remainder_pair_log(const std::vector<Vec2>& nodes, const std::vector<double>& gamma) {
  const double da = two_pi / static_cast<double>(nodes.size());
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i == j) continue;
      const double dx = nodes[i].x - nodes[j].x, dy = nodes[i].y - nodes[j].y;
      const double sn = std::sin(0.5 * da * (static_cast<double>(i) - static_cast<double>(j)));
      s += gamma[i] * gamma[j] * std::log((std::cosh(dy) - std::cos(dx)) / (2.0 * sn * sn));
    }
  return s;
}

void stencil_convolve(const double* in, std::size_t ny, std::size_t nx, const Stencil& st, double* out) {
  const long NY = static_cast<long>(ny), NX = static_cast<long>(nx);
  for (long iy = 0; iy < NY; ++iy)
    for (long ix = 0; ix < NX; ++ix) {
      double a = 0.0;
      for (std::size_t s = 0; s < st.size(); ++s) {
        const long jy = ((iy - st.dy[s]) % NY + NY) % NY;
        const long jx = ((ix - st.dx[s]) % NX + NX) % NX;
        a += st.w[s] * in[jy * NX + jx];
      }
      out[iy * NX + ix] = a;
    }
}

void stencil_commutator(const double* u1, const double* u2, std::size_t ny, std::size_t nx,
                        const Stencil& st, double* r11, double* r12, double* r22) {
  const long NY = static_cast<long>(ny), NX = static_cast<long>(nx);
  for (long iy = 0; iy < NY; ++iy)
    for (long ix = 0; ix < NX; ++ix) {
      const long c = iy * NX + ix;
      double a11 = 0.0, a12 = 0.0, a22 = 0.0;
      for (std::size_t s = 0; s < st.size(); ++s) {
        const long jy = ((iy - st.dy[s]) % NY + NY) % NY;
        const long jx = ((ix - st.dx[s]) % NX + NX) % NX;
        const double d1 = u1[jy * NX + jx] - u1[c], d2 = u2[jy * NX + jx] - u2[c];
        a11 += st.w[s] * d1 * d1;
        a12 += st.w[s] * d1 * d2;
        a22 += st.w[s] * d2 * d2;
      }
      r11[c] = a11;
      r12[c] = a12;
      r22[c] = a22;
    }
}

}  // namespace reference

}  // namespace sheetlab::kernels
