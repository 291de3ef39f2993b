#include <doctest.h>

#include <cmath>

#include "sheetlab/biot_savart.hpp"
#include "sheetlab/kernels.hpp"

using namespace sheetlab;

namespace {
VortexSheet flat(std::size_t n, double (*g)(double)) {
  return VortexSheet::graph(n, [](double) { return 0.0; }, g);
}
double one(double) { return 1.0; }
double sine(double a) { return std::sin(a); }
// closed-form field of the flat gamma = sin alpha sheet
Vec2 sine_field(double x, double y) {
  const double e = 0.5 * std::exp(-std::abs(y));
  return {(y > 0 ? -1.0 : 1.0) * std::sin(x) * e, -std::cos(x) * e};
}
VortexSheet perturbed(std::size_t n) {
  return VortexSheet::graph(n, [](double a) { return 0.05 * std::sin(a); }, sine);
}
}  // namespace

TEST_CASE("direct sum against closed-form fields") {
  const auto s1 = flat(256, one);
  const auto u = velocity_at_points(s1, {{0.0, 0.7}, {1.0, -0.7}});
  CHECK(std::abs(u[0].x + 0.5) <= 1e-10);
  CHECK(std::abs(u[0].y) <= 1e-10);
  CHECK(std::abs(u[1].x - 0.5) <= 1e-10);

  const auto s = flat(256, sine);
  std::vector<Vec2> pts{{0.3, 0.4}, {-2.0, 1.5}, {1.1, -0.6}, {3.0, 0.25}};
  const auto v = velocity_at_points(s, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(norm(v[i] - sine_field(pts[i].x, pts[i].y)) <= 1e-10);

  // periodicity
  const auto p = perturbed(128);
  const auto a = velocity_at_points(p, {{0.4, 0.5}}), b = velocity_at_points(p, {{0.4 + two_pi, 0.5}});
  CHECK(norm(a[0] - b[0]) <= 1e-13);

  CHECK_THROWS_AS(velocity_at_points(s, {{0.0, 1e-4}}), QuadratureError);
}

TEST_CASE("one-sided limits") {
  const auto t1 = one_sided_limits(flat(256, one));
  for (std::size_t j = 0; j < 256; ++j) {
    CHECK(norm(t1.u_plus[j] - Vec2{-0.5, 0.0}) <= 1e-10);
    CHECK(norm(t1.u_minus[j] - Vec2{0.5, 0.0}) <= 1e-10);
    CHECK(norm(t1.u_mean[j]) <= 1e-13);
  }
  const auto s = flat(256, sine);
  const auto t = one_sided_limits(s);
  for (std::size_t j = 0; j < 256; ++j) {
    const double a = s.alpha(j);
    CHECK(norm(t.u_plus[j] - Vec2{-0.5 * std::sin(a), -0.5 * std::cos(a)}) <= 1e-10);
    CHECK(norm(t.u_minus[j] - Vec2{0.5 * std::sin(a), -0.5 * std::cos(a)}) <= 1e-10);
  }
  CHECK_FALSE(t.under_resolved);
}

TEST_CASE("traces are the limits of the off-sheet field") {
  // extrapolate the near-sheet evaluator at y = +-2^-m
  const auto s = perturbed(256);
  const SheetVelocityField f(s);
  const auto& tr = f.traces();
  const auto fr = f.frame();
  for (std::size_t j = 0; j < 256; j += 17) {
    const Vec2 z = s.position()[j], nu = fr.normal[j];
    double prev = 1.0;
    for (int m = 8; m <= 20; m += 4) {
      const double y = std::ldexp(1.0, -m);
      const Vec2 up = f(z + y * nu, Side::above), dn = f(z - y * nu, Side::below);
      const double e = std::max(norm(up - tr.u_plus[j]), norm(dn - tr.u_minus[j]));
      CHECK(e <= 2.0 * y);
      prev = e;
    }
    CHECK(prev <= 1e-5);
  }
}

TEST_CASE("near-sheet evaluator matches the closed-form field") {
  const auto s = flat(256, sine);
  const SheetVelocityField f(s);
  for (double y : {1e-1, 1e-3, 1e-6, -1e-3, -1e-6}) {
    const Vec2 p{0.37, y};
    CHECK(norm(f(p) - sine_field(p.x, p.y)) <= 1e-10);
  }
}

TEST_CASE("mean velocity of the markers") {
  for (double d : {0.0, 0.2}) {
    const auto u = mean_velocity_rhs(flat(128, one), BlobParameter(d));
    for (const auto& v : u) CHECK(norm(v) <= 1e-13);
  }
  const auto s = flat(256, sine);
  const auto u = mean_velocity_rhs(s);
  for (std::size_t j = 0; j < 256; ++j) CHECK(norm(u[j] - Vec2{0.0, -0.5 * std::cos(s.alpha(j))}) <= 1e-10);
  CHECK_THROWS_AS(BlobParameter(-0.1), InvalidArgument);
}

TEST_CASE("parallel kernels agree with the serial reference") {
  const auto s = perturbed(256);
  const auto& z = s.position();
  const auto& g = s.gamma();
  for (auto mode : {kernels::PairMode::all_but_self, kernels::PairMode::opposite_parity})
    for (double d : {0.0, 0.1}) {
      if (d == 0.0 && mode == kernels::PairMode::all_but_self) continue;
      const auto a = kernels::node_velocity(z, g, d, mode), b = kernels::reference::node_velocity(z, g, d, mode);
      for (std::size_t j = 0; j < a.size(); ++j) CHECK(norm(a[j] - b[j]) <= 1e-12);
    }
  std::vector<Vec2> pts{{0.1, 0.5}, {2.0, -0.3}, {-3.0, 1.2}};
  const auto pa = kernels::point_velocity(z, g, 0.05, pts), pb = kernels::reference::point_velocity(z, g, 0.05, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(norm(pa[i] - pb[i]) <= 1e-12);

  std::vector<cplx> w(2 * 256);
  for (std::size_t j = 0; j < 256; ++j) w[j] = g[j], w[256 + j] = cplx(0.0, std::cos(s.alpha(j)));
  std::vector<cplx> ca, cb;
  kernels::cot_sums(z, w, 2, pts, ca);
  kernels::reference::cot_sums(z, w, 2, pts, cb);
  for (std::size_t i = 0; i < ca.size(); ++i) CHECK(std::abs(ca[i] - cb[i]) <= 1e-11 * (1 + std::abs(cb[i])));
  kernels::cot_pv(z, w, 2, ca);
  kernels::reference::cot_pv(z, w, 2, cb);
  for (std::size_t i = 0; i < ca.size(); ++i) CHECK(std::abs(ca[i] - cb[i]) <= 1e-11 * (1 + std::abs(cb[i])));

  CHECK(kernels::blob_pair_log(z, g, 0.1) ==
        doctest::Approx(kernels::reference::blob_pair_log(z, g, 0.1)).epsilon(1e-12));
  CHECK(kernels::remainder_pair_log(z, g) == doctest::Approx(kernels::reference::remainder_pair_log(z, g)).epsilon(1e-12));

  kernels::Stencil st;
  for (int dy = -2; dy <= 2; ++dy)
    for (int dx = -3; dx <= 3; ++dx) st.dx.push_back(dx), st.dy.push_back(dy), st.w.push_back(1.0 / (1 + dx * dx + dy * dy));
  const std::size_t ny = 16, nx = 32;
  std::vector<double> u1(ny * nx), u2(ny * nx);
  for (std::size_t i = 0; i < u1.size(); ++i) u1[i] = std::sin(0.3 * i), u2[i] = std::cos(0.17 * i);
  std::vector<double> oa(u1.size()), ob(u1.size());
  kernels::stencil_convolve(u1.data(), ny, nx, st, oa.data());
  kernels::reference::stencil_convolve(u1.data(), ny, nx, st, ob.data());
  for (std::size_t i = 0; i < oa.size(); ++i) CHECK(std::abs(oa[i] - ob[i]) <= 1e-13);
  std::vector<double> r[6];
  for (auto& v : r) v.resize(u1.size());
  kernels::stencil_commutator(u1.data(), u2.data(), ny, nx, st, r[0].data(), r[1].data(), r[2].data());
  kernels::reference::stencil_commutator(u1.data(), u2.data(), ny, nx, st, r[3].data(), r[4].data(), r[5].data());
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < u1.size(); ++i) CHECK(std::abs(r[c][i] - r[c + 3][i]) <= 1e-12);
}
