#include <doctest.h>

#include <cmath>

#include "sheetlab/geometry.hpp"

using namespace sheetlab;

namespace {
VortexSheet flat(std::size_t n, double t = 0.0) {
  return VortexSheet::graph(n, [](double) { return 0.0; }, [](double a) { return std::sin(a); }, t);
}
VortexSheet wave(std::size_t n, double a, double c, double t) {
  return VortexSheet::graph(n, [=](double x) { return a * std::sin(x - c * t); }, [](double) { return 1.0; }, t);
}
}  // namespace

TEST_CASE("sheet construction guards") {
  CHECK_THROWS_AS(VortexSheet::graph(12, [](double) { return 0.0; }, [](double) { return 1.0; }), InvalidArgument);
  CHECK_THROWS_AS(VortexSheet::graph(4, [](double) { return 0.0; }, [](double) { return 1.0; }), InvalidArgument);
  // nonzero circulation cannot be flagged finite-energy
  CHECK_THROWS_AS(VortexSheet::graph(16, [](double) { return 0.0; }, [](double) { return 1.0; }, 0.0, true),
                  InvalidArgument);
  const auto s = VortexSheet::graph(16, [](double) { return 0.0; }, [](double a) { return std::sin(a); }, 0.0, true);
  CHECK(std::abs(s.circulation()) <= 1e-12);
  CHECK(s.alpha(0) == doctest::Approx(-pi));
}

TEST_CASE("frame of a flat sheet") {
  const auto fr = build_frame(flat(64));
  for (std::size_t j = 0; j < 64; ++j) {
    CHECK(fr.tangent[j].x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(fr.tangent[j].y) <= 1e-14);
    CHECK(fr.normal[j].y == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fr.speed[j] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("frame of a curved sheet: orthonormal and matching finite differences") {
  const std::size_t n = 128;
  const auto s = VortexSheet::graph(n, [](double a) { return 0.1 * std::sin(a); }, [](double) { return 1.0; });
  const auto fr = build_frame(s);
  const SheetCurve curve(s);
  const double h = 1e-5;
  for (std::size_t j = 0; j < n; ++j) {
    CHECK(std::abs(norm(fr.tangent[j]) - 1.0) <= 1e-12);
    CHECK(std::abs(norm(fr.normal[j]) - 1.0) <= 1e-12);
    CHECK(std::abs(dot(fr.tangent[j], fr.normal[j])) <= 1e-12);
    CHECK(fr.dsigma[j] > 0.0);
    const Vec2 d = curve.point(s.alpha(j) + h) - curve.point(s.alpha(j) - h);
    const Vec2 nu = perp((1.0 / norm(d)) * d);
    CHECK(norm(nu - fr.normal[j]) <= 1e-8);
  }
}

TEST_CASE("sheet measure") {
  const std::size_t n = 64;
  const double da = two_pi / n, dt = 1e-3;
  SUBCASE("static sheet") {
    const auto mu = sheet_measure(flat(n, 0.0), flat(n, dt), flat(n, 2 * dt));
    for (double m : mu.mu) CHECK(m == 0.0);
  }
  SUBCASE("translating graph") {
    const double c = 0.7;
    auto tr = [&](double t) {
      return VortexSheet::graph(n, [=](double) { return c * t; }, [](double) { return 1.0; }, t);
    };
    const auto mu = sheet_measure(tr(0.0), tr(dt), tr(2 * dt));
    for (double m : mu.mu) CHECK(m == doctest::Approx(-c * da).epsilon(1e-9));
    const auto mg = sheet_measure_graph(tr(0.0), tr(dt), tr(2 * dt));
    for (double m : mg.mu) CHECK(m == doctest::Approx(-c * da).epsilon(1e-9));
  }
  SUBCASE("travelling wave") {
    const double a = 0.1, c = 1.3;
    const auto mu = sheet_measure(wave(n, a, c, -dt), wave(n, a, c, 0.0), wave(n, a, c, dt));
    for (std::size_t j = 0; j < n; ++j) {
      const double al = -pi + j * da;
      CHECK(std::abs(mu.mu[j] - a * c * std::cos(al) * da) <= 1e-7);
    }
  }
}

TEST_CASE("sheet measure does not depend on the parametrization") {
  const std::size_t n = 128;
  const double a = 0.1, c = 1.0, dt = 1e-4;
  auto h = [=](double x, double t) { return 0.3 * t + a * std::sin(x - c * t); };
  auto graph = [&](double t) {
    return VortexSheet::graph(n, [&, t](double x) { return h(x, t); }, [](double) { return 1.0; }, t);
  };
  // same curves, markers at x = alpha + 0.2 sin alpha
  auto other = [&](double t) {
    std::vector<Vec2> p(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double al = -pi + two_pi * j / n, x = al + 0.2 * std::sin(al);
      p[j] = {x, h(x, t)};
    }
    return VortexSheet(p, std::vector<double>(n, 1.0), t);
  };
  auto integral = [](const VortexSheet& s, const SheetMeasure& mu) {
    double r = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) r += std::cos(s.position()[j].x) * mu.mu[j];
    return r;
  };
  const double t = 0.4;
  const double i1 = integral(graph(t), sheet_measure(graph(t - dt), graph(t), graph(t + dt)));
  const double i2 = integral(other(t), sheet_measure(other(t - dt), other(t), other(t + dt)));
  CHECK(std::abs(i1 - i2) <= 1e-8);
}

TEST_CASE("projection and crossing height") {
  const auto s = VortexSheet::graph(64, [](double a) { return 0.2 * std::sin(a); }, [](double) { return 1.0; });
  const SheetCurve c(s);
  CHECK(c.is_graph());
  CHECK(c.crossing_height(0.5) == doctest::Approx(0.2 * std::sin(0.5)).epsilon(1e-12));
  const auto f = flat(64);
  const auto pr = SheetCurve(f).project({0.3, 0.25});
  CHECK(pr.H == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(pr.foot.x == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(SheetCurve(f).project({0.3, -0.25}).H == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("cutoff family") {
  const double eps = 0.05;
  const auto s = flat(64);
  const CutoffFamily cf(s, eps);
  SUBCASE("far from the sheet") {
    const auto v = cf({0.1, 5 * eps});
    CHECK(v.chi == 1.0);
    CHECK(norm(v.grad) == 0.0);
  }
  SUBCASE("on the sheet") { CHECK(cf({0.1, 0.0}).chi == 0.0); }
  SUBCASE("inside the band") {
    const Vec2 p{0.1, 2.5 * eps};
    const auto v = cf(p);
    CHECK(v.grad.y == doctest::Approx(-eta_prime(2.5) / eps).epsilon(1e-10));
    CHECK(std::abs(v.grad.x) <= 1e-10);
    const double h = 1e-6;
    const double fd = (cf({p.x, p.y + h}).chi - cf({p.x, p.y - h}).chi) / (2 * h);
    CHECK(std::abs(fd - v.grad.y) <= 1e-6 * std::abs(v.grad.y));
    CHECK(v.chi >= 0.0);
    CHECK(v.chi <= 1.0);
  }
  CHECK(eta(1.9) == 1.0);
  CHECK(eta(3.1) == 0.0);
  CHECK(eta_prime(1.0) == 0.0);
  CHECK_THROWS_AS(CutoffFamily(s, 0.0), InvalidArgument);
}

TEST_CASE("upsampling keeps the band-limited sheet") {
  const auto s = VortexSheet::graph(32, [](double a) { return 0.1 * std::sin(2 * a); }, [](double a) { return std::cos(a); });
  const auto u = upsample(s, 4);
  REQUIRE(u.size() == 128);
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double a = u.alpha(j);
    CHECK(std::abs(u.position()[j].y - 0.1 * std::sin(2 * a)) <= 1e-13);
    CHECK(std::abs(u.gamma()[j] - std::cos(a)) <= 1e-13);
  }
}
