#include <doctest.h>

#include <cmath>

#include "sheetlab/potential.hpp"

using namespace sheetlab;

namespace {
VortexSheet flat(std::size_t n, double (*g)(double)) {
  return VortexSheet::graph(n, [](double) { return 0.0; }, g);
}
double one(double) { return 1.0; }
double sine(double a) { return std::sin(a); }
}  // namespace

TEST_CASE("periodic Green's function") {
  const double h = 1e-3;
  for (auto [x, y] : {std::pair{0.7, 0.4}, {-2.0, 1.3}, {3.0, -0.2}}) {
    const double lap = (PeriodicGreen::value(x + h, y) + PeriodicGreen::value(x - h, y) + PeriodicGreen::value(x, y + h) +
                        PeriodicGreen::value(x, y - h) - 4 * PeriodicGreen::value(x, y)) /
                       (h * h);
    CHECK(std::abs(lap) <= 1e-6);
    CHECK(PeriodicGreen::value(x + two_pi, y) == doctest::Approx(PeriodicGreen::value(x, y)).epsilon(1e-14));
    const Vec2 g = PeriodicGreen::gradient(x, y);
    CHECK(g.x == doctest::Approx((PeriodicGreen::value(x + h, y) - PeriodicGreen::value(x - h, y)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("double layer on a flat sheet") {
  const std::size_t n = 256;
  const auto s = flat(n, one);
  SUBCASE("unit density jumps by one") {
    const auto t = double_layer_traces(s, std::vector<double>(n, 1.0));
    for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(std::abs(t.plus[j] - t.minus[j]) - 1.0) <= 1e-12);
    // far field: constant, gradient below e^-y
    const double a = double_layer(s, std::vector<double>(n, 1.0), Vec2{0.3, 4.0});
    const double b = double_layer(s, std::vector<double>(n, 1.0), Vec2{1.3, 4.0});
    CHECK(std::abs(a - b) <= std::exp(-4.0));
  }
  SUBCASE("cos alpha density") {
    std::vector<double> f(n);
    for (std::size_t j = 0; j < n; ++j) f[j] = std::cos(s.alpha(j));
    for (auto p : {Vec2{0.4, 0.3}, Vec2{-1.0, -0.8}, Vec2{2.5, 1.7}}) {
      const double exact = -(p.y > 0 ? 0.5 : -0.5) * std::exp(-std::abs(p.y)) * std::cos(p.x);
      CHECK(std::abs(double_layer(s, f, p) - exact) <= 1e-10);
    }
    const auto t = double_layer_traces(s, f);
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(std::abs(t.plus[j] + 0.5 * f[j]) <= 1e-10);
      CHECK(std::abs(t.minus[j] - 0.5 * f[j]) <= 1e-10);
    }
    // barycentric field near the sheet
    const DoubleLayerField F(s, f);
    const auto v = F.evaluate({{0.4, 1e-6}, {0.4, -1e-6}});
    CHECK(std::abs(v[0] + 0.5 * std::cos(0.4)) <= 1e-6);
    CHECK(std::abs(v[1] - 0.5 * std::cos(0.4)) <= 1e-6);
    CHECK_THROWS_AS(double_layer(s, f, Vec2{0.4, 1e-4}), QuadratureError);
  }
}

TEST_CASE("sheet pressure") {
  SUBCASE("flat uniform sheet: constant pressure") {
    const auto s = flat(128, one);
    const SheetPressure p(s, one_sided_limits(s));
    const auto& t = p.traces();
    for (std::size_t j = 0; j < s.size(); ++j) CHECK(std::abs(t.p_plus[j] - t.p_minus[j]) <= 1e-12);
    // -1/8 before the additive normalization
    CHECK(t.p_mean[0] - t.constant == doctest::Approx(-0.125).epsilon(1e-12));
    const auto v = p.evaluate({{0.1, 0.5}, {2.0, -1.5}, {-1.0, 3.0}});
    CHECK(std::abs(v[0] - v[1]) <= 1e-12);
    CHECK(std::abs(v[0] - v[2]) <= 1e-12);
  }
  SUBCASE("gamma = sin alpha: continuous across the sheet") {
    const auto s = flat(256, sine);
    const SheetPressure p(s, one_sided_limits(s));
    const auto& t = p.traces();
    double d = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) d = std::max(d, std::abs(t.p_plus[j] - t.p_minus[j]));
    CHECK(d <= 1e-8);
    const auto v = p.evaluate({{0.7, 1e-7}, {0.7, -1e-7}});
    CHECK(std::abs(v[0] - v[1]) <= 1e-6);
  }
}
