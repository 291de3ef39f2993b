#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "sheetlab/field.hpp"
#include "sheetlab/scenario.hpp"

using namespace sheetlab;

namespace {
GridField shear(std::size_t n) {
  return GridField::vector(Domain::torus(), n, n, [](double, double y) { return Vec2{std::sin(y), 0.0}; });
}
// Taylor-Green plus a transverse shear: not a steady Euler flow
GridField non_solution(std::size_t n) {
  return GridField::vector(Domain::torus(), n, n, [](double x, double y) {
    return Vec2{std::sin(x) * std::cos(y) + std::sin(2 * y), -std::cos(x) * std::sin(y)};
  });
}
FieldSeries steady(const GridField& u, int k = 5, double dt = 0.1) {
  FieldSeries s;
  for (int i = 0; i < k; ++i) s.times.push_back(i * dt), s.fields.push_back(u);
  return s;
}
double max_abs_diff(const GridField& p, const std::function<double(double, double)>& f) {
  double e = 0.0;
  for (std::size_t iy = 0; iy < p.ny(); ++iy)
    for (std::size_t ix = 0; ix < p.nx(); ++ix) e = std::max(e, std::abs(p.at(0, iy, ix) - f(p.x(ix), p.y(iy))));
  return e;
}
}  // namespace

TEST_CASE("grid field basics") {
  CHECK_THROWS_AS(GridField(Domain::torus(), 12, 16, 1), InvalidArgument);
  const auto tg = taylor_green(32);
  CHECK(plancherel_defect(tg) <= 1e-13);
  const auto d = spectral_derivative(tg, 0, 0);
  double e = 0.0;
  for (std::size_t iy = 0; iy < 32; ++iy)
    for (std::size_t ix = 0; ix < 32; ++ix)
      e = std::max(e, std::abs(d[iy * 32 + ix] - std::cos(tg.x(ix)) * std::cos(tg.y(iy))));
  CHECK(e <= 1e-13);
  const auto stem = std::filesystem::temp_directory_path() / "sheetlab_grid_test";
  write_grid(tg, stem);
  const auto rt = read_grid(stem);
  CHECK(rt.same_grid(tg));
  CHECK(rt.data() == tg.data());
}

TEST_CASE("Riesz pressure") {
  const std::size_t n = 64;
  const auto zero = GridField::vector(Domain::torus(), n, n, [](double, double) { return Vec2{}; });
  CHECK(riesz_pressure(zero).max_magnitude() == 0.0);
  CHECK(riesz_pressure(shear(n)).max_magnitude() <= 1e-14);
  CHECK(max_abs_diff(riesz_pressure(taylor_green(n)), taylor_green_pressure) <= 1e-12);
  const auto strip = GridField::vector(Domain::strip(6.0, 64), 32, 64, [](double, double) { return Vec2{}; });
  CHECK_THROWS_AS(riesz_pressure(strip), InvalidArgument);
}

TEST_CASE("dyadic flux") {
  SUBCASE("single mode sits in its shells") {
    const int q0 = 3;
    const double k = std::ldexp(1.0, q0);
    const auto u = GridField::vector(Domain::torus(), 64, 64, [k](double x, double) { return Vec2{0.0, std::cos(k * x)}; });
    for (const auto& r : dyadic_flux(u))
      if (r.q < q0 - 1 || r.q > q0 + 1) CHECK(r.flux <= 1e-20);
    CHECK(dyadic_reconstruction_error(u) <= 1e-13);
  }
  SUBCASE("Taylor-Green decays") {
    const auto rows = dyadic_flux(taylor_green(128));
    for (const auto& r : rows)
      if (r.q >= 4 && r.resolved) CHECK(r.flux <= std::ldexp(1.0, -r.q) * 1e-6);
    CHECK(flux_window(rows).drop >= 1e3);
  }
}

TEST_CASE("structure function") {
  const auto c = GridField::vector(Domain::torus(), 32, 32, [](double, double) { return Vec2{1.0, 2.0}; });
  for (const auto& r : structure_function(c, {{1, 0}, {0, 3}}).rows) CHECK(r.s3 == 0.0);
  CHECK(structure_function(taylor_green(32), {{0, 0}}).rows[0].s3 == 0.0);
  CHECK_THROWS_AS(structure_function(c, {{20, 0}}), InvalidArgument);
}

TEST_CASE("mollification and commutators") {
  const auto c = GridField::vector(Domain::torus(), 64, 64, [](double, double) { return Vec2{1.0, -0.5}; });
  const auto m = mollify_and_commutators(c, {0.5});
  CHECK(m.r_norm <= 1e-14);
  CHECK(m.remainder_norm <= 1e-14);
  // single mode: ||r_delta|| = O(delta^2)
  const auto u = GridField::vector(Domain::torus(), 256, 256, [](double x, double) { return Vec2{0.0, std::cos(x)}; });
  std::vector<double> r;
  for (double d : {0.2, 0.1, 0.05}) r.push_back(mollify_and_commutators(u, {d}).r_norm);
  const double slope = std::log(r[0] / r[2]) / std::log(4.0);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
  CHECK_THROWS_AS(mollify(u, {0.01}), InvalidArgument);
}

TEST_CASE("momentum residual") {
  const MollifierSpec spec{0.3};
  for (const auto& r : momentum_residual(steady(taylor_green(64)), spec)) CHECK(r.residual <= 1e-10);
  for (const auto& r : momentum_residual(steady(shear(64)), spec)) CHECK(r.residual <= 1e-12);
  for (const auto& r : momentum_residual(steady(non_solution(64)), spec)) CHECK(r.residual > 0.1);
}

TEST_CASE("local energy balance") {
  const std::size_t n = 64;
  auto pressure = [](const GridField& u) { return riesz_pressure(u); };
  SUBCASE("steady Taylor-Green") {
    const auto u = steady(taylor_green(n));
    FieldSeries p = u;
    for (auto& f : p.fields) f = pressure(f);
    for (const auto& phi : {TestFunction::periodic_bump(1.0, 2.0, 4.0, 1.0, 0.5), TestFunction::periodic_bump(-0.4, 0.7, 8.0),
                            TestFunction::bump(3.0, 3.0, 2.5, 1.0, 0.5)}) {
      const auto b = energy_balance_residual(u, p, phi, 0.1, 0.3);
      CHECK(b.residual <= 1e-8);
    }
    // compact bumps carry the grid quadrature error of their steep edge
    const auto b = energy_balance_residual(u, p, TestFunction::bump(3.3, 3.0, 2.2, 2.0, -1.0), 0.0, 0.4);
    CHECK(std::abs(b.lhs - b.rhs) <= 1e-5 * b.scale);
  }
  SUBCASE("zero field and constant test function") {
    const auto u = steady(GridField::vector(Domain::torus(), n, n, [](double, double) { return Vec2{}; }));
    FieldSeries p = u;
    for (auto& f : p.fields) f = pressure(f);
    const auto b = energy_balance_residual(u, p, TestFunction::bump(3.0, 3.0, 1.0), 0.0, 0.4);
    CHECK(b.lhs == 0.0);
    CHECK(b.rhs == 0.0);
    const auto tg = steady(taylor_green(n));
    FieldSeries ptg = tg;
    for (auto& f : ptg.fields) f = pressure(f);
    const auto c = energy_balance_residual(tg, ptg, TestFunction::constant(1.0), 0.0, 0.4);
    CHECK(std::abs(c.lhs) <= 1e-14);
    CHECK(std::abs(c.rhs) <= 1e-14);
  }
  SUBCASE("violation is detected") {
    const auto u = steady(non_solution(n));
    FieldSeries p = u;
    for (auto& f : p.fields) f = pressure(f);
    const auto b = energy_balance_residual(u, p, TestFunction::periodic_bump(1.0, 2.0, 4.0), 0.1, 0.3);
    CHECK(b.residual > 0.1);
  }
}

TEST_CASE("strip decay check") {
  const auto u = GridField::vector(Domain::strip(6.0, 128), 32, 128, [](double, double y) {
    return Vec2{std::exp(-std::abs(y)), 0.0};
  });
  CHECK_NOTHROW(check_strip_decay(u, 3e-3));
  CHECK_THROWS_AS(check_strip_decay(u, 1e-6), InvalidArgument);
}
