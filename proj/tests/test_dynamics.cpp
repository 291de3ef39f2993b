#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "sheetlab/dynamics.hpp"
#include "sheetlab/sheet_io.hpp"

using namespace sheetlab;

namespace {
VortexSheet perturbed(std::size_t n) {
  return VortexSheet::graph(n, [](double a) { return 0.05 * std::sin(a); }, [](double a) { return std::sin(a); }, 0.0,
                            true);
}
double max_displacement(const VortexSheet& a, const VortexSheet& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, norm(a.position()[j] - b.position()[j]));
  return d;
}
}  // namespace

TEST_CASE("flat uniform sheet is steady") {
  const auto s = VortexSheet::graph(128, [](double) { return 0.0; }, [](double) { return 1.0; });
  for (double d : {0.0, 0.1}) {
    const auto tr = evolve(s, BlobParameter(d), 0.05, 1.0);
    CHECK(tr.snapshots.size() == 21);
    CHECK(max_displacement(s, tr.back()) <= 1e-12);
    CHECK(kinematic_residual(tr).max() <= 1e-12);
  }
}

TEST_CASE("first step of the gamma = sin alpha sheet") {
  const auto s = VortexSheet::graph(256, [](double) { return 0.0; }, [](double a) { return std::sin(a); });
  const double dt = 1e-5;
  const auto tr = evolve(s, BlobParameter(0.0), dt, dt);
  for (std::size_t j = 0; j < 256; j += 7) {
    const double dh = (tr.back().position()[j].y - s.position()[j].y) / dt;
    CHECK(std::abs(dh + 0.5 * std::cos(s.alpha(j))) <= 1e-4);
  }
}

TEST_CASE("time reversal recovers the initial sheet") {
  const auto s0 = perturbed(256);
  const BlobParameter blob(0.1);
  const auto fwd = evolve(s0, blob, 1e-3, 0.5);
  std::vector<double> g(fwd.back().gamma());
  for (double& v : g) v = -v;
  const auto back = evolve(fwd.back().with_gamma(g).with_time(0.0), blob, 1e-3, 0.5);
  CHECK(max_displacement(s0, back.back()) <= 1e-8);
  // circulation is carried by the markers
  CHECK(fwd.back().gamma() == s0.gamma());
}

TEST_CASE("kinematic residual") {
  SUBCASE("self-consistent trajectory") {
    const auto tr = evolve(perturbed(128), BlobParameter(0.1), 1e-3, 0.05);
    CHECK(kinematic_residual(tr).max() <= 1e-6);
  }
  SUBCASE("frozen sheet with a moving field") {
    const auto s = VortexSheet::graph(64, [](double a) { return 0.1 * std::sin(a); }, [](double a) { return std::sin(a); });
    Trajectory tr;
    tr.dt = 0.01;
    for (int k = 0; k < 4; ++k) tr.snapshots.push_back(s.with_time(0.01 * k));
    const auto U = mean_velocity_rhs(s);
    double expect = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j)
      expect = std::max(expect, std::abs(U[j].y - U[j].x * 0.1 * std::cos(s.alpha(j))));
    const auto kr = kinematic_residual(tr);
    CHECK(kr.graph_form);
    CHECK(expect > 0.0);
    CHECK(kr.max() == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("trajectory files round-trip") {
  const auto tr = evolve(perturbed(32), BlobParameter(0.2), 0.01, 0.03);
  const auto dir = std::filesystem::temp_directory_path() / "sheetlab_traj_test";
  std::filesystem::remove_all(dir);
  write_trajectory(tr, dir);
  const auto rt = read_trajectory(dir);
  REQUIRE(rt.snapshots.size() == tr.snapshots.size());
  CHECK(rt.dt == doctest::Approx(tr.dt));
  CHECK(rt.blob.delta == doctest::Approx(0.2));
  for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
    CHECK(rt.snapshots[k].position()[5].y == tr.snapshots[k].position()[5].y);
    CHECK(rt.snapshots[k].time() == doctest::Approx(tr.snapshots[k].time()));
  }
  CHECK(io::snapshot_filename(0.5) == "t=0.500000.csv");
  CHECK(io::snapshot_time("t=0.250000.csv") == doctest::Approx(0.25));
  CHECK_THROWS(io::snapshot_time("foo.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("bad time stepping is rejected") {
  CHECK_THROWS_AS(evolve(perturbed(32), BlobParameter(0.1), -1e-3, 0.1), InvalidArgument);
  CHECK_THROWS_AS(evolve(perturbed(32), BlobParameter(0.1), 0.03, 0.1), InvalidArgument);
}

TEST_CASE("unregularized sheet aborts near the curvature singularity") {
  const auto s = VortexSheet::graph(64, [](double a) { return 0.2 * std::sin(a); }, [](double) { return 1.0; });
  CHECK_THROWS_AS(evolve(s, BlobParameter(0.0), 0.01, 4.0), NumericalAbort);
}
