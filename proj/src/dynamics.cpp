#include "sheetlab/dynamics.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "sheetlab/kernels.hpp"
#include "sheetlab/sheet_io.hpp"

namespace sheetlab {

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(snapshots.size());
  for (const auto& s : snapshots) t.push_back(s.time());
  return t;
}

namespace {

std::vector<Vec2> rhs(const std::vector<Vec2>& pos, const std::vector<double>& gamma, double delta) {
  return kernels::node_velocity(pos, gamma, delta,
                                delta == 0.0 ? kernels::PairMode::opposite_parity
                                             : kernels::PairMode::all_but_self);
}

std::vector<Vec2> axpy(const std::vector<Vec2>& x, double a, const std::vector<Vec2>& k) {
  std::vector<Vec2> y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] + a * k[j];
  return y;
}

}  // namespace

Trajectory evolve(const VortexSheet& sheet0, BlobParameter blob, double dt, double t_end,
                  double filter_threshold, EvolveOptions opt) {
  if (!(dt > 0.0)) throw InvalidArgument("evolve: dt must be positive");
  if (!(t_end >= 0.0)) throw InvalidArgument("evolve: t_end must be nonnegative");
  if (!(filter_threshold >= 0.0)) throw InvalidArgument("evolve: filter_threshold must be >= 0");
  const double steps_f = t_end / dt;
  const long steps = std::lround(steps_f);
  if (std::abs(steps_f - static_cast<double>(steps)) > 1e-8)
    throw InvalidArgument("evolve: t_end must be an integer multiple of dt");

  Trajectory traj;
  traj.dt = dt;
  traj.blob = blob;
  traj.filter_threshold = filter_threshold;
  traj.snapshots.reserve(static_cast<std::size_t>(steps) + 1);
  traj.snapshots.push_back(sheet0);

  const auto& gamma = sheet0.gamma();
  const std::size_t n = sheet0.size();
  const double da = sheet0.dalpha();
  std::vector<Vec2> pos = sheet0.position();
  const double t0 = sheet0.time();
  for (long s = 1; s <= steps; ++s) {
    const auto k1 = rhs(pos, gamma, blob.delta);
    const auto k2 = rhs(axpy(pos, 0.5 * dt, k1), gamma, blob.delta);
    const auto k3 = rhs(axpy(pos, 0.5 * dt, k2), gamma, blob.delta);
    const auto k4 = rhs(axpy(pos, dt, k3), gamma, blob.delta);
    for (std::size_t j = 0; j < n; ++j)
      pos[j] += (dt / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);

    // spectral filter on the periodic parts
    std::vector<double> xp(n), hp(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double a = -pi + static_cast<double>(j) * da;
      xp[j] = pos[j].x - a;
      hp[j] = pos[j].y;
    }
    const double cmax = std::max(spectral::max_coefficient(xp), spectral::max_coefficient(hp));
    // threshold relative to the joint maximum, but never below filter_threshold itself, so
    // roundoff on an (almost) flat sheet is removed instead of amplified
    const double cut = filter_threshold * std::max(cmax, 1.0);
    if (filter_threshold > 0.0) {
      xp = spectral::filter(xp, cut);
      hp = spectral::filter(hp, cut);
      for (std::size_t j = 0; j < n; ++j) {
        const double a = -pi + static_cast<double>(j) * da;
        pos[j] = {a + xp[j], hp[j]};
      }
    }
    const double t = t0 + static_cast<double>(s) * dt;
    if (blob.delta == 0.0 && cmax > 1e-12) {
      // tail relative to the joint spectrum maximum (a roundoff-level perturbation has none)
      auto tail_abs = [&](const std::vector<double>& f) {
        const auto c = spectral::coefficients(f);
        double m = 0.0;
        for (std::size_t k = n / 4; k < c.size(); ++k) m = std::max(m, std::abs(c[k]));
        return m;
      };
      const double tail = std::max(tail_abs(xp), tail_abs(hp)) / cmax;
      if (tail > opt.tail_abort)
        throw NumericalAbort("evolve: approaching singularity at t = " + std::to_string(t) +
                             " (spectral tail " + std::to_string(tail) + " of the spectrum maximum)");
    }
    for (const auto& p : pos)
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw NumericalAbort("evolve: non-finite marker position at t = " + std::to_string(t));
    traj.snapshots.push_back(sheet0.with_positions(pos, t));
  }
  return traj;
}

double KinematicResidual::max() const {
  double m = 0.0;
  for (double r : residual) m = std::max(m, r);
  return m;
}

KinematicResidual kinematic_residual(const Trajectory& traj) {
  const auto& S = traj.snapshots;
  if (S.size() < 3) throw InvalidArgument("kinematic_residual: need at least 3 snapshots");
  const std::size_t n = S[0].size();
  bool graph = true;
  for (const auto& s : S)
    for (std::size_t j = 0; j < n && graph; ++j)
      if (std::abs(s.position()[j].x - s.alpha(j)) > 1e-6) graph = false;

  KinematicResidual out;
  out.graph_form = graph;
  const double dt = traj.dt;
  const std::size_t m = S.size();
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<Vec2> rt(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (k == 0)
        rt[j] = (1.0 / (2.0 * dt)) *
                (-3.0 * S[0].position()[j] + 4.0 * S[1].position()[j] - S[2].position()[j]);
      else if (k + 1 == m)
        rt[j] = (1.0 / (2.0 * dt)) *
                (3.0 * S[m - 1].position()[j] - 4.0 * S[m - 2].position()[j] + S[m - 3].position()[j]);
      else
        rt[j] = (1.0 / (2.0 * dt)) * (S[k + 1].position()[j] - S[k - 1].position()[j]);
    }
    const auto U = mean_velocity_rhs(S[k], traj.blob);
    double r = 0.0;
    if (graph) {
      const auto ha = spectral::derivative(S[k].heights());
      for (std::size_t j = 0; j < n; ++j) r = std::max(r, std::abs(rt[j].y + U[j].x * ha[j] - U[j].y));
    } else {
      const auto fr = build_frame(S[k]);
      for (std::size_t j = 0; j < n; ++j) r = std::max(r, std::abs(dot(rt[j] - U[j], fr.normal[j])));
    }
    out.time.push_back(S[k].time());
    out.residual.push_back(r);
  }
  return out;
}

void write_trajectory(const Trajectory& traj, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::set<std::string> names;
  for (const auto& s : traj.snapshots) {
    const auto name = io::snapshot_filename(s.time());
    if (!names.insert(name).second)
      throw InvalidArgument("write_trajectory: snapshot times collide at 6 decimals (" + name + ")");
    io::write_sheet_csv(s, dir / name);
  }
  std::ofstream m(dir / "manifest.txt");
  m << "dt = " << io::format_double(traj.dt) << '\n'
    << "delta = " << io::format_double(traj.blob.delta) << '\n'
    << "filter_threshold = " << io::format_double(traj.filter_threshold) << '\n'
    << "N = " << (traj.snapshots.empty() ? 0 : traj.snapshots[0].size()) << '\n'
    << "snapshots = " << traj.snapshots.size() << '\n'
    << "finite_energy = " << (!traj.snapshots.empty() && traj.snapshots[0].finite_energy() ? 1 : 0)
    << '\n';
  if (!m) throw Error("cannot write manifest in " + dir.string());
}

Trajectory read_trajectory(const std::filesystem::path& dir) {
  std::ifstream m(dir / "manifest.txt");
  if (!m) throw InvalidArgument("read_trajectory: no manifest.txt in " + dir.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(m, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  for (const char* key : {"dt", "delta", "filter_threshold", "N"})
    if (!kv.count(key)) throw InvalidArgument(std::string("read_trajectory: manifest lacks ") + key);
  Trajectory t;
  t.dt = std::stod(kv["dt"]);
  t.blob = BlobParameter(std::stod(kv["delta"]));
  t.filter_threshold = std::stod(kv["filter_threshold"]);
  const bool fe = kv.count("finite_energy") && kv["finite_energy"] == "1";
  std::vector<std::pair<double, std::filesystem::path>> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.rfind("t=", 0) == 0 && e.path().extension() == ".csv")
      files.emplace_back(io::snapshot_time(e.path()), e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& [time, path] : files) t.snapshots.push_back(io::read_sheet_csv(path, time, false));
  if (fe)
    for (auto& s : t.snapshots) s = VortexSheet(s.position(), s.gamma(), s.time(), true);
  const std::size_t n = std::stoul(kv["N"]);
  for (const auto& s : t.snapshots)
    if (s.size() != n) throw InvalidArgument("read_trajectory: snapshot size differs from manifest N");
  return t;
}

}  // namespace sheetlab
