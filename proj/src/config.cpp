#include "sheetlab/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "sheetlab/sheet_io.hpp"

namespace sheetlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

IniFile IniFile::parse(const std::string& text, const std::string& origin) {
  IniFile ini;
  std::istringstream in(text);
  std::string line, section;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto c = line.find_first_of("#;");
    if (c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(no) + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (ini.lines.count(full))
      throw ConfigError(origin + ":" + std::to_string(no) + ": duplicate key '" + full + "'");
    ini.values[section][key] = trim(line.substr(eq + 1));
    ini.lines[full] = no;
  }
  return ini;
}

IniFile IniFile::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), file.string());
}

const char* to_string(SheetKind k) {
  switch (k) {
    case SheetKind::flat_uniform: return "flat_uniform";
    case SheetKind::zero_circulation: return "zero_circulation";
    case SheetKind::perturbed_analytic: return "perturbed_analytic";
  }
  return "?";
}

const char* to_string(Pipeline p) {
  switch (p) {
    case Pipeline::slit_energy: return "slit_energy";
    case Pipeline::regularity: return "regularity";
    case Pipeline::criterion: return "criterion";
    case Pipeline::pressure: return "pressure";
    case Pipeline::microlocal: return "microlocal";
  }
  return "?";
}

std::vector<std::string> pipeline_names() {
  return {"slit_energy", "regularity", "criterion", "pressure", "microlocal"};
}

namespace {

struct Reader {
  const IniFile& ini;
  std::set<std::string> used;

  const std::string* find(const std::string& sec, const std::string& key) {
    auto s = ini.values.find(sec);
    if (s == ini.values.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    used.insert(sec + "." + key);
    return &k->second;
  }

  [[noreturn]] void fail(const std::string& sec, const std::string& key, const std::string& why) {
    const std::string full = sec + "." + key;
    auto it = ini.lines.find(full);
    throw ConfigError("config key '" + full + "'" +
                      (it != ini.lines.end() ? " (line " + std::to_string(it->second) + ")" : "") + ": " + why);
  }

  double parse_double(const std::string& sec, const std::string& key, const std::string& v) {
    double d = 0.0;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    auto r = std::from_chars(b, e, d);
    if (r.ec != std::errc() || r.ptr != e || !std::isfinite(d)) fail(sec, key, "not a number: '" + v + "'");
    return d;
  }

  void num(const std::string& sec, const std::string& key, double& out, bool positive = true) {
    if (auto v = find(sec, key)) {
      out = parse_double(sec, key, *v);
      if (positive && !(out > 0.0)) fail(sec, key, "must be positive, got " + *v);
      if (!positive && !(out >= 0.0)) fail(sec, key, "must be nonnegative, got " + *v);
    }
  }

  void count(const std::string& sec, const std::string& key, std::size_t& out) {
    if (auto v = find(sec, key)) {
      long long n = 0;
      auto r = std::from_chars(v->data(), v->data() + v->size(), n);
      if (r.ec != std::errc() || r.ptr != v->data() + v->size()) fail(sec, key, "not an integer: '" + *v + "'");
      if (n <= 0) fail(sec, key, "must be positive, got " + *v);
      out = static_cast<std::size_t>(n);
    }
  }

  void integer(const std::string& sec, const std::string& key, int& out) {
    std::size_t n = static_cast<std::size_t>(out);
    count(sec, key, n);
    out = static_cast<int>(n);
  }

  void list(const std::string& sec, const std::string& key, std::vector<double>& out) {
    if (auto v = find(sec, key)) {
      out.clear();
      std::stringstream ss(*v);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        const double d = parse_double(sec, key, item);
        if (!(d > 0.0)) fail(sec, key, "entries must be positive");
        out.push_back(d);
      }
      if (out.empty()) fail(sec, key, "empty list");
    }
  }
};

}  // namespace

ScenarioConfig parse_config(const IniFile& ini) {
  ScenarioConfig c;
  Reader r{ini, {}};

  if (auto v = r.find("scenario", "name")) {
    if (v->empty()) r.fail("scenario", "name", "must not be empty");
    c.name = *v;
  }
  if (auto v = r.find("scenario", "pipeline")) {
    bool ok = false;
    for (auto p : {Pipeline::slit_energy, Pipeline::regularity, Pipeline::criterion, Pipeline::pressure,
                   Pipeline::microlocal})
      if (*v == to_string(p)) {
        c.pipeline = p;
        ok = true;
      }
    if (!ok) r.fail("scenario", "pipeline", "unknown pipeline '" + *v + "'");
  }
  if (auto v = r.find("sheet", "kind")) {
    bool ok = false;
    for (auto k : {SheetKind::flat_uniform, SheetKind::zero_circulation, SheetKind::perturbed_analytic})
      if (*v == to_string(k)) {
        c.sheet = k;
        ok = true;
      }
    if (!ok) r.fail("sheet", "kind", "unknown sheet kind '" + *v + "'");
  }
  r.num("sheet", "amplitude", c.amplitude, false);
  r.integer("sheet", "mode", c.mode);
  r.integer("sheet", "gamma_mode", c.gamma_mode);

  r.count("numerics", "N", c.N);
  r.num("numerics", "delta", c.delta, false);
  r.num("numerics", "dt", c.dt);
  r.num("numerics", "t_end", c.t_end);
  r.num("numerics", "filter_threshold", c.filter_threshold, false);
  r.count("numerics", "M", c.M);
  r.count("numerics", "M_y", c.M_y);
  r.num("numerics", "Y_max", c.y_max);
  r.num("numerics", "tube_eps1", c.tube_eps1);
  r.integer("numerics", "tube_samples", c.tube_samples);
  r.list("numerics", "eps_list", c.eps_list);
  r.list("numerics", "q", c.q_list);
  r.num("numerics", "set_gamma", c.set_gamma);
  r.list("numerics", "drift_dt_pair", c.drift_dt_pair);
  r.count("numerics", "energy_stride", c.energy_stride);

  r.num("tolerances", "normal_continuity", c.tol_normal_continuity);
  r.num("tolerances", "pressure_continuity", c.tol_pressure_continuity);
  r.num("tolerances", "kinematic", c.tol_kinematic);
  r.num("tolerances", "energy_initial", c.tol_energy_initial);
  r.num("tolerances", "energy_agreement", c.tol_energy_agreement);
  r.num("tolerances", "drift", c.tol_drift);
  r.num("tolerances", "drift_ratio", c.tol_drift_ratio);
  r.num("tolerances", "pressure_agreement", c.tol_pressure_agreement);
  r.num("tolerances", "taylor_green", c.tol_taylor_green);
  r.num("tolerances", "flux_plateau", c.tol_flux_plateau);
  r.num("tolerances", "flux_drop", c.tol_flux_drop);
  r.num("tolerances", "s3", c.tol_s3);
  r.num("tolerances", "microlocal_error", c.tol_microlocal_error);
  r.num("tolerances", "microlocal_order", c.tol_microlocal_order);
  r.num("tolerances", "area_slope", c.tol_area_slope);

  if (auto v = r.find("output", "dir")) {
    if (v->empty()) r.fail("output", "dir", "must not be empty");
    c.out_dir = *v;
  }

  for (const auto& [sec, kv] : ini.values)
    for (const auto& [key, val] : kv)
      if (!r.used.count(sec + "." + key)) r.fail(sec.empty() ? "<global>" : sec, key, "unknown key");

  // cross-field validation
  if (!is_pow2(c.N) || c.N < 8) r.fail("numerics", "N", "must be a power of two >= 8");
  if (!is_pow2(c.M) || c.M < 8) r.fail("numerics", "M", "must be a power of two >= 8");
  if (!is_pow2(c.M_y) || c.M_y < 8) r.fail("numerics", "M_y", "must be a power of two >= 8");
  const double steps = c.t_end / c.dt;
  if (std::abs(steps - std::round(steps)) > 1e-8) r.fail("numerics", "t_end", "must be an integer multiple of dt");
  if (c.drift_dt_pair.size() != 2 || !(c.drift_dt_pair[1] < c.drift_dt_pair[0]))
    r.fail("numerics", "drift_dt_pair", "needs two decreasing step sizes");
  for (double h : c.drift_dt_pair) {
    const double s = c.t_end / h;
    if (std::abs(s - std::round(s)) > 1e-8) r.fail("numerics", "drift_dt_pair", "t_end must be a multiple of each step");
  }
  for (std::size_t i = 1; i < c.eps_list.size(); ++i)
    if (!(c.eps_list[i] < c.eps_list[i - 1])) r.fail("numerics", "eps_list", "must be strictly decreasing");
  if (c.set_gamma > 1.0) r.fail("numerics", "set_gamma", "must lie in (0, 1]");
  if (c.tube_samples < 16) r.fail("numerics", "tube_samples", "must be >= 16");
  if (c.amplitude >= c.y_max) r.fail("sheet", "amplitude", "must be below Y_max");
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& file) { return parse_config(IniFile::load(file)); }

std::string config_text(const ScenarioConfig& c) {
  std::ostringstream o;
  auto d = [](double v) { return io::format_double(v); };
  auto lst = [&](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + d(v[i]);
    return s;
  };
  o << "[scenario]\nname = " << c.name << "\npipeline = " << to_string(c.pipeline) << "\n\n";
  o << "[sheet]\nkind = " << to_string(c.sheet) << "\namplitude = " << d(c.amplitude) << "\nmode = " << c.mode
    << "\ngamma_mode = " << c.gamma_mode << "\n\n";
  o << "[numerics]\nN = " << c.N << "\ndelta = " << d(c.delta) << "\ndt = " << d(c.dt) << "\nt_end = " << d(c.t_end)
    << "\nfilter_threshold = " << d(c.filter_threshold) << "\nM = " << c.M << "\nM_y = " << c.M_y
    << "\nY_max = " << d(c.y_max) << "\ntube_eps1 = " << d(c.tube_eps1) << "\ntube_samples = " << c.tube_samples
    << "\neps_list = " << lst(c.eps_list) << "\nq = " << lst(c.q_list) << "\nset_gamma = " << d(c.set_gamma)
    << "\ndrift_dt_pair = " << lst(c.drift_dt_pair) << "\nenergy_stride = " << c.energy_stride << "\n\n";
  o << "[tolerances]\nnormal_continuity = " << d(c.tol_normal_continuity)
    << "\npressure_continuity = " << d(c.tol_pressure_continuity) << "\nkinematic = " << d(c.tol_kinematic)
    << "\nenergy_initial = " << d(c.tol_energy_initial) << "\nenergy_agreement = " << d(c.tol_energy_agreement)
    << "\ndrift = " << d(c.tol_drift) << "\ndrift_ratio = " << d(c.tol_drift_ratio)
    << "\npressure_agreement = " << d(c.tol_pressure_agreement) << "\ntaylor_green = " << d(c.tol_taylor_green)
    << "\nflux_plateau = " << d(c.tol_flux_plateau) << "\nflux_drop = " << d(c.tol_flux_drop)
    << "\ns3 = " << d(c.tol_s3) << "\nmicrolocal_error = " << d(c.tol_microlocal_error)
    << "\nmicrolocal_order = " << d(c.tol_microlocal_order) << "\narea_slope = " << d(c.tol_area_slope) << "\n\n";
  o << "[output]\ndir = " << c.out_dir.string() << "\n";
  return o.str();
}

}  // namespace sheetlab
