#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "sheetlab/field.hpp"
#include "sheetlab/sheet_io.hpp"

namespace sheetlab {

Domain Domain::strip(double ymax, std::size_t ny) {
  if (!(ymax > 0.0)) throw InvalidArgument("strip domain: Y_max must be positive");
  if (ny == 0) throw InvalidArgument("strip domain: ny must be positive");
  Domain d;
  d.kind = DomainKind::strip;
  d.x0 = -pi;
  d.lx = two_pi;
  d.ly = 2.0 * ymax;
  d.y0 = -ymax + 0.5 * d.ly / static_cast<double>(ny);
  return d;
}

GridField::GridField(Domain dom, std::size_t nx, std::size_t ny, std::size_t ncomp,
                     std::vector<std::string> units)
    : dom_(dom), nx_(nx), ny_(ny), nc_(ncomp), data_(nx * ny * ncomp, 0.0), units_(std::move(units)) {
  validate();
}

GridField::GridField(Domain dom, std::size_t nx, std::size_t ny, std::size_t ncomp,
                     std::vector<double> data, std::vector<std::string> units)
    : dom_(dom), nx_(nx), ny_(ny), nc_(ncomp), data_(std::move(data)), units_(std::move(units)) {
  validate();
}

void GridField::validate() const {
  if (!is_pow2(nx_) || !is_pow2(ny_) || nx_ < 4 || ny_ < 4)
    throw InvalidArgument("GridField: dimensions must be powers of two >= 4");
  if (nc_ == 0) throw InvalidArgument("GridField: at least one component required");
  if (data_.size() != nx_ * ny_ * nc_) throw InvalidArgument("GridField: data size mismatch");
  if (!units_.empty() && units_.size() != nc_) throw InvalidArgument("GridField: one unit per component");
  if (!(dom_.lx > 0.0) || !(dom_.ly > 0.0)) throw InvalidArgument("GridField: bad domain extent");
  for (double v : data_)
    if (!std::isfinite(v)) throw InvalidArgument("GridField: non-finite data");
}

GridField GridField::vector(Domain dom, std::size_t nx, std::size_t ny,
                            const std::function<Vec2(double, double)>& f) {
  GridField g(dom, nx, ny, 2, std::vector<std::string>{"velocity", "velocity"});
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const Vec2 v = f(g.x(ix), g.y(iy));
      g.at(0, iy, ix) = v.x;
      g.at(1, iy, ix) = v.y;
    }
  g.validate();
  return g;
}

GridField GridField::scalar(Domain dom, std::size_t nx, std::size_t ny,
                            const std::function<double(double, double)>& f) {
  GridField g(dom, nx, ny, 1, std::vector<std::string>{"pressure"});
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix) g.at(0, iy, ix) = f(g.x(ix), g.y(iy));
  g.validate();
  return g;
}

double GridField::magnitude(std::size_t i) const {
  double s = 0.0;
  for (std::size_t c = 0; c < nc_; ++c) s += data_[c * points() + i] * data_[c * points() + i];
  return std::sqrt(s);
}

double GridField::max_magnitude() const {
  double m = 0.0;
  for (std::size_t i = 0; i < points(); ++i) m = std::max(m, magnitude(i));
  return m;
}

bool GridField::same_grid(const GridField& o) const {
  return nx_ == o.nx_ && ny_ == o.ny_ && dom_.kind == o.dom_.kind && dom_.x0 == o.dom_.x0 &&
         dom_.y0 == o.dom_.y0 && dom_.lx == o.dom_.lx && dom_.ly == o.dom_.ly;
}

double GridField::boundary_ratio() const {
  double b = 0.0, in = 0.0;
  for (std::size_t iy = 0; iy < ny_; ++iy)
    for (std::size_t ix = 0; ix < nx_; ++ix) {
      const double m = magnitude(iy * nx_ + ix);
      if (iy == 0 || iy + 1 == ny_)
        b = std::max(b, m);
      else
        in = std::max(in, m);
    }
  return in > 0.0 ? b / in : 0.0;
}

void check_strip_decay(const GridField& u, double tol) {
  if (u.domain().kind != DomainKind::strip) return;
  const double r = u.boundary_ratio();
  if (r > tol)
    throw InvalidArgument("strip field does not decay: boundary/interior magnitude ratio " +
                          std::to_string(r) + " exceeds " + std::to_string(tol));
}

void write_grid(const GridField& f, const std::filesystem::path& stem) {
  auto bin = stem;
  bin += ".bin";
  auto hdr = stem;
  hdr += ".hdr";
  {
    std::ofstream out(bin, std::ios::binary);
    if (!out) throw Error("cannot write " + bin.string());
    out.write(reinterpret_cast<const char*>(f.data().data()),
              static_cast<std::streamsize>(f.data().size() * sizeof(double)));
  }
  std::ofstream h(hdr);
  if (!h) throw Error("cannot write " + hdr.string());
  const auto& d = f.domain();
  h << "nx = " << f.nx() << '\n'
    << "ny = " << f.ny() << '\n'
    << "components = " << f.components() << '\n'
    << "domain = " << (d.kind == DomainKind::torus ? "torus" : "strip") << '\n'
    << "x0 = " << io::format_double(d.x0) << '\n'
    << "y0 = " << io::format_double(d.y0) << '\n'
    << "lx = " << io::format_double(d.lx) << '\n'
    << "ly = " << io::format_double(d.ly) << '\n';
  h << "units = ";
  for (std::size_t c = 0; c < f.components(); ++c)
    h << (c ? "," : "") << (f.units().empty() ? std::string("1") : f.units()[c]);
  h << '\n' << "layout = float64 little-endian, component-major, rows along y, x fastest\n";
}

GridField read_grid(const std::filesystem::path& stem) {
  auto bin = stem;
  bin += ".bin";
  auto hdr = stem;
  hdr += ".hdr";
  std::ifstream h(hdr);
  if (!h) throw InvalidArgument("cannot read " + hdr.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(h, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  for (const char* k : {"nx", "ny", "components", "domain", "x0", "y0", "lx", "ly"})
    if (!kv.count(k)) throw InvalidArgument(hdr.string() + ": missing key " + k);
  Domain d;
  d.kind = kv["domain"] == "strip" ? DomainKind::strip : DomainKind::torus;
  d.x0 = std::stod(kv["x0"]);
  d.y0 = std::stod(kv["y0"]);
  d.lx = std::stod(kv["lx"]);
  d.ly = std::stod(kv["ly"]);
  const std::size_t nx = std::stoul(kv["nx"]), ny = std::stoul(kv["ny"]), nc = std::stoul(kv["components"]);
  std::vector<double> data(nx * ny * nc);
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + bin.string());
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(data.size() * sizeof(double)))
    throw InvalidArgument(bin.string() + ": truncated data");
  std::vector<std::string> units;
  if (kv.count("units")) {
    std::stringstream ss(kv["units"]);
    std::string u;
    while (std::getline(ss, u, ',')) units.push_back(u);
    if (units.size() != nc) units.clear();
  }
  return GridField(d, nx, ny, nc, std::move(data), std::move(units));
}

void write_table(const Table& t, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  out << "key,value\n";
  for (const auto& [k, v] : t) out << k << ',' << io::format_double(v) << '\n';
}

}  // namespace sheetlab
