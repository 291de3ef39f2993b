#include "sheetlab/sheet_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sheetlab::io {

std::string snapshot_filename(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "t=%.6f.csv", t);
  return buf;
}

double snapshot_time(const std::filesystem::path& file) {
  const std::string name = file.filename().string();
  if (name.rfind("t=", 0) != 0 || name.size() < 7 || name.substr(name.size() - 4) != ".csv")
    throw InvalidArgument("not a snapshot file name: " + name);
  const std::string num = name.substr(2, name.size() - 6);
  double t = 0.0;
  auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), t);
  if (ec != std::errc() || ptr != num.data() + num.size())
    throw InvalidArgument("bad time in snapshot file name: " + name);
  return t;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_sheet_csv(const VortexSheet& sheet, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  out << "alpha,x,h,gamma\n";
  for (std::size_t j = 0; j < sheet.size(); ++j)
    out << format_double(sheet.alpha(j)) << ',' << format_double(sheet.position()[j].x) << ','
        << format_double(sheet.position()[j].y) << ',' << format_double(sheet.gamma()[j]) << '\n';
  if (!out) throw Error("write failed: " + file.string());
}

VortexSheet read_sheet_csv(const std::filesystem::path& file, double time, bool finite_energy) {
  std::ifstream in(file);
  if (!in) throw InvalidArgument("cannot read " + file.string());
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "alpha,x,h,gamma") throw InvalidArgument(file.string() + ": missing header alpha,x,h,gamma");
  std::vector<Vec2> pos;
  std::vector<double> gam, alf;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    double v[4];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int c = 0; c < 4; ++c) {
      while (p < end && *p == ' ') ++p;
      auto [q, ec] = std::from_chars(p, end, v[c]);
      if (ec != std::errc())
        throw InvalidArgument(file.string() + ": bad number in row " + std::to_string(row + 1));
      p = q;
      if (c < 3) {
        if (p >= end || *p != ',') throw InvalidArgument(file.string() + ": expected 4 columns");
        ++p;
      }
    }
    alf.push_back(v[0]);
    pos.push_back({v[1], v[2]});
    gam.push_back(v[3]);
    ++row;
  }
  VortexSheet s(std::move(pos), std::move(gam), time, finite_energy);
  for (std::size_t j = 0; j < s.size(); ++j)
    if (std::abs(alf[j] - s.alpha(j)) > 1e-12)
      throw InvalidArgument(file.string() + ": alpha column is not the uniform grid on [-pi, pi)");
  return s;
}

}  // namespace sheetlab::io
