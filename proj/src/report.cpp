#include "sheetlab/report.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sheetlab/core.hpp"
#include "sheetlab/sheet_io.hpp"

namespace sheetlab {

const Check& VerificationReport::check(const std::string& group, const std::string& name, double value,
                                       double tolerance, Comparator cmp, std::string note) {
  Check c{group, name, value, tolerance, cmp, false, std::move(note)};
  if (std::isfinite(value)) c.pass = cmp == Comparator::at_most ? value <= tolerance : value >= tolerance;
  checks_.push_back(std::move(c));
  return checks_.back();
}

void VerificationReport::info(const std::string& group, const std::string& key, const std::string& value) {
  info_.push_back({group, key, value});
}

void VerificationReport::info(const std::string& group, const std::string& key, double value) {
  info(group, key, io::format_double(value));
}

void VerificationReport::table(ReportTable t) { tables_.push_back(std::move(t)); }

void VerificationReport::merge(const VerificationReport& o) {
  checks_.insert(checks_.end(), o.checks_.begin(), o.checks_.end());
  info_.insert(info_.end(), o.info_.begin(), o.info_.end());
  tables_.insert(tables_.end(), o.tables_.begin(), o.tables_.end());
}

bool VerificationReport::passed() const { return failures() == 0; }

int VerificationReport::failures() const {
  int n = 0;
  for (const auto& c : checks_) n += c.pass ? 0 : 1;
  return n;
}

std::string VerificationReport::to_text() const {
  std::ostringstream out;
  std::vector<std::string> groups;
  std::set<std::string> seen;
  auto add = [&](const std::string& g) {
    if (seen.insert(g).second) groups.push_back(g);
  };
  for (const auto& c : checks_) add(c.group);
  for (const auto& i : info_) add(i.group);
  for (const auto& g : groups) {
    out << '[' << g << "]\n";
    for (const auto& c : checks_) {
      if (c.group != g) continue;
      out << c.name << ": value=" << io::format_double(c.value)
          << " tolerance=" << (c.cmp == Comparator::at_most ? "<=" : ">=") << io::format_double(c.tolerance)
          << " verdict=" << (c.pass ? "PASS" : "FAIL");
      if (!c.note.empty()) out << " note=" << c.note;
      out << '\n';
    }
    for (const auto& i : info_)
      if (i.group == g) out << i.key << ": " << i.value << '\n';
    out << '\n';
  }
  out << "summary: checks=" << checks_.size() << " failures=" << failures()
      << " status=" << (passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

void write_csv(const ReportTable& t, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << io::format_double(r[c]);
    out << '\n';
  }
}

void VerificationReport::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "report.txt");
  if (!out) throw Error("cannot write " + (dir / "report.txt").string());
  out << to_text();
  for (const auto& t : tables_) write_csv(t, dir / (t.name + ".csv"));
}

}  // namespace sheetlab
