#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sheetlab {

enum class Comparator { at_most, at_least };

struct Check {
  std::string group, name;
  double value = 0.0, tolerance = 0.0;
  Comparator cmp = Comparator::at_most;
  bool pass = false;
  std::string note;
};

struct ReportTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Structured text report: "key: value" lines grouped by check group, plus CSV tables.
// NaN values always fail.
class VerificationReport {
 public:
  const Check& check(const std::string& group, const std::string& name, double value, double tolerance,
                     Comparator cmp = Comparator::at_most, std::string note = {});
  void info(const std::string& group, const std::string& key, const std::string& value);
  void info(const std::string& group, const std::string& key, double value);
  void table(ReportTable t);
  void merge(const VerificationReport& other);

  bool passed() const;
  int failures() const;
  const std::vector<Check>& checks() const { return checks_; }
  const std::vector<ReportTable>& tables() const { return tables_; }

  std::string to_text() const;
  // report.txt plus <table>.csv for every table
  void write(const std::filesystem::path& dir) const;

 private:
  struct Info {
    std::string group, key, value;
  };
  std::vector<Check> checks_;
  std::vector<Info> info_;
  std::vector<ReportTable> tables_;
};

void write_csv(const ReportTable& t, const std::filesystem::path& file);

}  // namespace sheetlab
