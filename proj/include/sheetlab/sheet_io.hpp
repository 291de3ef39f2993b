#pragma once

#include <filesystem>
#include <string>

#include "sheetlab/geometry.hpp"

namespace sheetlab::io {

// "t=0.500000.csv"
std::string snapshot_filename(double t);
// parse the time back out of a snapshot filename; throws on a foreign name
double snapshot_time(const std::filesystem::path& file);

// columns alpha,x,h,gamma with a mandatory header row, full round-trip precision
void write_sheet_csv(const VortexSheet& sheet, const std::filesystem::path& file);
VortexSheet read_sheet_csv(const std::filesystem::path& file, double time,
                           bool finite_energy = false);

// %.17g, locale independent
std::string format_double(double v);

}  // namespace sheetlab::io
