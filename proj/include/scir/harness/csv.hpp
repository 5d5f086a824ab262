#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace scir::harness {

// One metric observation. Column order is fixed:
// experiment,method,seed,h,n_fraction,iteration,metric,value
struct RunRecord {
  std::string experiment;
  std::string method;
  std::uint64_t seed = 0;
  double h = 0.0;
  double n_fraction = 0.0;
  std::uint64_t iteration = 0;
  std::string metric;
  double value = 0.0;
};

// Quotes a field when it contains a comma, quote, or line break; embedded
// quotes are doubled.
std::string csv_field(const std::string& text);
// Shortest round-trippable-enough decimal (%.10g); inf and nan spelled out.
std::string csv_number(double value);

std::string run_record_header();
std::string to_csv_row(const RunRecord& record);
void write_run_records(std::ostream& out, std::span<const RunRecord> records);
void write_run_records_file(const std::string& path, std::span<const RunRecord> records);

}  // namespace scir::harness
