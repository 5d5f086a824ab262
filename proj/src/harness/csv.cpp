#include "scir/harness/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace scir::harness {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.10g", value);
  return buffer;
}

std::string run_record_header() { return "experiment,method,seed,h,n_fraction,iteration,metric,value"; }

std::string to_csv_row(const RunRecord& r) {
  return csv_field(r.experiment) + ',' + csv_field(r.method) + ',' + std::to_string(r.seed) + ',' + csv_number(r.h) +
         ',' + csv_number(r.n_fraction) + ',' + std::to_string(r.iteration) + ',' + csv_field(r.metric) + ',' +
         csv_number(r.value);
}

void write_run_records(std::ostream& out, std::span<const RunRecord> records) {
  out << run_record_header() << '\n';
  for (const auto& r : records) out << to_csv_row(r) << '\n';
}

void write_run_records_file(const std::string& path, std::span<const RunRecord> records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_run_records(out, records);
}

}  // namespace scir::harness
