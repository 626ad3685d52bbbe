#include "otfs/harness/csv.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace otfs {

std::string format_value(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, std::uint64_t master_seed) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    for (const auto& [metric, value] : row.metrics) {
      out << format_value(row.snr_db) << ',' << row.scheme << ',' << metric << ','
          << format_value(value) << ',' << row.n_trials << ',' << master_seed << '\n';
    }
  }
}

void write_csv_file(const std::string& path, const std::vector<ResultRow>& rows,
                    std::uint64_t master_seed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(out, rows, master_seed);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace otfs
