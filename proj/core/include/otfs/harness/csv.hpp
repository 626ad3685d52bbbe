#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "otfs/harness/experiment.hpp"

namespace otfs {

inline constexpr const char* kCsvHeader = "snr_db,scheme,metric,value,n_trials,master_seed";

// %.9g formatting used for every floating value in the CSV.
std::string format_value(double value);

// Long format, one line per (row, metric).
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows, std::uint64_t master_seed);
void write_csv_file(const std::string& path, const std::vector<ResultRow>& rows,
                    std::uint64_t master_seed);

}  // namespace otfs
