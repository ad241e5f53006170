#pragma once

#include <filesystem>
#include <vector>

#include "sres/table.hpp"

namespace sres {

/// Plot-ready tables rebuilt from one or more results directories.
struct Report {
  CsvTable by_scheme;  // resilience per (dataset, method, scheme, params)
  CsvTable quality;    // resilience next to precision/recall/F1
  CsvTable ensemble;   // ensemble against its components
  CsvTable accuracy;   // MSE and rate RMSE per cell
};

/// Throws ConfigError when no directory holds a replicates.csv.
Report build_report(const std::vector<std::filesystem::path>& result_dirs);

/// Writes report_by_scheme.csv, report_quality.csv, report_ensemble.csv and
/// report_accuracy.csv into `out_dir`.
void write_report(const Report& report, const std::filesystem::path& out_dir);

}  // namespace sres
