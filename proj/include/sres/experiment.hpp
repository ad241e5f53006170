#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sres/config.hpp"
#include "sres/metrics.hpp"
#include "sres/table.hpp"
#include "sres/resilience.hpp"

namespace sres {

/// One (dataset, method, scheme, params, replicate, part) measurement.
struct ReplicateRow {
  std::string dataset;
  std::string method;
  std::string scheme;
  std::string params;
  std::size_t replicate = 0;
  std::size_t part = 0;
  std::size_t sample_size = 0;
  std::size_t true_outliers = 0;
  std::size_t flagged_sample = 0;
  std::size_t flagged_whole = 0;
  std::optional<double> rho_exact;
  std::optional<double> rho_blind;
  std::optional<double> alpha_hat;
  std::optional<double> beta_hat;
  std::optional<double> gamma_hat;
  std::optional<double> alpha_true;
  std::optional<double> beta_true;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::string error;
};

/// Aggregate over the replicate rows of one grid cell.
struct SummaryRow {
  std::string dataset;
  std::string method;
  std::string scheme;
  std::string params;
  std::size_t sample_size = 0;
  std::size_t samples = 0;
  std::size_t failed = 0;
  std::optional<double> mean_exact;
  std::optional<double> sd_exact;
  std::optional<double> mean_blind;
  std::optional<double> sd_blind;
  std::optional<double> mse;
  std::optional<double> rmse_alpha;
  std::optional<double> rmse_beta;
  std::optional<double> mean_precision;
  std::optional<double> mean_recall;
  std::optional<double> mean_f1;
  std::optional<double> whole_precision;
  std::optional<double> whole_recall;
  std::optional<double> whole_f1;
  std::optional<double> blind_alpha_whole;
  std::optional<double> blind_beta_whole;
};

struct SkippedRow {
  std::string dataset;
  std::string method;
  std::string scheme;
  std::string params;
  std::string reason;
};

struct ResultsTable {
  std::vector<ReplicateRow> replicates;
  std::vector<SummaryRow> summaries;
  std::vector<SkippedRow> skipped;
  std::size_t grid_size = 0;
  bool has_ground_truth = false;
};

/// Summary statistics of one cell from its replicate rows.
SummaryRow summarize_rows(const std::vector<ReplicateRow>& rows);

/// Evaluates one dataset over every scheme setting and target of the config.
void run_dataset(const ExperimentConfig& config, const Dataset& data, ResultsTable& out);

/// Runs the whole grid. Infeasible cells become skipped rows.
ResultsTable run_experiment(const ExperimentConfig& config);

/// replicates.csv, summary.csv, skipped.csv, quality.csv (labeled data) and
/// config.txt under `dir`.
void write_results(const ResultsTable& results, const ExperimentConfig& config,
                   const std::filesystem::path& dir);

CsvTable replicate_table(const ResultsTable& results);
CsvTable summary_table(const ResultsTable& results);

/// Loads replicate rows back from replicates.csv.
std::vector<ReplicateRow> read_replicates(const std::filesystem::path& path);

}  // namespace sres
