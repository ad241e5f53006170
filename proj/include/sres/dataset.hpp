#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sres {

/// Boolean per-record flags; true always means "outlier".
using Flags = std::vector<bool>;

/// N x V numeric table with optional ground-truth outlier labels.
struct Dataset {
  Eigen::MatrixXd values;
  std::vector<std::string> column_names;
  std::optional<Flags> ground_truth;
  std::string id;

  [[nodiscard]] std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  [[nodiscard]] std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }

  /// Throws if any invariant (non-empty, finite cells, label length) is violated.
  void validate() const;

  /// Rows at `indices`, in the given order, with matching ground truth.
  [[nodiscard]] Dataset restrict(std::span<const std::size_t> indices) const;
};

/// Reads a comma-separated file whose first non-comment line is the header.
/// Lines starting with '#' are skipped. When `gt_column` is set, that column
/// must hold 0/1 values and becomes the ground truth.
Dataset load_csv(const std::filesystem::path& path,
                 const std::optional<std::string>& gt_column = std::nullopt);

/// Writes values with shortest round-trip formatting; ground truth (if any)
/// is appended as the `gt_column` column.
void write_csv(const Dataset& data, const std::filesystem::path& path,
               const std::vector<std::string>& comment_lines = {},
               const std::string& gt_column = "is_outlier");

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Strict full-string parse of a finite double.
std::optional<double> parse_double(std::string_view text);

}  // namespace sres
