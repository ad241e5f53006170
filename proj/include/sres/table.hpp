#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sres {

/// Minimal string table for the harness CSV files.
struct CsvTable {
  std::vector<std::string> comments;  // written as "# ..." lines
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position by name; throws ParseError when absent.
  [[nodiscard]] std::size_t column(const std::string& name) const;
  [[nodiscard]] const std::string& at(std::size_t row, const std::string& name) const;
  /// Empty cell means absent.
  [[nodiscard]] std::optional<double> number(std::size_t row, const std::string& name) const;

  [[nodiscard]] std::string to_string() const;
  void write(const std::filesystem::path& path) const;
  static CsvTable read(const std::filesystem::path& path);
};

/// Empty string for an absent value, shortest round-trip decimal otherwise.
std::string cell(const std::optional<double>& value);

}  // namespace sres
