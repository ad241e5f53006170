#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sres/dataset.hpp"
#include "sres/metrics.hpp"
#include "sres/samplers.hpp"

namespace sres {

/// Outcome of one detector run over a whole dataset or one of its samples.
struct DetectionResult {
  std::string method;
  std::map<std::string, std::string> params;
  Flags record_flags;
  std::optional<CellFlags> cell_flags;
  std::string dataset_id;
  std::optional<SampleIndex> scope;  // empty: whole dataset
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  [[nodiscard]] std::size_t flagged() const { return count_flags(record_flags); }
  /// Dataset row index of position i in record_flags.
  [[nodiscard]] std::size_t record_index(std::size_t i) const {
    return scope ? scope->indices[i] : i;
  }
  [[nodiscard]] std::string scope_string() const;
};

/// CSV with `record_index,flag` columns preceded by '#' provenance lines.
void write_detection_csv(const DetectionResult& result, const std::filesystem::path& path,
                         const std::vector<std::string>& extra_comments = {});

}  // namespace sres
