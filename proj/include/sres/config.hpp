#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sres/detectors.hpp"
#include "sres/ensemble.hpp"
#include "sres/samplers.hpp"
#include "sres/resilience.hpp"
#include "sres/synthgen.hpp"

namespace sres {

inline constexpr const char* kVersion = "0.1.0";

/// Where one dataset of the grid comes from.
struct DatasetSource {
  bool synthetic = true;
  SynthSpec synth;                 // synthetic
  std::filesystem::path path;      // csv
  std::optional<std::string> gt_column;
  std::string id;
};

/// Absolute record count or a percentage of the dataset size.
struct SizeParam {
  double value = 0.0;
  bool percent = false;

  /// Record count for a dataset of n rows (percent rounds to nearest, at least 1).
  [[nodiscard]] std::size_t resolve(std::size_t n) const;
  [[nodiscard]] std::string text() const;
};

struct SchemeGrid {
  SchemeKind kind = SchemeKind::random;
  std::vector<SizeParam> sizes;                                  // random
  std::vector<std::pair<std::size_t, std::size_t>> block_pairs;  // block: (n_blocks, block_size)
  std::vector<std::size_t> subsets;                              // partition

  /// Concrete schemes for a dataset of n rows.
  [[nodiscard]] std::vector<SchemeSpec> expand(std::size_t n) const;
  /// Number of parameter settings, independent of the dataset.
  [[nodiscard]] std::size_t settings() const;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<DatasetSource> datasets;
  std::vector<DetectorConfig> detectors;
  bool ensemble_target = false;
  std::vector<DetectorConfig> ensemble_members;
  std::vector<SchemeGrid> schemes;
  std::size_t replicates = 100;
  std::uint64_t master_seed = 0;
  bool exact = true;
  bool blind = false;
  std::filesystem::path output_dir = "results";
  EmOptions em;
  std::size_t threads = 0;
  /// Normalized "key = value" lines, hashed for provenance.
  std::map<std::string, std::string> entries;

  [[nodiscard]] std::string config_hash() const;
  /// Grid cells: datasets x scheme settings x (detectors + ensemble).
  [[nodiscard]] std::size_t grid_size() const;
  [[nodiscard]] std::size_t target_count() const {
    return detectors.size() + (ensemble_target ? 1 : 0);
  }
  /// "# ..." provenance lines for every output file.
  [[nodiscard]] std::vector<std::string> provenance() const;
};

/// Parses the flat dotted-key format (`key = value`, '#' comments). Relative
/// paths resolve against `base_dir`. Throws ConfigError on unknown keys or
/// invalid values.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Splits "a, b ,c" into trimmed non-empty items.
std::vector<std::string> split_list(const std::string& text);

}  // namespace sres
