#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sres {

enum class SchemeKind { random, block, partition };

/// A sampling scheme together with its parameters.
struct SchemeSpec {
  SchemeKind kind = SchemeKind::random;
  std::size_t size = 0;        // random: records per sample
  std::size_t n_blocks = 0;    // block
  std::size_t block_size = 0;  // block
  std::size_t k = 0;           // partition: number of parts

  static SchemeSpec random(std::size_t size) { return {SchemeKind::random, size, 0, 0, 0}; }
  static SchemeSpec block(std::size_t n_blocks, std::size_t block_size) {
    return {SchemeKind::block, 0, n_blocks, block_size, 0};
  }
  static SchemeSpec partition(std::size_t k) { return {SchemeKind::partition, 0, 0, 0, k}; }

  /// "random", "block" or "partition".
  [[nodiscard]] std::string name() const;
  /// Parameter string such as "50", "5-4" or "10".
  [[nodiscard]] std::string params() const;
  /// "random(50)", "block(5,4)", "partition(10)".
  [[nodiscard]] std::string describe() const;
  /// Number of samples one replicate produces (k for partition, else 1).
  [[nodiscard]] std::size_t samples_per_replicate() const;
  /// Size of each sample for a dataset of n rows (largest part for partition).
  [[nodiscard]] std::size_t sample_size(std::size_t n) const;
  /// Throws RangeError if the scheme cannot be applied to n rows.
  void check_feasible(std::size_t n) const;

  bool operator==(const SchemeSpec&) const = default;
};

/// Ordered, distinct row indices drawn from a parent of `parent_n` rows.
struct SampleIndex {
  std::vector<std::size_t> indices;
  std::size_t parent_n = 0;
  SchemeSpec scheme;
  std::size_t part_id = 0;  // partition only
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t size() const { return indices.size(); }
  [[nodiscard]] std::string describe() const;
  /// Throws RangeError when indices repeat or exceed parent_n.
  void validate() const;
};

/// Uniform sample without replacement, indices in ascending order.
SampleIndex random_sample(std::size_t n, std::size_t size, std::uint64_t seed);

/// n_blocks disjoint, non-wrapping runs of block_size consecutive rows,
/// uniform over all feasible placements.
SampleIndex block_sample(std::size_t n, std::size_t n_blocks, std::size_t block_size,
                         std::uint64_t seed);

/// Random permutation of [0, n) cut into k chunks of size floor(n/k) or ceil(n/k).
std::vector<SampleIndex> partition(std::size_t n, std::size_t k, std::uint64_t seed);

/// All samples of one replicate of `scheme` (k parts for partition).
std::vector<SampleIndex> draw(std::size_t n, const SchemeSpec& scheme, std::uint64_t seed);

void write_sample_csv(const SampleIndex& sample, const std::filesystem::path& path,
                      const std::vector<std::string>& extra_comments = {});
SampleIndex read_sample_csv(const std::filesystem::path& path);

/// Parses "random(50)" / "block(5,4)" / "partition(10)".
std::optional<SchemeSpec> parse_scheme(std::string_view text);

}  // namespace sres
