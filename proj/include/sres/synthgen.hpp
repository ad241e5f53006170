#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sres/dataset.hpp"

namespace sres {

enum class OutlierDistribution {
  dist1,  // N((4, 0), 0.25^2 I)
  dist2,  // equal mixture of N((4, 0), 0.25^2 I) and N((0, 6), 0.25^2 I)
};

struct SynthSpec {
  std::size_t n = 1000;
  double base_mean[2] = {0.0, 0.0};
  double base_sds[2] = {1.0, 2.0};
  OutlierDistribution outlier_distribution = OutlierDistribution::dist1;
  double rate = 0.05;
  std::uint64_t seed = 0;

  /// Throws ConfigError unless n >= 1 and 0 <= rate < 1.
  void validate() const;
};

const char* to_string(OutlierDistribution d);
std::optional<OutlierDistribution> parse_distribution(std::string_view name);

/// Bivariate normal inliers with exactly round(rate * n) outliers at uniformly
/// random row positions; ground truth marks the outliers.
Dataset generate(const SynthSpec& spec);

/// Dataset id such as "dist1_r0.05_n1000" (seed not included).
std::string synth_id(const SynthSpec& spec);

/// 1,500 independent bivariate normal records, mean (-1, 1), variances
/// (1.015, 1.035); no ground truth.
Dataset generate_fig1(std::uint64_t seed);

}  // namespace sres
