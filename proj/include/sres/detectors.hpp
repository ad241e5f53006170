#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sres/dataset.hpp"
#include "sres/detection.hpp"
#include "sres/metrics.hpp"
#include "sres/samplers.hpp"

namespace sres {

enum class Method { three_sigma, boxplot, chi_square, mad, mahalanobis, kmeans, lof };

inline constexpr Method kAllMethods[] = {Method::three_sigma, Method::boxplot,
                                         Method::chi_square,  Method::mad,
                                         Method::mahalanobis, Method::kmeans,
                                         Method::lof};

const char* to_string(Method m);
std::optional<Method> parse_method(std::string_view name);
/// Comma separated list of valid method names, for usage messages.
std::string method_names();
bool is_univariate(Method m);

struct DetectorConfig {
  Method method = Method::three_sigma;
  double top_fraction = 0.10;
  std::size_t k_clusters = 5;
  std::size_t min_pts = 10;
  double chi_sq_quantile = 0.975;
  double mad_multiplier = 3.0;
  double ridge_epsilon = 1e-8;
  Aggregation aggregation = Aggregation::any;

  /// Throws ConfigError on out-of-range fields.
  void validate() const;
  /// Effective parameters relevant to `method`, for provenance.
  [[nodiscard]] std::map<std::string, std::string> params() const;

  bool operator==(const DetectorConfig&) const = default;
};

/// Runs one detector on the dataset, or on the rows of `scope` when given.
/// Univariate methods run per column and are combined with cfg.aggregation.
DetectionResult run_detector(const Dataset& data, const DetectorConfig& cfg,
                             const std::optional<SampleIndex>& scope = std::nullopt,
                             std::uint64_t seed = 0);

/// Same as run_detector on an already restricted matrix (no scope bookkeeping).
DetectionResult detect_matrix(const Eigen::MatrixXd& values, const DetectorConfig& cfg,
                              std::uint64_t seed);

}  // namespace sres
