#include "sres/detectors.hpp"

#include <span>

#include "sres/errors.hpp"
#include "sres/multivariate.hpp"
#include "sres/univariate.hpp"

namespace sres {

const char* to_string(Method m) {
  switch (m) {
    case Method::three_sigma: return "three_sigma";
    case Method::boxplot: return "boxplot";
    case Method::chi_square: return "chi_square";
    case Method::mad: return "mad";
    case Method::mahalanobis: return "mahalanobis";
    case Method::kmeans: return "kmeans";
    case Method::lof: return "lof";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (auto m : kAllMethods)
    if (name == to_string(m)) return m;
  return std::nullopt;
}

std::string method_names() {
  std::string s;
  for (auto m : kAllMethods) s += (s.empty() ? "" : ", ") + std::string(to_string(m));
  return s;
}

bool is_univariate(Method m) {
  return m == Method::three_sigma || m == Method::boxplot || m == Method::chi_square ||
         m == Method::mad;
}

void DetectorConfig::validate() const {
  if (!(top_fraction > 0.0 && top_fraction <= 1.0))
    throw ConfigError("top_fraction must lie in (0, 1]");
  if (k_clusters < 1) throw ConfigError("k_clusters must be >= 1");
  if (min_pts < 1) throw ConfigError("min_pts must be >= 1");
  if (!(chi_sq_quantile > 0.0 && chi_sq_quantile < 1.0))
    throw ConfigError("chi_sq_quantile must lie in (0, 1)");
  if (!(mad_multiplier > 0.0)) throw ConfigError("mad_multiplier must be positive");
  if (!(ridge_epsilon >= 0.0)) throw ConfigError("ridge_epsilon must be non-negative");
}

std::map<std::string, std::string> DetectorConfig::params() const {
  std::map<std::string, std::string> p;
  switch (method) {
    case Method::three_sigma:
    case Method::boxplot: break;
    case Method::chi_square: p["chi_sq_quantile"] = format_double(chi_sq_quantile); break;
    case Method::mad: p["mad_multiplier"] = format_double(mad_multiplier); break;
    case Method::mahalanobis:
      p["top_fraction"] = format_double(top_fraction);
      p["ridge_epsilon"] = format_double(ridge_epsilon);
      break;
    case Method::kmeans:
      p["top_fraction"] = format_double(top_fraction);
      p["k_clusters"] = std::to_string(k_clusters);
      break;
    case Method::lof:
      p["top_fraction"] = format_double(top_fraction);
      p["min_pts"] = std::to_string(min_pts);
      break;
  }
  if (is_univariate(method)) p["aggregation"] = to_string(aggregation);
  return p;
}

namespace {

ColumnFlags run_column(const DetectorConfig& cfg, std::span<const double> col) {
  switch (cfg.method) {
    case Method::three_sigma: return detect_three_sigma(col);
    case Method::boxplot: return detect_boxplot(col);
    case Method::chi_square: return detect_chi_square(col, cfg.chi_sq_quantile);
    case Method::mad: return detect_mad(col, cfg.mad_multiplier);
    default: break;
  }
  throw ConfigError("not a univariate method");
}

}  // namespace

DetectionResult detect_matrix(const Eigen::MatrixXd& values, const DetectorConfig& cfg,
                              std::uint64_t seed) {
  cfg.validate();
  DetectionResult result;
  result.method = to_string(cfg.method);
  result.params = cfg.params();
  result.seed = seed;

  if (is_univariate(cfg.method)) {
    const auto n = values.rows();
    const auto v = values.cols();
    CellFlags cells(n, v);
    std::vector<double> col(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < v; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = values(i, j);
      auto flags = run_column(cfg, col);
      for (Eigen::Index i = 0; i < n; ++i) cells(i, j) = flags.flags[static_cast<std::size_t>(i)];
      if (flags.warning) result.warnings.push_back("column " + std::to_string(j) + ": " + *flags.warning);
    }
    result.record_flags = aggregate_cells(cells, cfg.aggregation);
    result.cell_flags = std::move(cells);
    return result;
  }

  Eigen::VectorXd scores;
  switch (cfg.method) {
    case Method::mahalanobis: scores = mahalanobis_scores(values, cfg.ridge_epsilon); break;
    case Method::kmeans: scores = kmeans_fit(values, cfg.k_clusters, seed).distances; break;
    case Method::lof: scores = lof_scores(values, cfg.min_pts); break;
    default: break;
  }
  result.record_flags = flag_top_fraction(scores, cfg.top_fraction);
  return result;
}

DetectionResult run_detector(const Dataset& data, const DetectorConfig& cfg,
                             const std::optional<SampleIndex>& scope, std::uint64_t seed) {
  DetectionResult result;
  if (scope) {
    if (scope->parent_n != data.rows())
      throw RangeError("sample parent size " + std::to_string(scope->parent_n) +
                       " differs from dataset size " + std::to_string(data.rows()));
    scope->validate();
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(scope->size()), data.values.cols());
    for (std::size_t r = 0; r < scope->size(); ++r)
      rows.row(static_cast<Eigen::Index>(r)) =
          data.values.row(static_cast<Eigen::Index>(scope->indices[r]));
    result = detect_matrix(rows, cfg, seed);
  } else {
    result = detect_matrix(data.values, cfg, seed);
  }
  result.dataset_id = data.id;
  result.scope = scope;
  return result;
}

}  // namespace sres
