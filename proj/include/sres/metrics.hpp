#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Core>

#include "sres/dataset.hpp"

namespace sres {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  [[nodiscard]] std::size_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

/// Classical quality metrics. A metric whose denominator is zero is absent.
struct Rates {
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

/// Sensitivity (alpha), specificity (beta) and prevalence (gamma) of a detector.
struct RatePanel {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.0;

  /// Throws DomainError unless all three lie in [0, 1].
  void validate() const;
};

ConfusionCounts confusion(const Flags& pred, const Flags& truth);

Rates rates(const ConfusionCounts& c);

/// N x V cell-level outlier flags of a univariate detector.
using CellFlags = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

enum class Aggregation { any, majority };

/// `any`: a record is flagged if one of its cells is; `majority`: if more
/// than V/2 cells are.
Flags aggregate_cells(const CellFlags& cells, Aggregation rule);

std::optional<Aggregation> parse_aggregation(std::string_view name);
const char* to_string(Aggregation rule);

std::size_t count_flags(const Flags& flags);

}  // namespace sres
