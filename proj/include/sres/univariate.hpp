#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sres/dataset.hpp"

namespace sres {

/// Flags for one column plus an optional degeneracy note.
struct ColumnFlags {
  Flags flags;
  std::optional<std::string> warning;
};

double mean(std::span<const double> x);
/// Sample standard deviation, divisor n - 1.
double sample_sd(std::span<const double> x);
double median(std::span<const double> x);
/// Quantile by linear interpolation at position 1 + (n - 1) q of the sorted data.
double quantile(std::span<const double> x, double q);
/// Upper-p quantile of the chi-square distribution with one degree of freedom.
double chi_square_1_quantile(double p);

/// |x - mean| > 3 sd.
ColumnFlags detect_three_sigma(std::span<const double> col);

/// Outside [Q1 - 1.5 IQR, Q3 + 1.5 IQR].
ColumnFlags detect_boxplot(std::span<const double> col);

/// |x - median| > multiplier * 1.4826 * MAD.
ColumnFlags detect_mad(std::span<const double> col, double multiplier = 3.0);

/// (x - mean)^2 / var above the chi-square(1) `quantile` quantile.
ColumnFlags detect_chi_square(std::span<const double> col, double quantile = 0.975);

inline constexpr double kMadConsistency = 1.4826;

}  // namespace sres
