#include "sres/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "sres/errors.hpp"

namespace sres {

namespace {

void require_length(std::span<const double> x, std::size_t min, const char* who) {
  if (x.size() < min)
    throw DimensionError(std::string(who) + " needs at least " + std::to_string(min) +
                         " values, got " + std::to_string(x.size()));
}

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  return s;
}

double sorted_quantile(const std::vector<double>& s, double q) {
  const double pos = static_cast<double>(s.size() - 1) * q;  // zero-based 1 + (n-1)q
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, s.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return s[lo] + frac * (s[hi] - s[lo]);
}

}  // namespace

double mean(std::span<const double> x) {
  require_length(x, 1, "mean");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x) {
  require_length(x, 2, "sample_sd");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double median(std::span<const double> x) { return quantile(x, 0.5); }

double quantile(std::span<const double> x, double q) {
  require_length(x, 1, "quantile");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
  return sorted_quantile(sorted_copy(x), q);
}

double chi_square_1_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("chi-square quantile level must lie in (0, 1)");
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(1.0), p);
}

ColumnFlags detect_three_sigma(std::span<const double> col) {
  require_length(col, 2, "three_sigma");
  const double m = mean(col);
  const double sd = sample_sd(col);
  ColumnFlags out{Flags(col.size(), false), std::nullopt};
  if (sd == 0.0) return out;
  for (std::size_t i = 0; i < col.size(); ++i) out.flags[i] = std::abs(col[i] - m) > 3.0 * sd;
  return out;
}

ColumnFlags detect_boxplot(std::span<const double> col) {
  require_length(col, 4, "boxplot");
  const auto s = sorted_copy(col);
  const double q1 = sorted_quantile(s, 0.25);
  const double q3 = sorted_quantile(s, 0.75);
  const double iqr = q3 - q1;
  const double lo = q1 - 1.5 * iqr;
  const double hi = q3 + 1.5 * iqr;
  ColumnFlags out{Flags(col.size(), false), std::nullopt};
  for (std::size_t i = 0; i < col.size(); ++i) out.flags[i] = col[i] < lo || col[i] > hi;
  return out;
}

ColumnFlags detect_mad(std::span<const double> col, double multiplier) {
  require_length(col, 2, "mad");
  const double med = median(col);
  std::vector<double> dev(col.size());
  std::transform(col.begin(), col.end(), dev.begin(), [med](double v) { return std::abs(v - med); });
  const double mad = median(dev);
  ColumnFlags out{Flags(col.size(), false), std::nullopt};
  if (mad == 0.0) {
    out.warning = "MAD is zero; no values flagged";
    return out;
  }
  const double cutoff = multiplier * kMadConsistency * mad;
  for (std::size_t i = 0; i < col.size(); ++i) out.flags[i] = dev[i] > cutoff;
  return out;
}

ColumnFlags detect_chi_square(std::span<const double> col, double quantile_level) {
  require_length(col, 2, "chi_square");
  const double q = chi_square_1_quantile(quantile_level);
  const double m = mean(col);
  const double sd = sample_sd(col);
  ColumnFlags out{Flags(col.size(), false), std::nullopt};
  if (sd == 0.0) {
    out.warning = "zero variance; no values flagged";
    return out;
  }
  const double var = sd * sd;
  for (std::size_t i = 0; i < col.size(); ++i) {
    const double d = col[i] - m;
    out.flags[i] = d * d / var > q;
  }
  return out;
}

}  // namespace sres
