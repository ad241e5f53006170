#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>

#include "sres/errors.hpp"
#include "sres/multivariate.hpp"

namespace sres {

std::size_t top_count(double fraction, std::size_t n) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw DomainError("top fraction must lie in (0, 1]");
  const double x = fraction * static_cast<double>(n);
  // 0.1 * 70 evaluates to 7.000000000000001; do not let that round up to 8.
  const double c = std::ceil(x - 1e-9 * std::max(1.0, x));
  return std::min(n, static_cast<std::size_t>(std::max(0.0, c)));
}

Flags flag_top_fraction(const Eigen::VectorXd& scores, double fraction) {
  const auto n = static_cast<std::size_t>(scores.size());
  const std::size_t count = top_count(fraction, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[static_cast<Eigen::Index>(a)] > scores[static_cast<Eigen::Index>(b)];
  });
  Flags flags(n, false);
  for (std::size_t i = 0; i < count; ++i) flags[order[i]] = true;
  return flags;
}

Eigen::VectorXd mahalanobis_scores(const Eigen::MatrixXd& data, double ridge_epsilon) {
  const auto n = data.rows();
  const auto v = data.cols();
  if (n <= v)
    throw IllPosedError("mahalanobis needs more records than variables (N=" + std::to_string(n) +
                        ", V=" + std::to_string(v) + ")");
  const Eigen::RowVectorXd mu = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - mu;
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  const double ridge = ridge_epsilon * cov.trace() / static_cast<double>(v);
  cov.diagonal().array() += ridge;

  const Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      (ldlt.vectorD().array() <= 0.0).any())
    throw NumericalError("mahalanobis: covariance is singular; increase ridge_epsilon");
  const Eigen::MatrixXd solved = ldlt.solve(centered.transpose());  // V x N
  return (centered.transpose().array() * solved.array()).colwise().sum().transpose();
}

}  // namespace sres
