#pragma once
// Reference implementations used only by tests. Deliberately naive: plain
// loops over std::vector, no shared code with the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix rows_of(const Eigen::MatrixXd& m) {
  Matrix out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

inline double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

/// Local outlier factor straight from the definitions, O(N^2 log N).
inline std::vector<double> lof(const Matrix& x, std::size_t k) {
  const std::size_t n = x.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> kdist(n);
  std::vector<std::vector<std::size_t>> nbrs(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) d.push_back(dist(x[i], x[j]));
    std::sort(d.begin(), d.end());
    kdist[i] = d[k - 1];
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && dist(x[i], x[j]) <= kdist[i]) nbrs[i].push_back(j);
  }
  std::vector<double> lrd(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (auto j : nbrs[i]) sum += std::max(kdist[j], dist(x[i], x[j]));
    lrd[i] = sum == 0.0 ? inf : static_cast<double>(nbrs[i].size()) / sum;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isinf(lrd[i])) {
      out[i] = 1.0;
      continue;
    }
    double s = 0.0;
    for (auto j : nbrs[i]) s += lrd[j] / lrd[i];
    out[i] = s / static_cast<double>(nbrs[i].size());
  }
  return out;
}

/// Gauss-Jordan inverse with partial pivoting.
inline Matrix inverse(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    std::swap(inv[c], inv[p]);
    const double d = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

/// 2x2 inverse by Cramer's rule.
inline Matrix inverse2(const Matrix& a) {
  const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return {{a[1][1] / det, -a[0][1] / det}, {-a[1][0] / det, a[0][0] / det}};
}

/// Squared Mahalanobis distances with the ridge eps * trace / V.
inline std::vector<double> mahalanobis(const Matrix& x, double eps) {
  const std::size_t n = x.size();
  const std::size_t v = x[0].size();
  std::vector<double> mu(v, 0.0);
  for (const auto& r : x)
    for (std::size_t j = 0; j < v; ++j) mu[j] += r[j] / static_cast<double>(n);
  Matrix cov(v, std::vector<double>(v, 0.0));
  for (const auto& r : x)
    for (std::size_t a = 0; a < v; ++a)
      for (std::size_t b = 0; b < v; ++b)
        cov[a][b] += (r[a] - mu[a]) * (r[b] - mu[b]) / static_cast<double>(n - 1);
  double tr = 0.0;
  for (std::size_t a = 0; a < v; ++a) tr += cov[a][a];
  for (std::size_t a = 0; a < v; ++a) cov[a][a] += eps * tr / static_cast<double>(v);
  const Matrix inv = v == 2 ? inverse2(cov) : inverse(cov);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t a = 0; a < v; ++a)
      for (std::size_t b = 0; b < v; ++b) s += (x[i][a] - mu[a]) * inv[a][b] * (x[i][b] - mu[b]);
    out[i] = s;
  }
  return out;
}

/// Planted two-coin annotators: truth ~ Bernoulli(gamma), method m flags an
/// outlier with probability alpha[m] and an inlier with 1 - beta[m].
struct TwoCoin {
  std::vector<bool> truth;
  std::vector<std::vector<bool>> votes;  // per method
};

inline TwoCoin two_coin(std::size_t n, const std::vector<double>& alpha,
                        const std::vector<double>& beta, double gamma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TwoCoin out;
  out.truth.resize(n);
  out.votes.assign(alpha.size(), std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) {
    out.truth[i] = u(rng) < gamma;
    for (std::size_t m = 0; m < alpha.size(); ++m)
      out.votes[m][i] = out.truth[i] ? u(rng) < alpha[m] : u(rng) >= beta[m];
  }
  return out;
}

/// Soft-count expected complete-data log-likelihood
/// sum_i sum_c q_ic [log p_c + sum_m log pi^m_{c, vote}].
inline double expected_complete_ll(const std::vector<std::vector<bool>>& votes,
                                   const std::vector<double>& q_outlier,
                                   const std::vector<std::array<double, 4>>& pi,  // oo, oi, io, ii
                                   double p_outlier) {
  double s = 0.0;
  for (std::size_t i = 0; i < q_outlier.size(); ++i) {
    double lo = std::log(p_outlier);
    double li = std::log(1.0 - p_outlier);
    for (std::size_t m = 0; m < votes.size(); ++m) {
      lo += std::log(votes[m][i] ? pi[m][0] : pi[m][1]);
      li += std::log(votes[m][i] ? pi[m][2] : pi[m][3]);
    }
    s += q_outlier[i] * lo + (1.0 - q_outlier[i]) * li;
  }
  return s;
}

inline double normal_cdf(double x, double mu, double sd) {
  return 0.5 * std::erfc(-(x - mu) / (sd * std::sqrt(2.0)));
}

/// Kolmogorov-Smirnov statistic of a sample against a continuous cdf.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Dice coefficient from integer counts; 1 for two empty sets.
inline double dice(const std::vector<bool>& a, const std::vector<bool>& b) {
  long both = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    both += a[i] && b[i];
    na += a[i];
    nb += b[i];
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

/// Expected-overlap counts evaluated term by term.
struct Overlap {
  double both, neither, sample_only, whole_only;
};

inline Overlap overlap(double s, double g, double a, double as, double b, double bs) {
  Overlap o{};
  o.both = s * (g * a * as + (1 - g) * (1 - b) * (1 - bs));
  o.neither = s * ((1 - g) * b * bs + g * (1 - a) * (1 - as));
  o.sample_only = s * (g * (1 - a) * as + (1 - g) * b * (1 - bs));
  o.whole_only = s * (g * a * (1 - as) + (1 - g) * (1 - b) * bs);
  return o;
}

}  // namespace oracle
