#include <cmath>
#include <limits>
#include <random>

#include "sres/errors.hpp"
#include "sres/multivariate.hpp"
#include "sres/rng.hpp"

namespace sres {

KMeansFit kmeans_lloyd(const Eigen::MatrixXd& data, Eigen::MatrixXd centroids,
                       std::size_t max_iter, double rel_tol) {
  const auto n = data.rows();
  const auto k = centroids.rows();
  KMeansFit fit;
  fit.assignment.assign(static_cast<std::size_t>(n), 0);
  fit.distances.resize(n);
  std::vector<std::size_t> previous;
  double previous_inertia = std::numeric_limits<double>::infinity();

  while (true) {
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (Eigen::Index c = 0; c < k; ++c) {
        const double d2 = (data.row(i) - centroids.row(c)).squaredNorm();
        if (d2 < best) {
          best = d2;
          arg = static_cast<std::size_t>(c);
        }
      }
      fit.assignment[static_cast<std::size_t>(i)] = arg;
      fit.distances[i] = std::sqrt(best);
      inertia += best;
    }
    ++fit.iterations;
    fit.inertia = inertia;

    const bool stable = fit.iterations > 1 &&
                        (fit.assignment == previous ||
                         std::abs(previous_inertia - inertia) <= rel_tol * previous_inertia);
    if (stable || fit.iterations >= max_iter) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, data.cols());
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto c = fit.assignment[static_cast<std::size_t>(i)];
      sums.row(static_cast<Eigen::Index>(c)) += data.row(i);
      ++counts[c];
    }
    for (Eigen::Index c = 0; c < k; ++c)
      if (counts[static_cast<std::size_t>(c)] > 0)  // empty clusters keep their centroid
        centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);

    previous = fit.assignment;
    previous_inertia = inertia;
  }
  fit.centroids = std::move(centroids);
  return fit;
}

KMeansFit kmeans_fit(const Eigen::MatrixXd& data, std::size_t k, std::uint64_t seed,
                     std::size_t max_iter, double rel_tol) {
  const auto n = static_cast<std::size_t>(data.rows());
  if (k < 1 || n < k)
    throw RangeError("kmeans needs 1 <= k <= N (k=" + std::to_string(k) +
                     ", N=" + std::to_string(n) + ")");
  Rng rng = make_rng(seed);

  // k-means++ seeding.
  std::vector<std::size_t> chosen;
  std::vector<bool> taken(n, false);
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  chosen.push_back(first(rng));
  taken[chosen.back()] = true;
  Eigen::VectorXd d2(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    d2[static_cast<Eigen::Index>(i)] =
        (data.row(static_cast<Eigen::Index>(i)) - data.row(static_cast<Eigen::Index>(chosen[0])))
            .squaredNorm();

  while (chosen.size() < k) {
    const double total = d2.sum();
    std::size_t pick = n;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      const double target = u(rng);
      double cum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double w = d2[static_cast<Eigen::Index>(i)];
        if (w <= 0.0) continue;
        cum += w;
        pick = i;
        if (cum > target) break;
      }
    } else {
      // Every remaining point coincides with a centroid: pick uniformly among the rest.
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < n; ++i)
        if (!taken[i]) rest.push_back(i);
      std::uniform_int_distribution<std::size_t> any(0, rest.size() - 1);
      pick = rest[any(rng)];
    }
    chosen.push_back(pick);
    taken[pick] = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = (data.row(static_cast<Eigen::Index>(i)) -
                        data.row(static_cast<Eigen::Index>(pick)))
                           .squaredNorm();
      if (d < d2[static_cast<Eigen::Index>(i)]) d2[static_cast<Eigen::Index>(i)] = d;
    }
  }

  Eigen::MatrixXd init(static_cast<Eigen::Index>(k), data.cols());
  for (std::size_t c = 0; c < k; ++c)
    init.row(static_cast<Eigen::Index>(c)) = data.row(static_cast<Eigen::Index>(chosen[c]));
  return kmeans_lloyd(data, std::move(init), max_iter, rel_tol);
}

}  // namespace sres
