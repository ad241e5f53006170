#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "sres/dataset.hpp"

namespace sres {

/// Number of records a top-fraction detector flags: ceil(fraction * n).
std::size_t top_count(double fraction, std::size_t n);

/// Flags the ceil(fraction * n) largest scores; ties at the cutoff go to the
/// lower row index.
Flags flag_top_fraction(const Eigen::VectorXd& scores, double fraction);

/// Squared Mahalanobis distances to the sample mean under the sample
/// covariance plus a ridge of ridge_epsilon * trace / V on the diagonal.
Eigen::VectorXd mahalanobis_scores(const Eigen::MatrixXd& data, double ridge_epsilon);

struct KMeansFit {
  Eigen::MatrixXd centroids;  // k x V
  std::vector<std::size_t> assignment;
  Eigen::VectorXd distances;  // Euclidean distance to the assigned centroid
  double inertia = 0.0;
  std::size_t iterations = 0;
};

/// k-means++ seeding followed by Lloyd iterations.
KMeansFit kmeans_fit(const Eigen::MatrixXd& data, std::size_t k, std::uint64_t seed,
                     std::size_t max_iter = 100, double rel_tol = 1e-6);

/// Lloyd iterations from explicit initial centroids.
KMeansFit kmeans_lloyd(const Eigen::MatrixXd& data, Eigen::MatrixXd centroids,
                       std::size_t max_iter = 100, double rel_tol = 1e-6);

/// Local Outlier Factor with k = min_pts; neighborhoods include all ties at
/// the k-distance. Records with infinite local reachability density score 1.
Eigen::VectorXd lof_scores(const Eigen::MatrixXd& data, std::size_t min_pts);

}  // namespace sres
