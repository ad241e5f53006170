#include <algorithm>
#include <cmath>
#include <limits>

#include "sres/errors.hpp"
#include "sres/multivariate.hpp"

namespace sres {

namespace {

struct Neighborhood {
  std::vector<std::size_t> index;
  std::vector<double> distance;
  double k_distance = 0.0;
};

}  // namespace

Eigen::VectorXd lof_scores(const Eigen::MatrixXd& data, std::size_t min_pts) {
  const auto n = static_cast<std::size_t>(data.rows());
  if (min_pts < 1 || n <= min_pts)
    throw RangeError("lof needs N > min_pts (N=" + std::to_string(n) +
                     ", min_pts=" + std::to_string(min_pts) + ")");

  std::vector<Neighborhood> hood(n);
  std::vector<double> dist(n);
  std::vector<double> scratch;
  for (std::size_t p = 0; p < n; ++p) {
    const auto row = data.row(static_cast<Eigen::Index>(p));
    for (std::size_t o = 0; o < n; ++o)
      dist[o] = (row - data.row(static_cast<Eigen::Index>(o))).norm();
    scratch.clear();
    for (std::size_t o = 0; o < n; ++o)
      if (o != p) scratch.push_back(dist[o]);
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(min_pts - 1),
                     scratch.end());
    auto& h = hood[p];
    h.k_distance = scratch[min_pts - 1];
    for (std::size_t o = 0; o < n; ++o) {
      if (o != p && dist[o] <= h.k_distance) {
        h.index.push_back(o);
        h.distance.push_back(dist[o]);
      }
    }
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> lrd(n);
  for (std::size_t p = 0; p < n; ++p) {
    const auto& h = hood[p];
    double reach = 0.0;
    for (std::size_t j = 0; j < h.index.size(); ++j)
      reach += std::max(hood[h.index[j]].k_distance, h.distance[j]);
    lrd[p] = reach > 0.0 ? static_cast<double>(h.index.size()) / reach : inf;
  }

  Eigen::VectorXd lof(static_cast<Eigen::Index>(n));
  for (std::size_t p = 0; p < n; ++p) {
    if (std::isinf(lrd[p])) {
      lof[static_cast<Eigen::Index>(p)] = 1.0;
      continue;
    }
    double sum = 0.0;
    for (auto o : hood[p].index) sum += lrd[o];
    lof[static_cast<Eigen::Index>(p)] =
        sum / (static_cast<double>(hood[p].index.size()) * lrd[p]);
  }
  return lof;
}

}  // namespace sres
