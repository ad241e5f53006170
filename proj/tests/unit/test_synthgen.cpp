#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "sres/errors.hpp"
#include "sres/metrics.hpp"
#include "sres/synthgen.hpp"

using namespace sres;

namespace {

SynthSpec spec(std::size_t n, double rate, OutlierDistribution d, std::uint64_t seed) {
  SynthSpec s;
  s.n = n;
  s.rate = rate;
  s.outlier_distribution = d;
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("outlier count is fixed") {
  const auto none = generate(spec(500, 0.0, OutlierDistribution::dist1, 1));
  CHECK(count_flags(*none.ground_truth) == 0);
  const auto d = generate(spec(10000, 0.05, OutlierDistribution::dist1, 2));
  CHECK(count_flags(*d.ground_truth) == 500);
  CHECK(count_flags(*generate(spec(999, 0.015, OutlierDistribution::dist2, 3)).ground_truth) == 15);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < d.rows(); ++i)
    if ((*d.ground_truth)[i]) {
      mx += d.values(static_cast<Eigen::Index>(i), 0) / 500.0;
      my += d.values(static_cast<Eigen::Index>(i), 1) / 500.0;
    }
  CHECK(std::abs(mx - 4.0) < 0.05);
  CHECK(std::abs(my) < 0.05);
  CHECK(d.id == "dist1_r0.05_n10000");
}

TEST_CASE("dist2 splits outliers between its components") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto d = generate(spec(10000, 0.10, OutlierDistribution::dist2, seed));
    int upper = 0, right = 0;
    for (std::size_t i = 0; i < d.rows(); ++i) {
      if (!(*d.ground_truth)[i]) continue;
      if (d.values(static_cast<Eigen::Index>(i), 1) > 3.0) ++upper;
      else ++right;
    }
    CHECK(upper + right == 1000);
    CHECK(std::abs(upper - 500) <= 70);
  }
}

TEST_CASE("inlier marginals pass a KS test") {
  // 0.01 critical value, large-sample approximation 1.628 / sqrt(n)
  int pass = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto d = generate(spec(2000, 0.05, OutlierDistribution::dist1, seed));
    std::vector<double> x, y;
    for (std::size_t i = 0; i < d.rows(); ++i)
      if (!(*d.ground_truth)[i]) {
        x.push_back(d.values(static_cast<Eigen::Index>(i), 0));
        y.push_back(d.values(static_cast<Eigen::Index>(i), 1));
      }
    const double crit = 1.628 / std::sqrt(static_cast<double>(x.size()));
    const bool ok = oracle::ks_statistic(x, [](double t) { return oracle::normal_cdf(t, 0, 1); }) < crit &&
                    oracle::ks_statistic(y, [](double t) { return oracle::normal_cdf(t, 0, 2); }) < crit;
    pass += ok;
  }
  CHECK(pass >= 95);
}

TEST_CASE("figure-one dataset") {
  const auto d = generate_fig1(7);
  CHECK(d.rows() == 1500);
  CHECK_FALSE(d.ground_truth.has_value());
  const double m0 = d.values.col(0).mean(), m1 = d.values.col(1).mean();
  CHECK(std::abs(m0 + 1.0) < 0.08);
  CHECK(std::abs(m1 - 1.0) < 0.08);
  const double v0 = (d.values.col(0).array() - m0).square().sum() / 1499.0;
  const double v1 = (d.values.col(1).array() - m1).square().sum() / 1499.0;
  CHECK(std::abs(v0 - 1.015) < 0.12);
  CHECK(std::abs(v1 - 1.035) < 0.12);
  CHECK(generate_fig1(7).values == d.values);
  CHECK(generate_fig1(8).values != d.values);
}

TEST_CASE("determinism and validation") {
  const auto s = spec(300, 0.1, OutlierDistribution::dist2, 44);
  CHECK(generate(s).values == generate(s).values);
  CHECK(*generate(s).ground_truth == *generate(s).ground_truth);
  CHECK_THROWS_AS(spec(10, 1.0, OutlierDistribution::dist1, 1).validate(), ConfigError);
  CHECK_THROWS_AS(spec(0, 0.1, OutlierDistribution::dist1, 1).validate(), ConfigError);
  CHECK(parse_distribution("dist2") == OutlierDistribution::dist2);
  CHECK_FALSE(parse_distribution("dist3").has_value());
}
