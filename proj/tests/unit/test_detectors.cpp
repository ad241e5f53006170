#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "sres/detectors.hpp"
#include "sres/errors.hpp"
#include "sres/multivariate.hpp"
#include "sres/rng.hpp"
#include "sres/samplers.hpp"
#include "sres/synthgen.hpp"
#include "sres/univariate.hpp"

using namespace sres;

namespace {

std::vector<double> v(std::initializer_list<double> xs) { return xs; }

std::size_t flagged(const Flags& f) { return static_cast<std::size_t>(std::count(f.begin(), f.end(), true)); }

Eigen::MatrixXd gaussian(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(n, d);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = z(rng);
  return m;
}

Dataset as_dataset(Eigen::MatrixXd m) {
  Dataset d;
  d.values = std::move(m);
  for (Eigen::Index j = 0; j < d.values.cols(); ++j) d.column_names.push_back("x" + std::to_string(j));
  d.id = "t";
  return d;
}

DetectorConfig cfg_for(Method m) {
  DetectorConfig c;
  c.method = m;
  return c;
}

}  // namespace

TEST_CASE("summary statistics") {
  const auto x = v({1, 2, 3, 4, 100});
  CHECK(mean(x) == doctest::Approx(22.0));
  CHECK(median(x) == 3.0);
  CHECK(quantile(x, 0.25) == 2.0);
  CHECK(quantile(x, 0.75) == 4.0);
  CHECK(quantile(v({1, 2, 3, 4}), 0.5) == 2.5);
  CHECK(sample_sd(v({0, 0, 0, 0, 100})) == doctest::Approx(std::sqrt(2000.0)));
  CHECK(chi_square_1_quantile(0.975) == doctest::Approx(5.0239).epsilon(1e-4));
  CHECK(chi_square_1_quantile(0.95) == doctest::Approx(3.8415).epsilon(1e-4));
}

TEST_CASE("three sigma rule") {
  auto c = detect_three_sigma(v({5, 5, 5, 5}));
  CHECK(flagged(c.flags) == 0);
  c = detect_three_sigma(v({0, 0, 0, 0, 100}));  // z(100) ~ 1.79: masking
  CHECK(flagged(c.flags) == 0);
  std::vector<double> x(30, 0.0);
  for (int i = 0; i < 30; ++i) x[i] = i % 2 ? 1.0 : -1.0;
  x.push_back(50.0);
  c = detect_three_sigma(x);
  CHECK(flagged(c.flags) == 1);
  CHECK(c.flags.back());
  CHECK_THROWS_AS(detect_three_sigma(v({1})), DimensionError);
}

TEST_CASE("boxplot rule") {
  CHECK(flagged(detect_boxplot(v({3, 3, 3, 3, 3})).flags) == 0);
  auto c = detect_boxplot(v({1, 2, 3, 4, 100}));
  CHECK(c.flags == Flags{false, false, false, false, true});
  CHECK_THROWS_AS(detect_boxplot(v({1, 2, 3})), DimensionError);
}

TEST_CASE("MAD rule") {
  auto c = detect_mad(v({4, 4, 4}));
  CHECK(flagged(c.flags) == 0);
  CHECK(c.warning.has_value());
  c = detect_mad(v({1, 1, 1, 1, 1, 1, 1, 100}));
  CHECK(flagged(c.flags) == 0);
  CHECK(c.warning.has_value());
  // median 4.5; absolute deviations {3.5,2.5,1.5,.5,.5,1.5,2.5,995.5} -> MAD 2
  const auto x = v({1, 2, 3, 4, 5, 6, 7, 1000});
  std::vector<double> dev;
  for (double xi : x) dev.push_back(std::abs(xi - 4.5));
  CHECK(median(dev) == 2.0);
  c = detect_mad(x);
  CHECK(c.flags == Flags{false, false, false, false, false, false, false, true});
  CHECK_FALSE(c.warning.has_value());
}

TEST_CASE("chi-square rule") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> z;
  std::vector<double> x(10000);
  for (auto& xi : x) xi = z(rng);
  const double frac = static_cast<double>(flagged(detect_chi_square(x).flags)) / 10000.0;
  CHECK(frac == doctest::Approx(0.025).epsilon(0.2));
  auto c = detect_chi_square(v({2, 2, 2}));
  CHECK(flagged(c.flags) == 0);
  CHECK(c.warning.has_value());
  c = detect_chi_square(v({-1, 0, 1}));
  CHECK_FALSE(c.flags[1]);
}

TEST_CASE("univariate invariances") {
  std::mt19937_64 rng(8);
  std::student_t_distribution<double> t(2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(60);
    for (auto& xi : x) xi = t(rng);
    std::vector<double> shifted, scaled;
    for (double xi : x) {
      shifted.push_back(xi + 17.0);
      scaled.push_back(xi * 4.0);
    }
    CHECK(detect_three_sigma(x).flags == detect_three_sigma(shifted).flags);
    CHECK(detect_chi_square(x).flags == detect_chi_square(shifted).flags);
    CHECK(detect_mad(x).flags == detect_mad(shifted).flags);
    CHECK(detect_boxplot(x).flags == detect_boxplot(shifted).flags);
    CHECK(detect_three_sigma(x).flags == detect_three_sigma(scaled).flags);
    CHECK(detect_chi_square(x).flags == detect_chi_square(scaled).flags);
    CHECK(detect_boxplot(x).flags == detect_boxplot(scaled).flags);
  }
}

// A limit m + 3 s from n of N records has standard error
// sd * sqrt((1 - n/N) / n + 9 / (2 (n - 1))) under normality, about 0.19 sd here.
TEST_CASE("3-sigma limits from a 10% sample track the whole-data limits") {
  int close = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Dataset d = generate_fig1(s);
    const auto sample = random_sample(d.rows(), 150, derive_seed(s, {stream_tag("fig1-sample")}));
    bool ok = true;
    for (Eigen::Index j = 0; j < 2; ++j) {
      std::vector<double> whole(d.values.col(j).data(), d.values.col(j).data() + d.rows());
      std::vector<double> part;
      for (auto i : sample.indices) part.push_back(d.values(static_cast<Eigen::Index>(i), j));
      const double sd = sample_sd(whole);
      const double lo_w = mean(whole) - 3 * sd, hi_w = mean(whole) + 3 * sd;
      const double lo_s = mean(part) - 3 * sample_sd(part), hi_s = mean(part) + 3 * sample_sd(part);
      const double n = static_cast<double>(part.size());
      const double se = sd * std::sqrt((1 - n / static_cast<double>(d.rows())) / n + 9 / (2 * (n - 1)));
      ok = ok && std::abs(lo_w - lo_s) <= 3 * se && std::abs(hi_w - hi_s) <= 3 * se;
    }
    close += ok;
  }
  CHECK(close >= 90);
}

TEST_CASE("top fraction selection") {
  CHECK(top_count(0.1, 50) == 5);
  CHECK(top_count(0.1, 100) == 10);
  CHECK(top_count(0.1, 101) == 11);
  CHECK(top_count(0.3, 10) == 3);
  CHECK(top_count(1.0, 7) == 7);
  Eigen::VectorXd s(6);
  s << 1, 5, 5, 5, 0, 2;
  CHECK(flag_top_fraction(s, 0.3) == Flags{false, true, true, false, false, false});
  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(5);
  CHECK(flag_top_fraction(zeros, 0.4) == Flags{true, true, false, false, false});
}

TEST_CASE("mahalanobis matches the brute-force oracle") {
  std::mt19937_64 rng(99);
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t v = 1 + rng() % 5;
    const std::size_t n = v + 2 + rng() % (49 - v);
    Eigen::MatrixXd m = gaussian(n, v, rng());
    m.col(0) *= 3.0;
    if (v > 1) m.col(1) += 0.5 * m.col(0);
    const auto got = mahalanobis_scores(m, 1e-8);
    const auto want = oracle::mahalanobis(oracle::rows_of(m), 1e-8);
    for (std::size_t i = 0; i < n; ++i) CHECK(got(static_cast<Eigen::Index>(i)) == doctest::Approx(want[i]).epsilon(1e-9));
  }
}

TEST_CASE("mahalanobis tiny instance, extremes and invariance") {
  Eigen::MatrixXd m(5, 2);
  m << 0, 0, 1, 2, 2, 1, 3, 5, -1, 1;
  const auto got = mahalanobis_scores(m, 1e-8);
  const auto want = oracle::mahalanobis(oracle::rows_of(m), 1e-8);
  for (int i = 0; i < 5; ++i) CHECK(got(i) == doctest::Approx(want[i]).epsilon(1e-12));

  Eigen::MatrixXd sph = gaussian(200, 3, 4);
  sph.row(17) << 10, 0, 0;
  const auto d2 = mahalanobis_scores(sph, 1e-8);
  Eigen::Index arg;
  d2.maxCoeff(&arg);
  CHECK(arg == 17);

  Eigen::MatrixXd a(3, 3);
  a << 2, 1, 0, 0, 1, 3, 1, 0, 1;
  Eigen::RowVector3d b(5, -2, 7);
  Eigen::MatrixXd mapped = (sph * a.transpose()).rowwise() + b;
  const auto before = mahalanobis_scores(sph, 0.0);
  const auto after = mahalanobis_scores(mapped, 0.0);
  for (Eigen::Index i = 0; i < before.size(); ++i) CHECK(after(i) == doctest::Approx(before(i)).epsilon(1e-8));

  CHECK_THROWS_AS(mahalanobis_scores(gaussian(3, 3, 1), 1e-8), IllPosedError);
}

TEST_CASE("kmeans flags a distant point and degenerates at k = N") {
  Eigen::MatrixXd m(41, 2);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 20; ++i) m.row(i) << u(rng), u(rng);
  // clusters far enough apart that merging them costs more than isolating the stray point
  for (int i = 20; i < 40; ++i) m.row(i) << 100 + u(rng), u(rng);
  m.row(40) << 0, 50;
  DetectorConfig c = cfg_for(Method::kmeans);
  c.k_clusters = 2;
  c.top_fraction = 1.0 / 41.0;
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto r = detect_matrix(m, c, s);
    CHECK(flagged(r.record_flags) == 1);
    CHECK(r.record_flags[40]);
  }
  Eigen::MatrixXd small = gaussian(10, 2, 5);
  DetectorConfig all = cfg_for(Method::kmeans);
  all.k_clusters = 10;
  all.top_fraction = 0.2;
  const auto fit = kmeans_fit(small, 10, 1);
  CHECK(fit.distances.maxCoeff() == 0.0);
  CHECK(detect_matrix(small, all, 1).record_flags ==
        Flags{true, true, false, false, false, false, false, false, false, false});
  CHECK_THROWS_AS(kmeans_fit(small, 11, 1), RangeError);
}

TEST_CASE("kmeans++ plus Lloyd reaches the exhaustive optimum on N=12") {
  Eigen::MatrixXd m(12, 2);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> z(0.0, 0.4);
  const double centers[3][2] = {{0, 0}, {6, 0}, {3, 5}};
  for (int i = 0; i < 12; ++i) m.row(i) << centers[i % 3][0] + z(rng), centers[i % 3][1] + z(rng);
  // Global minimum inertia over all 3^12 labelings.
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> lab(12, 0);
  for (long code = 0; code < 531441; ++code) {
    long c = code;
    for (int i = 0; i < 12; ++i, c /= 3) lab[i] = static_cast<int>(c % 3);
    double sx[3] = {0, 0, 0}, sy[3] = {0, 0, 0}, cnt[3] = {0, 0, 0};
    for (int i = 0; i < 12; ++i) {
      sx[lab[i]] += m(i, 0);
      sy[lab[i]] += m(i, 1);
      cnt[lab[i]] += 1;
    }
    if (!cnt[0] || !cnt[1] || !cnt[2]) continue;
    double in = 0.0;
    for (int i = 0; i < 12; ++i) {
      const double dx = m(i, 0) - sx[lab[i]] / cnt[lab[i]];
      const double dy = m(i, 1) - sy[lab[i]] / cnt[lab[i]];
      in += dx * dx + dy * dy;
    }
    best = std::min(best, in);
  }
  int hits = 0;
  for (std::uint64_t s = 0; s < 100; ++s) hits += std::abs(kmeans_fit(m, 3, s).inertia - best) <= 1e-9;
  CHECK(hits >= 95);
}

TEST_CASE("LOF matches the brute-force oracle") {
  std::mt19937_64 rng(31);
  for (int inst = 0; inst < 40; ++inst) {
    const std::size_t v = 1 + rng() % 5;
    const std::size_t n = 12 + rng() % 39;
    const std::size_t k = 1 + rng() % 10;
    Eigen::MatrixXd m = gaussian(n, v, rng());
    if (inst % 4 == 0) m = m.array().round();  // ties and duplicates
    const auto got = lof_scores(m, k);
    const auto want = oracle::lof(oracle::rows_of(m), k);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isinf(want[i])) {
        CHECK(std::isinf(got(static_cast<Eigen::Index>(i))));
        continue;
      }
      CHECK(got(static_cast<Eigen::Index>(i)) == doctest::Approx(want[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("LOF on a grid and with a distant point") {
  Eigen::MatrixXd grid(100, 2);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) grid.row(i * 10 + j) << i, j;
  const auto s = lof_scores(grid, 4);
  for (int i = 2; i < 8; ++i)
    for (int j = 2; j < 8; ++j) {
      CHECK(s(i * 10 + j) >= 0.8);
      CHECK(s(i * 10 + j) <= 1.2);
    }
  Eigen::MatrixXd m = gaussian(40, 2, 6) * 0.1;
  m.row(25) << 8, 8;
  const auto l = lof_scores(m, 10);
  Eigen::Index arg;
  l.maxCoeff(&arg);
  CHECK(arg == 25);
  CHECK_THROWS_AS(lof_scores(gaussian(10, 2, 1), 10), RangeError);
  Eigen::MatrixXd dup = Eigen::MatrixXd::Zero(15, 2);
  const auto d = lof_scores(dup, 3);
  for (Eigen::Index i = 0; i < 15; ++i) CHECK(d(i) == 1.0);
}

TEST_CASE("run_detector dispatch, scope and counts") {
  Eigen::MatrixXd col = gaussian(200, 1, 10);
  col(50, 0) = 9.0;
  const Dataset one = as_dataset(col);
  const auto r = run_detector(one, cfg_for(Method::three_sigma));
  std::vector<double> x(col.data(), col.data() + 200);
  CHECK(r.record_flags == detect_three_sigma(x).flags);
  REQUIRE(r.cell_flags.has_value());

  const Dataset d = as_dataset(gaussian(500, 3, 11));
  SampleIndex full;
  full.parent_n = 500;
  for (std::size_t i = 0; i < 500; ++i) full.indices.push_back(i);
  for (Method m : kAllMethods) {
    const auto a = run_detector(d, cfg_for(m), std::nullopt, 4);
    const auto b = run_detector(d, cfg_for(m), full, 4);
    CHECK(a.record_flags == b.record_flags);
    CHECK(run_detector(d, cfg_for(m), std::nullopt, 4).record_flags == a.record_flags);
    if (a.cell_flags) CHECK(aggregate_cells(*a.cell_flags, Aggregation::any) == a.record_flags);
  }
  const auto sample = random_sample(500, 50, 8);
  CHECK(flagged(run_detector(d, cfg_for(Method::mahalanobis), sample).record_flags) == 5);
  for (Method m : {Method::mahalanobis, Method::kmeans, Method::lof})
    for (std::size_t n : {37u, 100u, 233u}) {
      const Dataset dn = as_dataset(gaussian(n, 2, n));
      CHECK(flagged(run_detector(dn, cfg_for(m), std::nullopt, 1).record_flags) == top_count(0.1, n));
    }
  const auto rs = run_detector(d, cfg_for(Method::lof), sample, 3);
  CHECK(rs.record_index(0) == sample.indices[0]);
  CHECK(rs.scope_string().find("random(50)") != std::string::npos);

  DetectorConfig maj = cfg_for(Method::three_sigma);
  maj.aggregation = Aggregation::majority;
  const auto rm = run_detector(d, maj);
  CHECK(aggregate_cells(*rm.cell_flags, Aggregation::majority) == rm.record_flags);
}

TEST_CASE("method names and config validation") {
  for (Method m : kAllMethods) CHECK(parse_method(to_string(m)) == m);
  CHECK_FALSE(parse_method("isolation_forest").has_value());
  CHECK(method_names().find("lof") != std::string::npos);
  DetectorConfig c;
  c.top_fraction = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.top_fraction = 0.1;
  c.min_pts = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
