#include "sres/synthgen.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "sres/errors.hpp"
#include "sres/rng.hpp"
#include "sres/samplers.hpp"

namespace sres {

namespace {
constexpr double kOutlierSd = 0.25;
constexpr double kCenterA[2] = {4.0, 0.0};
constexpr double kCenterB[2] = {0.0, 6.0};
}  // namespace

void SynthSpec::validate() const {
  if (n < 1) throw ConfigError("synthetic dataset needs n >= 1");
  if (!(rate >= 0.0 && rate < 1.0)) throw ConfigError("outlier rate must lie in [0, 1)");
  if (!(base_sds[0] > 0.0 && base_sds[1] > 0.0)) throw ConfigError("base sds must be positive");
}

const char* to_string(OutlierDistribution d) {
  return d == OutlierDistribution::dist1 ? "dist1" : "dist2";
}

std::optional<OutlierDistribution> parse_distribution(std::string_view name) {
  if (name == "dist1" || name == "1") return OutlierDistribution::dist1;
  if (name == "dist2" || name == "2") return OutlierDistribution::dist2;
  return std::nullopt;
}

Dataset generate(const SynthSpec& spec) {
  spec.validate();
  const auto n_out = static_cast<std::size_t>(std::llround(spec.rate * static_cast<double>(spec.n)));

  Flags truth(spec.n, false);
  if (n_out > 0) {
    const auto positions = random_sample(spec.n, n_out, derive_seed(spec.seed, {stream_tag("positions")}));
    for (auto i : positions.indices) truth[i] = true;
  }

  Rng rng = make_rng(derive_seed(spec.seed, {stream_tag("values")}));
  std::normal_distribution<double> z(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  Dataset data;
  data.values.resize(static_cast<Eigen::Index>(spec.n), 2);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    if (!truth[i]) {
      data.values(r, 0) = spec.base_mean[0] + spec.base_sds[0] * z(rng);
      data.values(r, 1) = spec.base_mean[1] + spec.base_sds[1] * z(rng);
      continue;
    }
    const double* center = kCenterA;
    if (spec.outlier_distribution == OutlierDistribution::dist2 && coin(rng)) center = kCenterB;
    data.values(r, 0) = center[0] + kOutlierSd * z(rng);
    data.values(r, 1) = center[1] + kOutlierSd * z(rng);
  }
  data.column_names = {"x1", "x2"};
  data.ground_truth = std::move(truth);
  data.id = synth_id(spec);
  return data;
}

std::string synth_id(const SynthSpec& spec) {
  std::ostringstream id;
  id << to_string(spec.outlier_distribution) << "_r" << spec.rate << "_n" << spec.n;
  return id.str();
}

Dataset generate_fig1(std::uint64_t seed) {
  constexpr std::size_t kRows = 1500;
  Rng rng = make_rng(derive_seed(seed, {stream_tag("fig1")}));
  std::normal_distribution<double> z(0.0, 1.0);
  const double sd_x = std::sqrt(1.015);
  const double sd_y = std::sqrt(1.035);
  Dataset data;
  data.values.resize(kRows, 2);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(kRows); ++i) {
    data.values(i, 0) = -1.0 + sd_x * z(rng);
    data.values(i, 1) = 1.0 + sd_y * z(rng);
  }
  data.column_names = {"x1", "x2"};
  data.id = "fig1";
  return data;
}

}  // namespace sres
