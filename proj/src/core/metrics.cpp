#include "sres/metrics.hpp"

#include "sres/errors.hpp"

namespace sres {

void RatePanel::validate() const {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(alpha) || !in_unit(beta) || !in_unit(gamma))
    throw DomainError("rate panel values must lie in [0, 1]");
}

ConfusionCounts confusion(const Flags& pred, const Flags& truth) {
  if (pred.size() != truth.size())
    throw DimensionError("confusion: prediction and truth lengths differ (" +
                         std::to_string(pred.size()) + " vs " + std::to_string(truth.size()) + ")");
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (truth[i]) {
      pred[i] ? ++c.tp : ++c.fn;
    } else {
      pred[i] ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

namespace {
std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

Rates rates(const ConfusionCounts& c) {
  Rates r;
  r.sensitivity = ratio(c.tp, c.tp + c.fn);
  r.specificity = ratio(c.tn, c.tn + c.fp);
  r.precision = ratio(c.tp, c.tp + c.fp);
  r.recall = r.sensitivity;
  if (r.precision && r.recall) {
    const double p = *r.precision;
    const double q = *r.recall;
    r.f1 = (p + q == 0.0) ? 0.0 : 2.0 * p * q / (p + q);
  }
  return r;
}

Flags aggregate_cells(const CellFlags& cells, Aggregation rule) {
  const auto n = cells.rows();
  const auto v = cells.cols();
  Flags out(static_cast<std::size_t>(n), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto hits = cells.row(i).count();
    out[static_cast<std::size_t>(i)] = rule == Aggregation::any ? hits >= 1 : 2 * hits > v;
  }
  return out;
}

std::optional<Aggregation> parse_aggregation(std::string_view name) {
  if (name == "any") return Aggregation::any;
  if (name == "majority") return Aggregation::majority;
  return std::nullopt;
}

const char* to_string(Aggregation rule) { return rule == Aggregation::any ? "any" : "majority"; }

std::size_t count_flags(const Flags& flags) {
  std::size_t n = 0;
  for (bool f : flags) n += f ? 1 : 0;
  return n;
}

}  // namespace sres
