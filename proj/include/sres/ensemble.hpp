#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sres/dataset.hpp"
#include "sres/metrics.hpp"

namespace sres {

/// votes[m][i]: method m flags record i.
struct LabelMatrix {
  std::vector<Flags> votes;
  std::vector<std::string> method_ids;

  [[nodiscard]] std::size_t methods() const { return votes.size(); }
  [[nodiscard]] std::size_t records() const { return votes.empty() ? 0 : votes.front().size(); }
  [[nodiscard]] bool vote(std::size_t i, std::size_t m) const { return votes[m][i]; }
  /// Throws DimensionError on ragged or empty input.
  void validate() const;
};

/// Two-coin confusion matrix: first index true class, second index output.
struct Confusion {
  double oo = 0.5;  // outlier flagged as outlier (sensitivity)
  double oi = 0.5;
  double io = 0.5;
  double ii = 0.5;  // inlier passed as inlier (specificity)
};

enum : std::size_t { kOutlier = 0, kInlier = 1 };

struct EnsembleModel {
  std::vector<std::string> method_ids;
  std::vector<Confusion> pi;
  double p_outlier = 0.5;
  double p_inlier = 0.5;
  std::vector<std::array<double, 2>> posteriors;  // {P(outlier), P(inlier)} per record
  Flags labels;
  std::size_t iterations = 0;
  bool converged = false;
  bool swapped = false;
  /// Smoothed observed-data log-likelihood after every M-step.
  std::vector<double> objective;
};

struct EmOptions {
  std::size_t max_iter = 200;
  double tol = 1e-7;
  double smoothing = 1e-6;
  /// Also stop as soon as the hard labels repeat. Off by default: labels can
  /// hold still for an iteration while the rates are far from converged.
  bool stop_on_stable_labels = false;
  /// Initial P(outlier) per record; defaults to the fraction of methods flagging it.
  std::optional<std::vector<double>> initial_posteriors;
};

/// Dawid-Skene EM for binary labels with per-method two-coin error rates.
EnsembleModel em_fit(const LabelMatrix& votes, const EmOptions& options = {});

/// Hard consensus labels (P(outlier) >= 0.5).
const Flags& consensus_flags(const EnsembleModel& model);

/// alpha = pi_oo, beta = pi_ii, gamma = p_outlier for method m.
RatePanel method_rates(const EnsembleModel& model, std::size_t m);

/// Smoothed log-likelihood of the votes under the model parameters.
double em_objective(const LabelMatrix& votes, const std::vector<Confusion>& pi, double p_outlier,
                    double smoothing);

/// Human-readable summary: priors, iterations, one confusion matrix per method.
std::string ensemble_report(const EnsembleModel& model);

}  // namespace sres
