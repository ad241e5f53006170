#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sres/dataset.hpp"
#include "sres/detectors.hpp"
#include "sres/ensemble.hpp"
#include "sres/metrics.hpp"
#include "sres/samplers.hpp"

namespace sres {

/// Agreement counts between a sample run and the restricted whole run. Exact
/// mode holds integers; the expectation model holds real-valued counts.
struct OverlapCounts {
  double both = 0.0;
  double neither = 0.0;
  double sample_only = 0.0;
  double whole_only = 0.0;

  [[nodiscard]] double total() const { return both + neither + sample_only + whole_only; }
};

/// 2 |A & B| / (|A| + |B|) for the flag sets A (sample run) and B (whole run
/// restricted to the sample). Both empty counts as perfect agreement.
double resilience_exact(const Flags& sample_flags, const Flags& whole_flags_restricted);

/// Exact overlap counts of two flag vectors over the same records.
OverlapCounts overlap_counts(const Flags& sample_flags, const Flags& whole_flags_restricted);

/// Expected overlap counts for |S| records when whole-dataset and sample runs
/// err independently given the true class.
OverlapCounts expected_overlaps(double sample_size, const RatePanel& whole,
                                const RatePanel& sample);

/// 2 both / (2 both + sample_only + whole_only); 1 when nothing is flagged.
double resilience_from_expectations(const OverlapCounts& counts);

/// Whole-dataset flags at the sample's rows.
Flags restrict_flags(const Flags& whole, const SampleIndex& sample);

enum class Mode { exact, blind };
const char* to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);

/// Everything one resilience study needs: which detectors to assess, which
/// detectors feed the EM ensemble, the scheme and the replicate budget.
struct StudySpec {
  std::vector<DetectorConfig> targets;
  /// Also assess the EM consensus of `ensemble_members` as one black-box detector.
  bool ensemble_target = false;
  /// Detectors whose votes feed the EM fit (blind mode and the ensemble
  /// target). Targets missing from this list are appended.
  std::vector<DetectorConfig> ensemble_members;
  SchemeSpec scheme;
  std::size_t replicates = 100;
  bool exact = true;
  bool blind = false;
  std::uint64_t seed = 0;
  EmOptions em;
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;
};

/// One target on one sample.
struct TargetSample {
  std::optional<double> rho_exact;
  std::optional<double> rho_blind;
  /// EM estimates (alpha^S, beta^S, gamma) on this sample.
  std::optional<RatePanel> em_rates;
  /// Sample-run flags against the ground truth restricted to the sample.
  std::optional<Rates> truth_rates;
  std::size_t flagged_sample = 0;
  std::size_t flagged_whole = 0;
  std::optional<std::string> error;
};

struct SampleRecord {
  std::size_t replicate = 0;
  std::size_t part = 0;
  std::size_t size = 0;
  std::size_t true_outliers = 0;
  std::vector<TargetSample> targets;
};

struct StudyResult {
  std::vector<std::string> target_ids;
  std::vector<SampleRecord> samples;
  /// Whole-dataset run quality against ground truth (exact mode, labeled data).
  std::vector<std::optional<Rates>> whole_quality;
  /// Blind-mode whole-dataset panel: across-sample mean of the EM estimates.
  std::vector<std::optional<RatePanel>> blind_whole_panel;
  std::vector<std::optional<std::string>> whole_error;
};

/// Runs every replicate of the scheme and evaluates each target.
StudyResult run_study(const Dataset& data, const StudySpec& spec);

/// The seven detectors sharing `base`'s parameters.
std::vector<DetectorConfig> all_detectors(const DetectorConfig& base = {});

struct ResilienceEstimate {
  double point = 0.0;
  std::vector<double> per_replicate;  // one value per drawn sample
  double mean = 0.0;
  std::optional<double> sd;  // divisor count - 1; absent for a single value
  Mode mode = Mode::exact;
  std::string method;
  std::string scheme;
  std::size_t sample_size = 0;
};

/// Summary of a list of per-sample values.
ResilienceEstimate summarize(std::vector<double> values, Mode mode, std::string method,
                             std::string scheme, std::size_t sample_size);

/// Resilience of one detector under `scheme`, exact or blind.
/// In blind mode the EM ensemble is fed `ensemble_members` (all seven
/// detectors with `cfg`'s parameters when empty).
ResilienceEstimate estimate_resilience(const Dataset& data, const DetectorConfig& cfg,
                                       const SchemeSpec& scheme, std::size_t replicates,
                                       Mode mode, std::uint64_t seed,
                                       std::vector<DetectorConfig> ensemble_members = {});

/// Resilience of the EM consensus of `members`, treated as a single detector.
ResilienceEstimate ensemble_resilience(const Dataset& data,
                                       const std::vector<DetectorConfig>& members,
                                       const SchemeSpec& scheme, std::size_t replicates,
                                       Mode mode, std::uint64_t seed);

}  // namespace sres
