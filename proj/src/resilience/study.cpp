#include <algorithm>
#include <cmath>
#include <numeric>

#include "sres/errors.hpp"
#include "sres/parallel.hpp"
#include "sres/resilience.hpp"
#include "sres/rng.hpp"

namespace sres {

namespace {

constexpr const char* kEnsembleId = "ensemble";

// One stream per method, shared by the whole-data run and every sample run:
// detector randomness is part of the method, only the sample varies.
std::uint64_t detector_seed(std::uint64_t master, const DetectorConfig& cfg) {
  return derive_seed(master, {stream_tag("detect"), stream_tag(to_string(cfg.method))});
}

std::size_t slot_of(std::vector<DetectorConfig>& detectors, const DetectorConfig& cfg) {
  const auto it = std::find(detectors.begin(), detectors.end(), cfg);
  if (it != detectors.end()) return static_cast<std::size_t>(it - detectors.begin());
  detectors.push_back(cfg);
  return detectors.size() - 1;
}

struct Plan {
  std::vector<DetectorConfig> detectors;
  std::vector<std::size_t> target_slot;
  std::vector<std::size_t> member_slot;
};

Plan make_plan(const StudySpec& spec) {
  Plan plan;
  for (const auto& t : spec.targets) plan.target_slot.push_back(slot_of(plan.detectors, t));
  if (spec.blind || spec.ensemble_target) {
    for (const auto& m : spec.ensemble_members) {
      const auto s = slot_of(plan.detectors, m);
      if (std::find(plan.member_slot.begin(), plan.member_slot.end(), s) == plan.member_slot.end())
        plan.member_slot.push_back(s);
    }
    if (spec.blind)
      for (auto s : plan.target_slot)
        if (std::find(plan.member_slot.begin(), plan.member_slot.end(), s) == plan.member_slot.end())
          plan.member_slot.push_back(s);
  }
  return plan;
}

// Consensus labels measured against the posterior class probabilities.
RatePanel soft_consensus_rates(const EnsembleModel& model) {
  double mass_o = 0.0, mass_i = 0.0, hit_o = 0.0, pass_i = 0.0;
  for (std::size_t i = 0; i < model.labels.size(); ++i) {
    const auto& p = model.posteriors[i];
    mass_o += p[kOutlier];
    mass_i += p[kInlier];
    if (model.labels[i]) {
      hit_o += p[kOutlier];
    } else {
      pass_i += p[kInlier];
    }
  }
  return {mass_o > 0 ? hit_o / mass_o : 1.0, mass_i > 0 ? pass_i / mass_i : 1.0, model.p_outlier};
}

struct Job {
  std::size_t replicate;
  SampleIndex sample;
};

}  // namespace

std::vector<DetectorConfig> all_detectors(const DetectorConfig& base) {
  std::vector<DetectorConfig> out;
  for (auto m : kAllMethods) {
    auto cfg = base;
    cfg.method = m;
    out.push_back(cfg);
  }
  return out;
}

StudyResult run_study(const Dataset& data, const StudySpec& spec) {
  if (spec.replicates == 0) throw RangeError("replicates must be >= 1");
  if (spec.targets.empty() && !spec.ensemble_target)
    throw ConfigError("resilience study needs at least one target");
  if (spec.ensemble_target && spec.ensemble_members.empty())
    throw ConfigError("ensemble target needs at least one member detector");
  if (!spec.exact && !spec.blind) throw ConfigError("enable exact and/or blind mode");
  data.validate();
  const std::size_t n = data.rows();
  spec.scheme.check_feasible(n);
  for (const auto& t : spec.targets) t.validate();

  const Plan plan = make_plan(spec);
  const std::size_t n_single = spec.targets.size();
  const std::size_t n_targets = n_single + (spec.ensemble_target ? 1 : 0);

  StudyResult result;
  for (const auto& t : spec.targets) result.target_ids.emplace_back(to_string(t.method));
  if (spec.ensemble_target) result.target_ids.emplace_back(kEnsembleId);
  result.whole_quality.resize(n_targets);
  result.blind_whole_panel.resize(n_targets);
  result.whole_error.resize(n_targets);

  // Whole-dataset runs, computed once and only read afterwards.
  std::vector<std::optional<Flags>> whole(n_targets);
  if (spec.exact) {
    for (std::size_t t = 0; t < n_single; ++t) {
      try {
        whole[t] = run_detector(data, spec.targets[t], std::nullopt,
                                detector_seed(spec.seed, spec.targets[t]))
                       .record_flags;
      } catch (const Error& e) {
        result.whole_error[t] = e.what();
      }
    }
    if (spec.ensemble_target) {
      try {
        LabelMatrix votes;
        for (const auto& m : spec.ensemble_members) {
          votes.votes.push_back(run_detector(data, m, std::nullopt, detector_seed(spec.seed, m)).record_flags);
          votes.method_ids.emplace_back(to_string(m.method));
        }
        whole[n_single] = em_fit(votes, spec.em).labels;
      } catch (const Error& e) {
        result.whole_error[n_single] = e.what();
      }
    }
    if (data.ground_truth)
      for (std::size_t t = 0; t < n_targets; ++t)
        if (whole[t]) result.whole_quality[t] = rates(confusion(*whole[t], *data.ground_truth));
  }

  std::vector<Job> jobs;
  for (std::size_t r = 0; r < spec.replicates; ++r)
    for (auto& s : draw(n, spec.scheme, derive_seed(spec.seed, {stream_tag("sample"), r})))
      jobs.push_back({r, std::move(s)});

  result.samples.resize(jobs.size());
  std::vector<std::optional<EnsembleModel>> models(jobs.size());

  parallel_for(jobs.size(), spec.threads, [&](std::size_t j) {
    const auto& job = jobs[j];
    const auto& sample = job.sample;
    auto& rec = result.samples[j];
    rec.replicate = job.replicate;
    rec.part = sample.part_id;
    rec.size = sample.size();
    rec.targets.resize(n_targets);

    Eigen::MatrixXd rows(static_cast<Eigen::Index>(sample.size()), data.values.cols());
    for (std::size_t i = 0; i < sample.size(); ++i)
      rows.row(static_cast<Eigen::Index>(i)) = data.values.row(static_cast<Eigen::Index>(sample.indices[i]));
    std::optional<Flags> truth;
    if (data.ground_truth) {
      truth = restrict_flags(*data.ground_truth, sample);
      rec.true_outliers = count_flags(*truth);
    }

    std::vector<std::optional<Flags>> flags(plan.detectors.size());
    std::vector<std::string> errors(plan.detectors.size());
    auto ensure = [&](std::size_t d) {
      if (flags[d] || !errors[d].empty()) return;
      try {
        flags[d] = detect_matrix(rows, plan.detectors[d],
                                 detector_seed(spec.seed, plan.detectors[d]))
                       .record_flags;
      } catch (const Error& e) {
        errors[d] = e.what();
      }
    };
    for (auto d : plan.target_slot) ensure(d);

    // EM over the member detectors that ran on this sample.
    std::optional<EnsembleModel> model;
    std::vector<std::size_t> member_pos(plan.detectors.size(), SIZE_MAX);
    if (!plan.member_slot.empty()) {
      LabelMatrix votes;
      for (auto d : plan.member_slot) {
        ensure(d);
        if (!flags[d]) continue;
        member_pos[d] = votes.votes.size();
        votes.votes.push_back(*flags[d]);
        votes.method_ids.emplace_back(to_string(plan.detectors[d].method));
      }
      if (!votes.votes.empty()) model = em_fit(votes, spec.em);
    }

    for (std::size_t t = 0; t < n_single; ++t) {
      auto& out = rec.targets[t];
      const auto d = plan.target_slot[t];
      if (!flags[d]) {
        out.error = errors[d];
        continue;
      }
      const Flags& f = *flags[d];
      out.flagged_sample = count_flags(f);
      if (truth) out.truth_rates = rates(confusion(f, *truth));
      if (whole[t]) {
        const auto w = restrict_flags(*whole[t], sample);
        out.flagged_whole = count_flags(w);
        out.rho_exact = resilience_exact(f, w);
      } else if (spec.exact) {
        out.error = result.whole_error[t];
      }
      if (spec.blind && model && member_pos[d] != SIZE_MAX)
        out.em_rates = method_rates(*model, member_pos[d]);
    }

    if (spec.ensemble_target) {
      auto& out = rec.targets[n_single];
      if (!model) {
        out.error = "no ensemble member ran on this sample";
      } else {
        const Flags& f = model->labels;
        out.flagged_sample = count_flags(f);
        if (truth) out.truth_rates = rates(confusion(f, *truth));
        if (whole[n_single]) {
          const auto w = restrict_flags(*whole[n_single], sample);
          out.flagged_whole = count_flags(w);
          out.rho_exact = resilience_exact(f, w);
        } else if (spec.exact) {
          out.error = result.whole_error[n_single];
        }
        if (spec.blind) out.em_rates = soft_consensus_rates(*model);
      }
    }
    models[j] = std::move(model);
  });

  if (spec.blind) {
    // Whole-dataset rates are not observable without a whole run; use the
    // across-sample mean of the per-sample EM estimates.
    double gamma_sum = 0.0;
    std::size_t gamma_count = 0;
    for (const auto& m : models)
      if (m) {
        gamma_sum += m->p_outlier;
        ++gamma_count;
      }
    const double gamma = gamma_count ? gamma_sum / static_cast<double>(gamma_count) : 0.0;
    for (std::size_t t = 0; t < n_targets; ++t) {
      double a = 0.0, b = 0.0;
      std::size_t count = 0;
      for (const auto& rec : result.samples)
        if (const auto& e = rec.targets[t].em_rates) {
          a += e->alpha;
          b += e->beta;
          ++count;
        }
      if (count == 0) continue;
      const RatePanel whole_panel{a / static_cast<double>(count), b / static_cast<double>(count), gamma};
      result.blind_whole_panel[t] = whole_panel;
      for (auto& rec : result.samples) {
        auto& ts = rec.targets[t];
        if (!ts.em_rates) continue;
        const RatePanel sample_panel{ts.em_rates->alpha, ts.em_rates->beta, gamma};
        ts.rho_blind = resilience_from_expectations(
            expected_overlaps(static_cast<double>(rec.size), whole_panel, sample_panel));
      }
    }
  }
  return result;
}

ResilienceEstimate summarize(std::vector<double> values, Mode mode, std::string method,
                             std::string scheme, std::size_t sample_size) {
  ResilienceEstimate est;
  est.mode = mode;
  est.method = std::move(method);
  est.scheme = std::move(scheme);
  est.sample_size = sample_size;
  if (!values.empty()) {
    est.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - est.mean) * (v - est.mean);
      est.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
  }
  est.point = est.mean;
  est.per_replicate = std::move(values);
  return est;
}

namespace {

ResilienceEstimate collect(const StudyResult& study, std::size_t target, Mode mode,
                           const SchemeSpec& scheme, std::size_t n) {
  std::vector<double> values;
  for (const auto& rec : study.samples) {
    const auto& ts = rec.targets[target];
    const auto& v = mode == Mode::exact ? ts.rho_exact : ts.rho_blind;
    if (!v) {
      throw NumericalError("resilience of " + study.target_ids[target] + " unavailable: " +
                           ts.error.value_or("no estimate"));
    }
    values.push_back(*v);
  }
  return summarize(std::move(values), mode, study.target_ids[target], scheme.describe(),
                   scheme.sample_size(n));
}

}  // namespace

ResilienceEstimate estimate_resilience(const Dataset& data, const DetectorConfig& cfg,
                                       const SchemeSpec& scheme, std::size_t replicates,
                                       Mode mode, std::uint64_t seed,
                                       std::vector<DetectorConfig> ensemble_members) {
  StudySpec spec;
  spec.targets = {cfg};
  spec.scheme = scheme;
  spec.replicates = replicates;
  spec.exact = mode == Mode::exact;
  spec.blind = mode == Mode::blind;
  spec.seed = seed;
  spec.ensemble_members = ensemble_members.empty() ? all_detectors(cfg) : std::move(ensemble_members);
  const auto study = run_study(data, spec);
  return collect(study, 0, mode, scheme, data.rows());
}

ResilienceEstimate ensemble_resilience(const Dataset& data,
                                       const std::vector<DetectorConfig>& members,
                                       const SchemeSpec& scheme, std::size_t replicates,
                                       Mode mode, std::uint64_t seed) {
  StudySpec spec;
  spec.ensemble_target = true;
  spec.ensemble_members = members;
  spec.scheme = scheme;
  spec.replicates = replicates;
  spec.exact = mode == Mode::exact;
  spec.blind = mode == Mode::blind;
  spec.seed = seed;
  const auto study = run_study(data, spec);
  return collect(study, 0, mode, scheme, data.rows());
}

}  // namespace sres
