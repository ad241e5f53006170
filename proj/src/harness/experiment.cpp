#include "sres/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sres/errors.hpp"
#include "sres/rng.hpp"
#include "sres/synthgen.hpp"
#include "sres/table.hpp"

namespace sres {

namespace {

struct Moments {
  std::size_t count = 0;
  std::optional<double> mean;
  std::optional<double> sd;
};

// Plain left-to-right sums so a reader of the CSV reproduces them exactly.
Moments moments(const std::vector<double>& xs) {
  Moments m;
  m.count = xs.size();
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  m.mean = mean;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    m.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

std::optional<double> mean_of(const std::vector<double>& xs) { return moments(xs).mean; }

std::optional<double> mean_sq_diff(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& [a, b] : pairs) sum += (a - b) * (a - b);
  return sum / static_cast<double>(pairs.size());
}

std::optional<double> root(std::optional<double> v) {
  if (!v) return std::nullopt;
  return std::sqrt(*v);
}

Dataset materialize(const DatasetSource& src) {
  Dataset data = src.synthetic ? generate(src.synth) : load_csv(src.path, src.gt_column);
  data.id = src.id;
  return data;
}

std::vector<std::string> target_names(const ExperimentConfig& config) {
  std::vector<std::string> out;
  for (const auto& d : config.detectors) out.emplace_back(to_string(d.method));
  if (config.ensemble_target) out.emplace_back("ensemble");
  return out;
}

void skip_all(const ExperimentConfig& config, const std::string& dataset,
              const std::string& scheme, const std::string& params, const std::string& reason,
              ResultsTable& out) {
  for (const auto& t : target_names(config))
    out.skipped.push_back({dataset, t, scheme, params, reason});
}

}  // namespace

SummaryRow summarize_rows(const std::vector<ReplicateRow>& rows) {
  SummaryRow s;
  if (rows.empty()) return s;
  s.dataset = rows.front().dataset;
  s.method = rows.front().method;
  s.scheme = rows.front().scheme;
  s.params = rows.front().params;
  std::vector<double> exact, blind, prec, rec, f1;
  std::vector<std::pair<double, double>> err_rho, err_alpha, err_beta;
  for (const auto& r : rows) {
    s.sample_size = std::max(s.sample_size, r.sample_size);
    ++s.samples;
    if (!r.error.empty()) ++s.failed;
    if (r.rho_exact) exact.push_back(*r.rho_exact);
    if (r.rho_blind) blind.push_back(*r.rho_blind);
    if (r.rho_exact && r.rho_blind) err_rho.emplace_back(*r.rho_blind, *r.rho_exact);
    if (r.alpha_hat && r.alpha_true) err_alpha.emplace_back(*r.alpha_hat, *r.alpha_true);
    if (r.beta_hat && r.beta_true) err_beta.emplace_back(*r.beta_hat, *r.beta_true);
    if (r.precision) prec.push_back(*r.precision);
    if (r.recall) rec.push_back(*r.recall);
    if (r.f1) f1.push_back(*r.f1);
  }
  const auto me = moments(exact);
  const auto mb = moments(blind);
  s.mean_exact = me.mean;
  s.sd_exact = me.sd;
  s.mean_blind = mb.mean;
  s.sd_blind = mb.sd;
  s.mse = mean_sq_diff(err_rho);
  s.rmse_alpha = root(mean_sq_diff(err_alpha));
  s.rmse_beta = root(mean_sq_diff(err_beta));
  s.mean_precision = mean_of(prec);
  s.mean_recall = mean_of(rec);
  s.mean_f1 = mean_of(f1);
  return s;
}

void run_dataset(const ExperimentConfig& config, const Dataset& data, ResultsTable& out) {
  const std::size_t n = data.rows();
  if (data.ground_truth) out.has_ground_truth = true;
  for (const auto& grid : config.schemes) {
    for (const auto& scheme : grid.expand(n)) {
      const std::string name = scheme.name();
      const std::string params = scheme.params();
      try {
        scheme.check_feasible(n);
      } catch (const Error& e) {
        skip_all(config, data.id, name, params, std::string("infeasible: ") + e.what(), out);
        continue;
      }
      StudySpec spec;
      spec.targets = config.detectors;
      spec.ensemble_target = config.ensemble_target;
      spec.ensemble_members = config.ensemble_members;
      spec.scheme = scheme;
      spec.replicates = config.replicates;
      spec.exact = config.exact;
      spec.blind = config.blind;
      spec.seed = derive_seed(config.master_seed, {stream_tag("study"), stream_tag(data.id),
                                                   stream_tag(scheme.describe())});
      spec.em = config.em;
      spec.threads = config.threads;

      StudyResult study;
      try {
        study = run_study(data, spec);
      } catch (const Error& e) {
        skip_all(config, data.id, name, params, e.what(), out);
        continue;
      }

      for (std::size_t t = 0; t < study.target_ids.size(); ++t) {
        std::vector<ReplicateRow> rows;
        rows.reserve(study.samples.size());
        for (const auto& sample : study.samples) {
          const auto& ts = sample.targets[t];
          ReplicateRow r;
          r.dataset = data.id;
          r.method = study.target_ids[t];
          r.scheme = name;
          r.params = params;
          r.replicate = sample.replicate;
          r.part = sample.part;
          r.sample_size = sample.size;
          r.true_outliers = sample.true_outliers;
          r.flagged_sample = ts.flagged_sample;
          r.flagged_whole = ts.flagged_whole;
          r.rho_exact = ts.rho_exact;
          r.rho_blind = ts.rho_blind;
          if (ts.em_rates) {
            r.alpha_hat = ts.em_rates->alpha;
            r.beta_hat = ts.em_rates->beta;
            r.gamma_hat = ts.em_rates->gamma;
          }
          if (ts.truth_rates) {
            r.alpha_true = ts.truth_rates->sensitivity;
            r.beta_true = ts.truth_rates->specificity;
            r.precision = ts.truth_rates->precision;
            r.recall = ts.truth_rates->recall;
            r.f1 = ts.truth_rates->f1;
          }
          if (ts.error) r.error = *ts.error;
          rows.push_back(std::move(r));
        }
        const bool any_value = std::any_of(rows.begin(), rows.end(), [](const ReplicateRow& r) {
          return r.rho_exact.has_value() || r.rho_blind.has_value();
        });
        if (!any_value) {
          std::string reason = "no sample produced a resilience value";
          if (study.whole_error[t]) reason = *study.whole_error[t];
          else
            for (const auto& r : rows)
              if (!r.error.empty()) { reason = r.error; break; }
          out.skipped.push_back({data.id, study.target_ids[t], name, params, reason});
          continue;
        }
        SummaryRow s = summarize_rows(rows);
        if (study.whole_quality[t]) {
          s.whole_precision = study.whole_quality[t]->precision;
          s.whole_recall = study.whole_quality[t]->recall;
          s.whole_f1 = study.whole_quality[t]->f1;
        }
        if (study.blind_whole_panel[t]) {
          s.blind_alpha_whole = study.blind_whole_panel[t]->alpha;
          s.blind_beta_whole = study.blind_whole_panel[t]->beta;
        }
        out.summaries.push_back(std::move(s));
        for (auto& r : rows) out.replicates.push_back(std::move(r));
      }
    }
  }
}

ResultsTable run_experiment(const ExperimentConfig& config) {
  ResultsTable out;
  out.grid_size = config.grid_size();
  for (const auto& src : config.datasets) {
    // Unreadable data is fatal: its cells cannot be accounted for.
    Dataset data = materialize(src);
    data.validate();
    run_dataset(config, data, out);
  }
  return out;
}

CsvTable replicate_table(const ResultsTable& results) {
  CsvTable t;
  t.header = {"dataset", "method", "scheme", "params", "replicate", "part", "sample_size",
              "true_outliers", "flagged_sample", "flagged_whole", "rho_exact", "rho_blind",
              "alpha_hat", "beta_hat", "gamma_hat", "alpha_true", "beta_true", "precision",
              "recall", "f1", "error"};
  for (const auto& r : results.replicates) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    t.rows.push_back({r.dataset, r.method, r.scheme, r.params, std::to_string(r.replicate),
                      std::to_string(r.part), std::to_string(r.sample_size),
                      std::to_string(r.true_outliers), std::to_string(r.flagged_sample),
                      std::to_string(r.flagged_whole), cell(r.rho_exact), cell(r.rho_blind),
                      cell(r.alpha_hat), cell(r.beta_hat), cell(r.gamma_hat), cell(r.alpha_true),
                      cell(r.beta_true), cell(r.precision), cell(r.recall), cell(r.f1), err});
  }
  return t;
}

CsvTable summary_table(const ResultsTable& results) {
  CsvTable t;
  t.header = {"dataset", "method", "scheme", "params", "sample_size", "samples", "failed",
              "mean_exact", "sd_exact", "mean_blind", "sd_blind", "mse", "rmse_alpha",
              "rmse_beta", "mean_precision", "mean_recall", "mean_f1", "whole_precision",
              "whole_recall", "whole_f1", "blind_alpha_whole", "blind_beta_whole"};
  for (const auto& s : results.summaries)
    t.rows.push_back({s.dataset, s.method, s.scheme, s.params, std::to_string(s.sample_size),
                      std::to_string(s.samples), std::to_string(s.failed), cell(s.mean_exact),
                      cell(s.sd_exact), cell(s.mean_blind), cell(s.sd_blind), cell(s.mse),
                      cell(s.rmse_alpha), cell(s.rmse_beta), cell(s.mean_precision),
                      cell(s.mean_recall), cell(s.mean_f1), cell(s.whole_precision),
                      cell(s.whole_recall), cell(s.whole_f1), cell(s.blind_alpha_whole),
                      cell(s.blind_beta_whole)});
  return t;
}

void write_results(const ResultsTable& results, const ExperimentConfig& config,
                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create " + dir.string() + ": " + ec.message());
  const auto prov = config.provenance();

  CsvTable reps = replicate_table(results);
  reps.comments = prov;
  reps.write(dir / "replicates.csv");

  CsvTable summary = summary_table(results);
  summary.comments = prov;
  summary.comments.push_back("grid_size=" + std::to_string(results.grid_size));
  summary.write(dir / "summary.csv");

  CsvTable skipped;
  skipped.comments = prov;
  skipped.header = {"dataset", "method", "scheme", "params", "reason"};
  for (const auto& s : results.skipped) {
    std::string reason = s.reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    std::replace(reason.begin(), reason.end(), '\n', ' ');
    skipped.rows.push_back({s.dataset, s.method, s.scheme, s.params, reason});
  }
  skipped.write(dir / "skipped.csv");

  if (results.has_ground_truth) {
    CsvTable q;
    q.comments = prov;
    q.header = {"dataset", "method", "scheme", "params", "sample_size", "resilience",
                "resilience_sd", "sample_precision", "sample_recall", "sample_f1",
                "whole_precision", "whole_recall", "whole_f1"};
    for (const auto& s : results.summaries) {
      auto rho = s.mean_exact ? s.mean_exact : s.mean_blind;
      auto sd = s.mean_exact ? s.sd_exact : s.sd_blind;
      q.rows.push_back({s.dataset, s.method, s.scheme, s.params, std::to_string(s.sample_size),
                        cell(rho), cell(sd), cell(s.mean_precision), cell(s.mean_recall),
                        cell(s.mean_f1), cell(s.whole_precision), cell(s.whole_recall),
                        cell(s.whole_f1)});
    }
    q.write(dir / "quality.csv");
  }

  std::string echo = "# " + prov.front() + "\n";
  for (const auto& [k, v] : config.entries) echo += k + " = " + v + "\n";
  std::ofstream(dir / "config.txt", std::ios::binary) << echo;
}

std::vector<ReplicateRow> read_replicates(const std::filesystem::path& path) {
  const CsvTable t = CsvTable::read(path);
  std::vector<ReplicateRow> out;
  out.reserve(t.rows.size());
  auto count = [&](std::size_t i, const char* col) {
    const auto v = t.number(i, col);
    if (!v) throw ParseError(path.string() + ": empty " + col + " at row " + std::to_string(i + 1));
    return static_cast<std::size_t>(*v);
  };
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    ReplicateRow r;
    r.dataset = t.at(i, "dataset");
    r.method = t.at(i, "method");
    r.scheme = t.at(i, "scheme");
    r.params = t.at(i, "params");
    r.replicate = count(i, "replicate");
    r.part = count(i, "part");
    r.sample_size = count(i, "sample_size");
    r.true_outliers = count(i, "true_outliers");
    r.flagged_sample = count(i, "flagged_sample");
    r.flagged_whole = count(i, "flagged_whole");
    r.rho_exact = t.number(i, "rho_exact");
    r.rho_blind = t.number(i, "rho_blind");
    r.alpha_hat = t.number(i, "alpha_hat");
    r.beta_hat = t.number(i, "beta_hat");
    r.gamma_hat = t.number(i, "gamma_hat");
    r.alpha_true = t.number(i, "alpha_true");
    r.beta_true = t.number(i, "beta_true");
    r.precision = t.number(i, "precision");
    r.recall = t.number(i, "recall");
    r.f1 = t.number(i, "f1");
    r.error = t.at(i, "error");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace sres
