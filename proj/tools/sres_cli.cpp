// sres: command-line driver for sampling-resilience studies.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sres/config.hpp"
#include "sres/dataset.hpp"
#include "sres/detectors.hpp"
#include "sres/ensemble.hpp"
#include "sres/errors.hpp"
#include "sres/experiment.hpp"
#include "sres/report.hpp"
#include "sres/resilience.hpp"
#include "sres/rng.hpp"
#include "sres/samplers.hpp"
#include "sres/synthgen.hpp"

namespace {

enum Exit : int { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Provenance lines for files written by single-shot commands.
std::vector<std::string> provenance(const CLI::App& sub, std::uint64_t seed) {
  return {std::string("version=sres-") + sres::kVersion,
          "command=" + sub.get_name(),
          "config_hash=" + hex(sres::stream_tag(sub.config_to_str(true, false))),
          "master_seed=" + std::to_string(seed)};
}

struct DetectorFlags {
  std::string method;
  double top_fraction = 0.10;
  std::size_t k_clusters = 5;
  std::size_t min_pts = 10;
  double chi_sq_quantile = 0.975;
  double mad_multiplier = 3.0;
  double ridge_epsilon = 1e-8;
  std::string aggregation = "any";

  void add(CLI::App* app) {
    app->add_option("--top-fraction", top_fraction, "Fraction flagged by score-based methods");
    app->add_option("--k-clusters", k_clusters, "K-means cluster count");
    app->add_option("--min-pts", min_pts, "LOF neighbourhood size");
    app->add_option("--chi-sq-quantile", chi_sq_quantile, "Chi-square rule quantile");
    app->add_option("--mad-multiplier", mad_multiplier, "MAD rule multiplier");
    app->add_option("--ridge-epsilon", ridge_epsilon, "Mahalanobis covariance ridge");
    app->add_option("--aggregation", aggregation, "Per-attribute aggregation: any|majority");
  }

  sres::DetectorConfig base() const {
    sres::DetectorConfig cfg;
    cfg.top_fraction = top_fraction;
    cfg.k_clusters = k_clusters;
    cfg.min_pts = min_pts;
    cfg.chi_sq_quantile = chi_sq_quantile;
    cfg.mad_multiplier = mad_multiplier;
    cfg.ridge_epsilon = ridge_epsilon;
    auto a = sres::parse_aggregation(aggregation);
    if (!a) throw UsageError("unknown aggregation '" + aggregation + "' (any, majority)");
    cfg.aggregation = *a;
    try {
      cfg.validate();
    } catch (const sres::Error& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }

  sres::DetectorConfig with(const std::string& name) const {
    auto cfg = base();
    auto m = sres::parse_method(name);
    if (!m) throw UsageError("unknown method '" + name + "'; valid methods: " + sres::method_names());
    cfg.method = *m;
    return cfg;
  }

  std::vector<sres::DetectorConfig> list(const std::string& names) const {
    if (names.empty() || names == "all") return sres::all_detectors(base());
    std::vector<sres::DetectorConfig> out;
    for (const auto& n : sres::split_list(names)) out.push_back(with(n));
    return out;
  }
};

sres::SchemeSpec scheme_arg(const std::string& text) {
  auto s = sres::parse_scheme(text);
  if (!s) throw UsageError("bad scheme '" + text + "'; expected random(size), block(n_blocks,block_size) or partition(k)");
  return *s;
}

sres::Mode mode_arg(const std::string& text) {
  auto m = sres::parse_mode(text);
  if (!m) throw UsageError("bad mode '" + text + "'; expected exact or blind");
  return *m;
}

std::optional<std::string> opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling resilience of outlier detectors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("sres ") + sres::kVersion);

  std::uint64_t seed = 0;
  std::string out;
  std::string data_path;
  std::string gt_column;

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic two-attribute dataset");
  std::size_t gen_n = 1000;
  double gen_rate = 0.05;
  std::string gen_dist = "dist1";
  bool gen_fig1 = false;
  gen->add_option("--n", gen_n, "Number of records");
  gen->add_option("--rate", gen_rate, "Outlier fraction in [0, 1)");
  gen->add_option("--distribution", gen_dist, "Outlier distribution: dist1|dist2");
  gen->add_flag("--fig1", gen_fig1, "Single-Gaussian 1500-record illustration dataset");
  gen->add_option("--seed", seed, "Seed");
  gen->add_option("--out", out, "Output CSV")->required();

  // detect
  auto* det = app.add_subcommand("detect", "Run one detector on a dataset or a sample of it");
  DetectorFlags det_flags;
  std::string det_sample;
  det->add_option("--data", data_path, "Input CSV")->required();
  det->add_option("--gt-column", gt_column, "Ground-truth column to drop from the attributes");
  det->add_option("--method", det_flags.method, "Detector: " + sres::method_names())->required();
  det->add_option("--sample", det_sample, "Sample index CSV restricting the run");
  det->add_option("--seed", seed, "Seed");
  det->add_option("--out", out, "Output detection CSV")->required();
  det_flags.add(det);

  // sample
  auto* smp = app.add_subcommand("sample", "Draw sample indices");
  std::size_t smp_n = 0;
  std::string smp_scheme;
  smp->add_option("--data", data_path, "Dataset whose rows are sampled");
  smp->add_option("--n", smp_n, "Row count (instead of --data)");
  smp->add_option("--scheme", smp_scheme, "random(size) | block(n_blocks,block_size) | partition(k)")->required();
  smp->add_option("--seed", seed, "Seed");
  smp->add_option("--out", out, "Output CSV; partition writes one file per part")->required();

  // resilience
  auto* res = app.add_subcommand("resilience", "Estimate the resilience of one detector");
  DetectorFlags res_flags;
  std::string res_scheme, res_mode = "exact", res_members;
  std::size_t res_b = 100;
  res->add_option("--data", data_path, "Input CSV")->required();
  res->add_option("--gt-column", gt_column, "Ground-truth column");
  res->add_option("--method", res_flags.method, "Detector: " + sres::method_names())->required();
  res->add_option("--scheme", res_scheme, "Sampling scheme")->required();
  res->add_option("--replicates", res_b, "Replicates B");
  res->add_option("--mode", res_mode, "exact|blind");
  res->add_option("--members", res_members, "Blind-mode EM members (comma list or all)");
  res->add_option("--seed", seed, "Seed");
  res->add_option("--out", out, "Per-sample CSV (summary printed to stdout)");
  res_flags.add(res);

  // ensemble
  auto* ens = app.add_subcommand("ensemble", "Fit the EM ensemble of several detectors");
  DetectorFlags ens_flags;
  std::string ens_members, ens_sample, ens_report, ens_scheme, ens_mode = "exact";
  std::size_t ens_b = 0;
  ens->add_option("--data", data_path, "Input CSV")->required();
  ens->add_option("--gt-column", gt_column, "Ground-truth column");
  ens->add_option("--members", ens_members, "Member detectors (comma list or all)");
  ens->add_option("--sample", ens_sample, "Sample index CSV restricting the run");
  ens->add_option("--seed", seed, "Seed");
  ens->add_option("--out", out, "Consensus detection CSV")->required();
  ens->add_option("--report", ens_report, "Model report file (stdout when omitted)");
  ens->add_option("--scheme", ens_scheme, "Also estimate the ensemble's resilience under this scheme");
  ens->add_option("--replicates", ens_b, "Replicates for --scheme")->default_val(100);
  ens->add_option("--mode", ens_mode, "exact|blind for --scheme");
  ens_flags.add(ens);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run an experiment grid from a config file");
  std::string exp_config, exp_mode;
  std::optional<std::uint64_t> exp_seed;
  std::optional<std::size_t> exp_threads;
  exp->add_option("--config", exp_config, "Config file")->required();
  exp->add_option("--seed", exp_seed, "Override master_seed");
  exp->add_option("--mode", exp_mode, "Override mode: exact|blind|both");
  exp->add_option("--threads", exp_threads, "Override threads (0: all cores)");
  exp->add_option("--out", out, "Override output_dir");

  // report
  auto* rep = app.add_subcommand("report", "Build plot-ready tables from results directories");
  std::vector<std::string> rep_dirs;
  rep->add_option("results", rep_dirs, "Results directories")->required();
  rep->add_option("--out", out, "Output directory (defaults to the first results directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gen) {
      sres::Dataset data;
      if (gen_fig1) {
        data = sres::generate_fig1(seed);
      } else {
        auto d = sres::parse_distribution(gen_dist);
        if (!d) throw UsageError("unknown distribution '" + gen_dist + "' (dist1, dist2)");
        sres::SynthSpec spec;
        spec.n = gen_n;
        spec.rate = gen_rate;
        spec.outlier_distribution = *d;
        spec.seed = seed;
        try {
          spec.validate();
        } catch (const sres::Error& e) {
          throw UsageError(e.what());
        }
        data = sres::generate(spec);
      }
      auto comments = provenance(*gen, seed);
      comments.push_back("dataset=" + data.id);
      sres::write_csv(data, out, comments);
      std::cout << "wrote " << data.rows() << " records (" << sres::count_flags(*data.ground_truth)
                << " outliers) to " << out << '\n';
    } else if (*det) {
      const auto cfg = det_flags.with(det_flags.method);
      const auto data = sres::load_csv(data_path, opt(gt_column));
      std::optional<sres::SampleIndex> scope;
      if (!det_sample.empty()) scope = sres::read_sample_csv(det_sample);
      const auto result = sres::run_detector(data, cfg, scope, seed);
      sres::write_detection_csv(result, out, provenance(*det, seed));
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << result.flagged() << " of " << result.record_flags.size() << " records flagged\n";
    } else if (*smp) {
      std::size_t n = smp_n;
      if (!data_path.empty()) n = sres::load_csv(data_path).rows();
      if (n == 0) throw UsageError("sample needs --data or --n");
      const auto scheme = scheme_arg(smp_scheme);
      try {
        scheme.check_feasible(n);
      } catch (const sres::Error& e) {
        throw UsageError(e.what());
      }
      const auto samples = sres::draw(n, scheme, seed);
      const auto prov = provenance(*smp, seed);
      if (samples.size() == 1) {
        sres::write_sample_csv(samples.front(), out, prov);
      } else {
        const std::filesystem::path base(out);
        for (const auto& s : samples) {
          auto p = base;
          p.replace_filename(base.stem().string() + ".part" + std::to_string(s.part_id) +
                             base.extension().string());
          sres::write_sample_csv(s, p, prov);
        }
      }
      std::cout << "wrote " << samples.size() << " sample(s)\n";
    } else if (*res) {
      const auto cfg = res_flags.with(res_flags.method);
      const auto scheme = scheme_arg(res_scheme);
      const auto mode = mode_arg(res_mode);
      if (res_b < 1) throw UsageError("--replicates must be at least 1");
      const auto data = sres::load_csv(data_path, opt(gt_column));
      try {
        scheme.check_feasible(data.rows());
      } catch (const sres::Error& e) {
        throw UsageError(e.what());
      }
      std::vector<sres::DetectorConfig> members;
      if (!res_members.empty()) members = res_flags.list(res_members);
      const auto est = sres::estimate_resilience(data, cfg, scheme, res_b, mode, seed, members);
      if (!out.empty()) {
        sres::CsvTable t;
        t.comments = provenance(*res, seed);
        t.comments.push_back("method=" + est.method + " scheme=" + est.scheme + " mode=" + sres::to_string(mode));
        t.comments.push_back("mean=" + sres::format_double(est.mean) + " sd=" + sres::cell(est.sd));
        t.header = {"sample", "resilience"};
        for (std::size_t i = 0; i < est.per_replicate.size(); ++i)
          t.rows.push_back({std::to_string(i), sres::format_double(est.per_replicate[i])});
        t.write(out);
      }
      std::cout << est.method << ' ' << est.scheme << ' ' << sres::to_string(mode)
                << " resilience mean=" << sres::format_double(est.mean)
                << " sd=" << (est.sd ? sres::format_double(*est.sd) : "NA")
                << " samples=" << est.per_replicate.size() << '\n';
    } else if (*ens) {
      const auto members = ens_flags.list(ens_members);
      const auto data = sres::load_csv(data_path, opt(gt_column));
      std::optional<sres::SampleIndex> scope;
      if (!ens_sample.empty()) scope = sres::read_sample_csv(ens_sample);
      sres::LabelMatrix votes;
      for (const auto& m : members) {
        const auto s = sres::derive_seed(seed, {sres::stream_tag("detect"), sres::stream_tag(sres::to_string(m.method))});
        votes.votes.push_back(sres::run_detector(data, m, scope, s).record_flags);
        votes.method_ids.emplace_back(sres::to_string(m.method));
      }
      const auto model = sres::em_fit(votes);
      sres::DetectionResult consensus;
      consensus.method = "ensemble";
      for (const auto& id : votes.method_ids)
        consensus.params["members"] += (consensus.params["members"].empty() ? "" : "+") + id;
      consensus.record_flags = sres::consensus_flags(model);
      consensus.dataset_id = data.id;
      consensus.scope = scope;
      consensus.seed = seed;
      sres::write_detection_csv(consensus, out, provenance(*ens, seed));
      const auto text = sres::ensemble_report(model);
      if (ens_report.empty()) std::cout << text;
      else std::ofstream(ens_report, std::ios::binary) << text;
      if (!ens_scheme.empty()) {
        const auto scheme = scheme_arg(ens_scheme);
        const auto est = sres::ensemble_resilience(data, members, scheme, ens_b, mode_arg(ens_mode), seed);
        std::cout << "ensemble " << est.scheme << " resilience mean=" << sres::format_double(est.mean)
                  << " sd=" << (est.sd ? sres::format_double(*est.sd) : "NA") << '\n';
      }
    } else if (*exp) {
      auto cfg = sres::load_config(exp_config);
      if (exp_seed) {
        cfg.master_seed = *exp_seed;
        cfg.entries["master_seed"] = std::to_string(*exp_seed);
        // Synthetic datasets derive from the master seed.
        for (auto& d : cfg.datasets)
          if (d.synthetic)
            d.synth.seed = sres::derive_seed(cfg.master_seed, {sres::stream_tag("dataset"), sres::stream_tag(d.id)});
      }
      if (!exp_mode.empty()) {
        if (exp_mode == "exact") { cfg.exact = true; cfg.blind = false; }
        else if (exp_mode == "blind") { cfg.exact = false; cfg.blind = true; }
        else if (exp_mode == "both") { cfg.exact = cfg.blind = true; }
        else throw UsageError("bad mode '" + exp_mode + "'; expected exact, blind or both");
        cfg.entries["mode"] = exp_mode;
      }
      if (exp_threads) cfg.threads = *exp_threads;
      if (!out.empty()) cfg.output_dir = out;
      const auto results = sres::run_experiment(cfg);
      sres::write_results(results, cfg, cfg.output_dir);
      std::cout << results.summaries.size() << " summary rows, " << results.skipped.size()
                << " skipped, grid size " << results.grid_size << "; results in "
                << cfg.output_dir.string() << '\n';
    } else if (*rep) {
      std::vector<std::filesystem::path> dirs(rep_dirs.begin(), rep_dirs.end());
      const auto report = sres::build_report(dirs);
      const std::filesystem::path dest = out.empty() ? dirs.front() : std::filesystem::path(out);
      sres::write_report(report, dest);
      std::cout << "report tables written to " << dest.string() << '\n';
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const sres::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const sres::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const sres::IllPosedError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const sres::Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
