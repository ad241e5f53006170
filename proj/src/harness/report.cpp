#include "sres/report.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "sres/errors.hpp"
#include "sres/experiment.hpp"

namespace sres {

namespace {

using Key = std::tuple<std::string, std::string, std::string, std::string>;

struct WholeQuality {
  std::string precision, recall, f1;
};

std::optional<double> headline(const SummaryRow& s) {
  return s.mean_exact ? s.mean_exact : s.mean_blind;
}

}  // namespace

Report build_report(const std::vector<std::filesystem::path>& result_dirs) {
  std::vector<Key> order;
  std::map<Key, std::vector<ReplicateRow>> groups;
  std::map<Key, WholeQuality> whole;
  std::vector<std::string> sources;
  for (const auto& dir : result_dirs) {
    const auto reps = dir / "replicates.csv";
    if (!std::filesystem::is_regular_file(reps)) continue;
    sources.push_back("source=" + dir.string());
    for (auto& r : read_replicates(reps)) {
      Key k{r.dataset, r.method, r.scheme, r.params};
      auto [it, fresh] = groups.try_emplace(k);
      if (fresh) order.push_back(k);
      it->second.push_back(std::move(r));
    }
    const auto sum = dir / "summary.csv";
    if (std::filesystem::is_regular_file(sum)) {
      const CsvTable t = CsvTable::read(sum);
      for (std::size_t i = 0; i < t.rows.size(); ++i)
        whole[{t.at(i, "dataset"), t.at(i, "method"), t.at(i, "scheme"), t.at(i, "params")}] = {
            t.at(i, "whole_precision"), t.at(i, "whole_recall"), t.at(i, "whole_f1")};
    }
  }
  if (groups.empty()) throw ConfigError("no results found (expected replicates.csv in the given directories)");

  // Rows of one dataset stay together.
  std::stable_sort(order.begin(), order.end(),
                   [](const Key& a, const Key& b) { return std::get<0>(a) < std::get<0>(b); });

  Report rep;
  for (CsvTable* t : {&rep.by_scheme, &rep.quality, &rep.ensemble, &rep.accuracy}) t->comments = sources;
  rep.by_scheme.header = {"dataset", "method", "scheme", "params", "sample_size", "samples",
                          "mean_exact", "sd_exact", "mean_blind", "sd_blind"};
  rep.quality.header = {"dataset", "method", "scheme", "params", "resilience", "sample_precision",
                        "sample_recall", "sample_f1", "whole_precision", "whole_recall", "whole_f1"};
  rep.accuracy.header = {"dataset", "method", "scheme", "params", "samples", "mse", "rmse_alpha",
                         "rmse_beta"};
  rep.ensemble.header = {"dataset", "scheme", "params", "ensemble", "component_median",
                         "component_min", "component_max", "components", "ensemble_rank"};

  std::map<std::tuple<std::string, std::string, std::string>, std::vector<std::pair<std::string, double>>> cells;
  std::vector<std::tuple<std::string, std::string, std::string>> cell_order;
  for (const auto& k : order) {
    const SummaryRow s = summarize_rows(groups[k]);
    const auto& [ds, method, scheme, params] = k;
    rep.by_scheme.rows.push_back({ds, method, scheme, params, std::to_string(s.sample_size),
                                  std::to_string(s.samples), cell(s.mean_exact), cell(s.sd_exact),
                                  cell(s.mean_blind), cell(s.sd_blind)});
    rep.accuracy.rows.push_back({ds, method, scheme, params, std::to_string(s.samples),
                                 cell(s.mse), cell(s.rmse_alpha), cell(s.rmse_beta)});
    if (s.mean_precision || s.mean_recall) {
      const auto w = whole.count(k) ? whole[k] : WholeQuality{};
      rep.quality.rows.push_back({ds, method, scheme, params, cell(headline(s)),
                                  cell(s.mean_precision), cell(s.mean_recall), cell(s.mean_f1),
                                  w.precision, w.recall, w.f1});
    }
    if (auto h = headline(s)) {
      auto ck = std::make_tuple(ds, scheme, params);
      auto [it, fresh] = cells.try_emplace(ck);
      if (fresh) cell_order.push_back(ck);
      it->second.emplace_back(method, *h);
    }
  }

  for (const auto& ck : cell_order) {
    const auto& entries = cells[ck];
    std::optional<double> ens;
    std::vector<double> comps;
    for (const auto& [m, v] : entries) {
      if (m == "ensemble") ens = v;
      else comps.push_back(v);
    }
    if (!ens || comps.empty()) continue;
    std::sort(comps.begin(), comps.end());
    const std::size_t c = comps.size();
    const double median = c % 2 ? comps[c / 2] : 0.5 * (comps[c / 2 - 1] + comps[c / 2]);
    const auto rank = 1 + std::count_if(comps.begin(), comps.end(), [&](double v) { return v > *ens; });
    const auto& [ds, scheme, params] = ck;
    rep.ensemble.rows.push_back({ds, scheme, params, cell(ens), cell(median), cell(comps.front()),
                                 cell(comps.back()), std::to_string(c), std::to_string(rank)});
  }
  return rep;
}

void write_report(const Report& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create " + out_dir.string() + ": " + ec.message());
  report.by_scheme.write(out_dir / "report_by_scheme.csv");
  report.quality.write(out_dir / "report_quality.csv");
  report.ensemble.write(out_dir / "report_ensemble.csv");
  report.accuracy.write(out_dir / "report_accuracy.csv");
}

}  // namespace sres
