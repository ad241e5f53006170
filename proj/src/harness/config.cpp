#include "sres/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "sres/errors.hpp"
#include "sres/rng.hpp"

namespace sres {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_number(const std::string& key, const std::string& text) {
  auto v = parse_double(text);
  if (!v) throw ConfigError(key + ": not a number: '" + text + "'");
  return *v;
}

std::size_t to_count(const std::string& key, const std::string& text) {
  const double v = to_number(key, text);
  if (!(v >= 0) || v != std::floor(v) || v > 1e15)
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<DetectorConfig> method_list(const std::string& key, const std::string& text,
                                        const DetectorConfig& base) {
  if (text == "all") return all_detectors(base);
  std::vector<DetectorConfig> out;
  for (const auto& name : split_list(text)) {
    auto m = parse_method(name);
    if (!m) throw ConfigError(key + ": unknown method '" + name + "' (valid: " + method_names() + ")");
    DetectorConfig cfg = base;
    cfg.method = *m;
    for (const auto& prev : out)
      if (prev.method == cfg.method) throw ConfigError(key + ": duplicate method '" + name + "'");
    out.push_back(cfg);
  }
  if (out.empty()) throw ConfigError(key + ": empty method list");
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "name", "master_seed", "replicates", "mode", "threads", "output_dir",
      "dataset.source", "dataset.path", "dataset.gt_column", "dataset.id",
      "synth.n", "synth.distribution", "synth.rate",
      "detectors", "detector.top_fraction", "detector.k_clusters", "detector.min_pts",
      "detector.chi_sq_quantile", "detector.mad_multiplier", "detector.ridge_epsilon",
      "detector.aggregation",
      "ensemble.target", "ensemble.members",
      "em.max_iter", "em.tol", "em.smoothing", "em.stop_on_stable_labels",
      "scheme.random.sizes", "scheme.block.pairs", "scheme.partition.subsets"};
  return keys;
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::size_t SizeParam::resolve(std::size_t n) const {
  if (!percent) return static_cast<std::size_t>(value);
  const double c = std::round(value / 100.0 * static_cast<double>(n));
  return c < 1 ? 1 : static_cast<std::size_t>(c);
}

std::string SizeParam::text() const {
  return percent ? format_double(value) + "%" : format_double(value);
}

std::vector<SchemeSpec> SchemeGrid::expand(std::size_t n) const {
  std::vector<SchemeSpec> out;
  switch (kind) {
    case SchemeKind::random:
      for (const auto& s : sizes) out.push_back(SchemeSpec::random(s.resolve(n)));
      break;
    case SchemeKind::block:
      for (const auto& [b, l] : block_pairs) out.push_back(SchemeSpec::block(b, l));
      break;
    case SchemeKind::partition:
      for (auto k : subsets) out.push_back(SchemeSpec::partition(k));
      break;
  }
  return out;
}

std::size_t SchemeGrid::settings() const {
  switch (kind) {
    case SchemeKind::random: return sizes.size();
    case SchemeKind::block: return block_pairs.size();
    case SchemeKind::partition: return subsets.size();
  }
  return 0;
}

std::string ExperimentConfig::config_hash() const {
  std::string canonical;
  for (const auto& [k, v] : entries) canonical += k + "=" + v + "\n";
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(stream_tag(canonical)));
  return buf;
}

std::size_t ExperimentConfig::grid_size() const {
  std::size_t settings = 0;
  for (const auto& g : schemes) settings += g.settings();
  return datasets.size() * settings * target_count();
}

std::vector<std::string> ExperimentConfig::provenance() const {
  return {std::string("sres ") + kVersion, "experiment=" + name,
          "config_hash=" + config_hash(), "master_seed=" + std::to_string(master_seed),
          "replicates=" + std::to_string(replicates)};
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  auto& kv = cfg.entries;
  {
    std::stringstream ss(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
      std::string key = trim(std::string_view(line).substr(0, eq));
      std::string value = trim(std::string_view(line).substr(eq + 1));
      if (!known_keys().count(key))
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
      if (kv.count(key))
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      kv[key] = value;
    }
  }
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (auto v = get("name")) cfg.name = *v;
  if (auto v = get("master_seed")) cfg.master_seed = static_cast<std::uint64_t>(to_count("master_seed", *v));
  if (auto v = get("replicates")) cfg.replicates = to_count("replicates", *v);
  if (cfg.replicates < 1) throw ConfigError("replicates must be at least 1");
  if (auto v = get("threads")) cfg.threads = to_count("threads", *v);
  if (auto v = get("output_dir")) {
    std::filesystem::path p(*v);
    cfg.output_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  if (auto v = get("mode")) {
    if (*v == "exact") { cfg.exact = true; cfg.blind = false; }
    else if (*v == "blind") { cfg.exact = false; cfg.blind = true; }
    else if (*v == "both") { cfg.exact = true; cfg.blind = true; }
    else throw ConfigError("mode: expected exact, blind or both, got '" + *v + "'");
  }

  DetectorConfig base;
  if (auto v = get("detector.top_fraction")) base.top_fraction = to_number("detector.top_fraction", *v);
  if (auto v = get("detector.k_clusters")) base.k_clusters = to_count("detector.k_clusters", *v);
  if (auto v = get("detector.min_pts")) base.min_pts = to_count("detector.min_pts", *v);
  if (auto v = get("detector.chi_sq_quantile")) base.chi_sq_quantile = to_number("detector.chi_sq_quantile", *v);
  if (auto v = get("detector.mad_multiplier")) base.mad_multiplier = to_number("detector.mad_multiplier", *v);
  if (auto v = get("detector.ridge_epsilon")) base.ridge_epsilon = to_number("detector.ridge_epsilon", *v);
  if (auto v = get("detector.aggregation")) {
    auto a = parse_aggregation(*v);
    if (!a) throw ConfigError("detector.aggregation: expected any or majority, got '" + *v + "'");
    base.aggregation = *a;
  }
  try {
    base.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("detector parameters: ") + e.what());
  }

  auto det = get("detectors");
  if (!det) throw ConfigError("missing key 'detectors'");
  cfg.detectors = method_list("detectors", *det, base);
  if (auto v = get("ensemble.target")) cfg.ensemble_target = to_bool("ensemble.target", *v);
  cfg.ensemble_members = method_list("ensemble.members", get("ensemble.members") ? *get("ensemble.members") : "all", base);

  if (auto v = get("em.max_iter")) cfg.em.max_iter = to_count("em.max_iter", *v);
  if (auto v = get("em.tol")) cfg.em.tol = to_number("em.tol", *v);
  if (auto v = get("em.smoothing")) cfg.em.smoothing = to_number("em.smoothing", *v);
  if (auto v = get("em.stop_on_stable_labels")) cfg.em.stop_on_stable_labels = to_bool("em.stop_on_stable_labels", *v);
  if (cfg.em.max_iter < 1 || !(cfg.em.tol > 0) || !(cfg.em.smoothing >= 0))
    throw ConfigError("em: max_iter >= 1, tol > 0 and smoothing >= 0 required");

  const std::string source = get("dataset.source") ? *get("dataset.source") : "synth";
  if (source == "synth") {
    if (get("dataset.path")) throw ConfigError("dataset.path given with dataset.source = synth");
    std::vector<OutlierDistribution> dists{OutlierDistribution::dist1};
    std::vector<double> rate_list{0.05};
    std::vector<std::size_t> sizes{1000};
    if (auto v = get("synth.distribution")) {
      dists.clear();
      for (const auto& d : split_list(*v)) {
        auto p = parse_distribution(d);
        if (!p) throw ConfigError("synth.distribution: unknown '" + d + "' (dist1, dist2)");
        dists.push_back(*p);
      }
    }
    if (auto v = get("synth.rate")) {
      rate_list.clear();
      for (const auto& r : split_list(*v)) rate_list.push_back(to_number("synth.rate", r));
    }
    if (auto v = get("synth.n")) {
      sizes.clear();
      for (const auto& s : split_list(*v)) sizes.push_back(to_count("synth.n", s));
    }
    for (auto d : dists)
      for (double r : rate_list)
        for (auto n : sizes) {
          DatasetSource src;
          src.synthetic = true;
          src.synth.n = n;
          src.synth.outlier_distribution = d;
          src.synth.rate = r;
          try {
            src.synth.validate();
          } catch (const Error& e) {
            throw ConfigError(std::string("synth: ") + e.what());
          }
          src.id = synth_id(src.synth);
          src.synth.seed = derive_seed(cfg.master_seed, {stream_tag("dataset"), stream_tag(src.id)});
          cfg.datasets.push_back(std::move(src));
        }
  } else if (source == "csv") {
    auto paths = get("dataset.path");
    if (!paths) throw ConfigError("dataset.source = csv needs dataset.path");
    for (const auto& p : split_list(*paths)) {
      DatasetSource src;
      src.synthetic = false;
      std::filesystem::path path(p);
      src.path = path.is_relative() && !base_dir.empty() ? base_dir / path : path;
      if (auto g = get("dataset.gt_column")) src.gt_column = *g;
      src.id = path.stem().string();
      cfg.datasets.push_back(std::move(src));
    }
    if (auto id = get("dataset.id")) {
      if (cfg.datasets.size() != 1) throw ConfigError("dataset.id needs exactly one dataset.path");
      cfg.datasets.front().id = *id;
    }
    if (cfg.datasets.empty()) throw ConfigError("dataset.path is empty");
  } else {
    throw ConfigError("dataset.source: expected synth or csv, got '" + source + "'");
  }

  if (auto v = get("scheme.random.sizes")) {
    SchemeGrid g;
    g.kind = SchemeKind::random;
    for (auto s : split_list(*v)) {
      SizeParam sp;
      if (s.back() == '%') {
        sp.percent = true;
        s.pop_back();
        sp.value = to_number("scheme.random.sizes", trim(s));
        if (!(sp.value > 0 && sp.value <= 100)) throw ConfigError("scheme.random.sizes: percent must be in (0, 100]");
      } else {
        sp.value = static_cast<double>(to_count("scheme.random.sizes", s));
      }
      g.sizes.push_back(sp);
    }
    if (!g.sizes.empty()) cfg.schemes.push_back(std::move(g));
  }
  if (auto v = get("scheme.block.pairs")) {
    SchemeGrid g;
    g.kind = SchemeKind::block;
    for (const auto& s : split_list(*v)) {
      const auto sep = s.find_first_of("-x");
      if (sep == std::string::npos)
        throw ConfigError("scheme.block.pairs: expected n_blocks-block_size, got '" + s + "'");
      g.block_pairs.emplace_back(to_count("scheme.block.pairs", trim(s.substr(0, sep))),
                                 to_count("scheme.block.pairs", trim(s.substr(sep + 1))));
    }
    if (!g.block_pairs.empty()) cfg.schemes.push_back(std::move(g));
  }
  if (auto v = get("scheme.partition.subsets")) {
    SchemeGrid g;
    g.kind = SchemeKind::partition;
    for (const auto& s : split_list(*v)) g.subsets.push_back(to_count("scheme.partition.subsets", s));
    if (!g.subsets.empty()) cfg.schemes.push_back(std::move(g));
  }
  if (cfg.schemes.empty()) throw ConfigError("no sampling scheme configured (scheme.random.sizes, scheme.block.pairs, scheme.partition.subsets)");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

}  // namespace sres
