#include "sres/samplers.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sres/errors.hpp"
#include "sres/rng.hpp"

namespace sres {

std::string SchemeSpec::name() const {
  switch (kind) {
    case SchemeKind::random: return "random";
    case SchemeKind::block: return "block";
    case SchemeKind::partition: return "partition";
  }
  return "unknown";
}

std::string SchemeSpec::params() const {
  switch (kind) {
    case SchemeKind::random: return std::to_string(size);
    case SchemeKind::block: return std::to_string(n_blocks) + "-" + std::to_string(block_size);
    case SchemeKind::partition: return std::to_string(k);
  }
  return {};
}

std::string SchemeSpec::describe() const {
  switch (kind) {
    case SchemeKind::random: return "random(" + std::to_string(size) + ")";
    case SchemeKind::block:
      return "block(" + std::to_string(n_blocks) + "," + std::to_string(block_size) + ")";
    case SchemeKind::partition: return "partition(" + std::to_string(k) + ")";
  }
  return {};
}

std::size_t SchemeSpec::samples_per_replicate() const {
  return kind == SchemeKind::partition ? k : 1;
}

std::size_t SchemeSpec::sample_size(std::size_t n) const {
  switch (kind) {
    case SchemeKind::random: return size;
    case SchemeKind::block: return n_blocks * block_size;
    case SchemeKind::partition: return k == 0 ? 0 : (n + k - 1) / k;
  }
  return 0;
}

void SchemeSpec::check_feasible(std::size_t n) const {
  switch (kind) {
    case SchemeKind::random:
      if (size < 1 || size > n)
        throw RangeError("random sample size " + std::to_string(size) + " not in [1, " +
                         std::to_string(n) + "]");
      return;
    case SchemeKind::block:
      if (block_size < 1 || n_blocks < 1)
        throw RangeError("block sampling needs n_blocks >= 1 and block_size >= 1");
      if (n_blocks * block_size > n)
        throw RangeError("blocks " + std::to_string(n_blocks) + "x" + std::to_string(block_size) +
                         " exceed dataset size " + std::to_string(n));
      return;
    case SchemeKind::partition:
      if (k < 1 || k > n)
        throw RangeError("partition count " + std::to_string(k) + " not in [1, " +
                         std::to_string(n) + "]");
      return;
  }
}

std::string SampleIndex::describe() const {
  std::string s = scheme.describe();
  if (scheme.kind == SchemeKind::partition) s += "#" + std::to_string(part_id);
  return s;
}

void SampleIndex::validate() const {
  std::vector<bool> seen(parent_n, false);
  for (auto i : indices) {
    if (i >= parent_n) throw RangeError("sample index " + std::to_string(i) + " >= parent size");
    if (seen[i]) throw RangeError("sample index " + std::to_string(i) + " repeated");
    seen[i] = true;
  }
}

namespace {

// First `m` entries of a uniformly random permutation of [0, n).
std::vector<std::size_t> partial_shuffle(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(m);
  return pool;
}

}  // namespace

SampleIndex random_sample(std::size_t n, std::size_t size, std::uint64_t seed) {
  const auto scheme = SchemeSpec::random(size);
  scheme.check_feasible(n);
  Rng rng = make_rng(seed);
  auto idx = partial_shuffle(n, size, rng);
  std::sort(idx.begin(), idx.end());
  return {std::move(idx), n, scheme, 0, seed};
}

SampleIndex block_sample(std::size_t n, std::size_t n_blocks, std::size_t block_size,
                         std::uint64_t seed) {
  const auto scheme = SchemeSpec::block(n_blocks, block_size);
  scheme.check_feasible(n);
  // Gap method: collapse every block to one slot, choose slots, expand again.
  const std::size_t slots = n - n_blocks * (block_size - 1);
  Rng rng = make_rng(seed);
  auto chosen = partial_shuffle(slots, n_blocks, rng);
  std::sort(chosen.begin(), chosen.end());
  std::vector<std::size_t> idx;
  idx.reserve(n_blocks * block_size);
  for (std::size_t j = 0; j < n_blocks; ++j) {
    const std::size_t start = chosen[j] + j * (block_size - 1);
    for (std::size_t t = 0; t < block_size; ++t) idx.push_back(start + t);
  }
  return {std::move(idx), n, scheme, 0, seed};
}

std::vector<SampleIndex> partition(std::size_t n, std::size_t k, std::uint64_t seed) {
  const auto scheme = SchemeSpec::partition(k);
  scheme.check_feasible(n);
  Rng rng = make_rng(seed);
  const auto perm = partial_shuffle(n, n, rng);
  std::vector<SampleIndex> parts;
  parts.reserve(k);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t offset = 0;
  for (std::size_t p = 0; p < k; ++p) {
    const std::size_t len = base + (p < extra ? 1 : 0);
    std::vector<std::size_t> idx(perm.begin() + static_cast<std::ptrdiff_t>(offset),
                                 perm.begin() + static_cast<std::ptrdiff_t>(offset + len));
    std::sort(idx.begin(), idx.end());
    parts.push_back({std::move(idx), n, scheme, p, seed});
    offset += len;
  }
  return parts;
}

std::vector<SampleIndex> draw(std::size_t n, const SchemeSpec& scheme, std::uint64_t seed) {
  switch (scheme.kind) {
    case SchemeKind::random: return {random_sample(n, scheme.size, seed)};
    case SchemeKind::block: return {block_sample(n, scheme.n_blocks, scheme.block_size, seed)};
    case SchemeKind::partition: return partition(n, scheme.k, seed);
  }
  throw ConfigError("unknown sampling scheme");
}

namespace {

std::optional<std::size_t> to_size(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

std::optional<SchemeSpec> parse_scheme(std::string_view text) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open)
    return std::nullopt;
  const auto head = text.substr(0, open);
  const auto args = text.substr(open + 1, close - open - 1);
  if (head == "random" || head == "partition") {
    const auto v = to_size(args);
    if (!v) return std::nullopt;
    return head == "random" ? SchemeSpec::random(*v) : SchemeSpec::partition(*v);
  }
  if (head == "block") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    const auto b = to_size(args.substr(0, comma));
    const auto s = to_size(args.substr(comma + 1));
    if (!b || !s) return std::nullopt;
    return SchemeSpec::block(*b, *s);
  }
  return std::nullopt;
}

void write_sample_csv(const SampleIndex& sample, const std::filesystem::path& path,
                      const std::vector<std::string>& extra_comments) {
  std::ostringstream out;
  out << "# scheme=" << sample.scheme.describe() << " part=" << sample.part_id
      << " seed=" << sample.seed << " parent_n=" << sample.parent_n << '\n';
  for (const auto& c : extra_comments) out << "# " << c << '\n';
  out << "row_index\n";
  for (auto i : sample.indices) out << i << '\n';
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + path.string() + "'");
  file << out.str();
}

SampleIndex read_sample_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  SampleIndex sample;
  std::string line;
  bool header_seen = false;
  bool meta_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream meta(line.substr(1));
      std::string token;
      while (meta >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const auto key = token.substr(0, eq);
        const auto value = token.substr(eq + 1);
        if (key == "scheme") {
          if (auto s = parse_scheme(value)) sample.scheme = *s;
        } else if (key == "part") {
          sample.part_id = to_size(value).value_or(0);
        } else if (key == "seed") {
          sample.seed = std::stoull(value);
        } else if (key == "parent_n") {
          sample.parent_n = to_size(value).value_or(0);
          meta_seen = true;
        }
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      if (line == "row_index") continue;
    }
    const auto v = to_size(line);
    if (!v) throw ParseError("'" + path.string() + "': bad row index '" + line + "'");
    sample.indices.push_back(*v);
  }
  if (!meta_seen) {
    sample.parent_n = sample.indices.empty()
                          ? 0
                          : *std::max_element(sample.indices.begin(), sample.indices.end()) + 1;
  }
  sample.validate();
  return sample;
}

}  // namespace sres
