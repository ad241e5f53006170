#include "sres/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sres/errors.hpp"

namespace sres {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

}  // namespace

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw NumericalError("cannot format double");
  return std::string(buf, ptr);
}

void Dataset::validate() const {
  if (values.rows() < 1 || values.cols() < 1)
    throw DimensionError("dataset '" + id + "' must have at least one row and one column");
  if (column_names.size() != cols())
    throw DimensionError("dataset '" + id + "': column name count does not match V");
  if (!values.allFinite()) throw DomainError("dataset '" + id + "' contains non-finite cells");
  if (ground_truth && ground_truth->size() != rows())
    throw DimensionError("dataset '" + id + "': ground truth length differs from N");
}

Dataset Dataset::restrict(std::span<const std::size_t> indices) const {
  Dataset out;
  out.id = id;
  out.column_names = column_names;
  out.values.resize(static_cast<Eigen::Index>(indices.size()), values.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= rows()) throw RangeError("row index out of range in restrict");
    out.values.row(static_cast<Eigen::Index>(r)) = values.row(static_cast<Eigen::Index>(indices[r]));
  }
  if (ground_truth) {
    Flags gt(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) gt[r] = (*ground_truth)[indices[r]];
    out.ground_truth = std::move(gt);
  }
  return out;
}

Dataset load_csv(const std::filesystem::path& path, const std::optional<std::string>& gt_column) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");

  std::string line;
  std::vector<std::string> header;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    for (auto field : split_commas(line)) header.push_back(unquote(field));
    break;
  }
  if (header.empty()) throw ParseError("'" + path.string() + "' has no header row");

  std::optional<std::size_t> gt_pos;
  if (gt_column) {
    const auto it = std::find(header.begin(), header.end(), *gt_column);
    if (it == header.end())
      throw ConfigError("ground-truth column '" + *gt_column + "' not found in '" +
                        path.string() + "'");
    gt_pos = static_cast<std::size_t>(it - header.begin());
  }

  Dataset data;
  data.id = path.stem().string();
  for (std::size_t c = 0; c < header.size(); ++c)
    if (!gt_pos || c != *gt_pos) data.column_names.push_back(header[c]);
  const std::size_t v = data.column_names.size();
  if (v == 0) throw DimensionError("'" + path.string() + "' has no value columns");

  std::vector<double> cells;
  Flags gt;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto fields = split_commas(line);
    if (fields.size() != header.size())
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, found " +
                       std::to_string(fields.size()));
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (gt_pos && c == *gt_pos) {
        const auto f = fields[c];
        if (f == "1" || f == "1.0") {
          gt.push_back(true);
        } else if (f == "0" || f == "0.0") {
          gt.push_back(false);
        } else {
          throw ParseError("row " + std::to_string(n + 1) + ", column '" + header[c] +
                           "': ground truth must be 0 or 1, got '" + std::string(f) + "'");
        }
        continue;
      }
      const auto value = parse_double(fields[c]);
      if (!value)
        throw ParseError("row " + std::to_string(n + 1) + ", column '" + header[c] +
                         "': not a finite number: '" + std::string(fields[c]) + "'");
      cells.push_back(*value);
    }
    ++n;
  }
  if (n == 0) throw DimensionError("'" + path.string() + "' has no data rows");

  data.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(v));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < v; ++c)
      data.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cells[r * v + c];
  if (gt_pos) data.ground_truth = std::move(gt);
  data.validate();
  return data;
}

void write_csv(const Dataset& data, const std::filesystem::path& path,
               const std::vector<std::string>& comment_lines, const std::string& gt_column) {
  data.validate();
  std::ostringstream out;
  for (const auto& c : comment_lines) out << "# " << c << '\n';
  for (std::size_t c = 0; c < data.cols(); ++c) out << (c ? "," : "") << data.column_names[c];
  if (data.ground_truth) out << ',' << gt_column;
  out << '\n';
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t c = 0; c < data.cols(); ++c)
      out << (c ? "," : "")
          << format_double(data.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    if (data.ground_truth) out << ',' << ((*data.ground_truth)[r] ? '1' : '0');
    out << '\n';
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + path.string() + "'");
  file << out.str();
}

}  // namespace sres
