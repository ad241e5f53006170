#include "sres/table.hpp"

#include <fstream>
#include <sstream>

#include "sres/dataset.hpp"
#include "sres/errors.hpp"

namespace sres {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(current));
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  out.push_back(std::move(current));
  return out;
}

void append_row(std::ostringstream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ParseError("missing column '" + name + "'");
}

const std::string& CsvTable::at(std::size_t row, const std::string& name) const {
  return rows.at(row).at(column(name));
}

std::optional<double> CsvTable::number(std::size_t row, const std::string& name) const {
  const std::string& text = at(row, name);
  if (text.empty()) return std::nullopt;
  auto value = parse_double(text);
  if (!value)
    throw ParseError("row " + std::to_string(row + 1) + ", column '" + name +
                     "': not a number: '" + text + "'");
  return value;
}

std::string CsvTable::to_string() const {
  std::ostringstream os;
  for (const auto& c : comments) os << "# " << c << '\n';
  append_row(os, header);
  for (const auto& r : rows) append_row(os, r);
  return os.str();
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << to_string();
  if (!out) throw ConfigError("write failed: " + path.string());
}

CsvTable CsvTable::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string c = line.substr(1);
      if (!c.empty() && c[0] == ' ') c.erase(0, 1);
      table.comments.push_back(std::move(c));
      continue;
    }
    auto cells = split_csv_line(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size())
      throw ParseError(path.string() + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " fields, expected " +
                       std::to_string(table.header.size()));
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw ParseError(path.string() + ": no header");
  return table;
}

std::string cell(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string{};
}

}  // namespace sres
