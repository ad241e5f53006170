#include "sres/detection.hpp"

#include <fstream>
#include <sstream>

#include "sres/errors.hpp"

namespace sres {

std::string DetectionResult::scope_string() const {
  return scope ? "sample:" + scope->describe() : std::string("whole");
}

void write_detection_csv(const DetectionResult& result, const std::filesystem::path& path,
                         const std::vector<std::string>& extra_comments) {
  std::ostringstream out;
  out << "# method=" << result.method << '\n';
  out << "# params=";
  bool first = true;
  for (const auto& [key, value] : result.params) {
    out << (first ? "" : ";") << key << '=' << value;
    first = false;
  }
  out << '\n';
  out << "# dataset=" << result.dataset_id << '\n';
  out << "# scope=" << result.scope_string() << '\n';
  out << "# seed=" << result.seed << '\n';
  for (const auto& w : result.warnings) out << "# warning=" << w << '\n';
  for (const auto& c : extra_comments) out << "# " << c << '\n';
  out << "record_index,flag\n";
  for (std::size_t i = 0; i < result.record_flags.size(); ++i)
    out << result.record_index(i) << ',' << (result.record_flags[i] ? 1 : 0) << '\n';

  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + path.string() + "'");
  file << out.str();
}

}  // namespace sres
