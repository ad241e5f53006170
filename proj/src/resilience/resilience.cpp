#include "sres/resilience.hpp"

#include "sres/errors.hpp"

#include <cmath>

namespace sres {

OverlapCounts overlap_counts(const Flags& sample_flags, const Flags& whole_flags_restricted) {
  if (sample_flags.size() != whole_flags_restricted.size())
    throw DimensionError("resilience: flag vectors differ in length (" +
                         std::to_string(sample_flags.size()) + " vs " +
                         std::to_string(whole_flags_restricted.size()) + ")");
  OverlapCounts c;
  for (std::size_t i = 0; i < sample_flags.size(); ++i) {
    const bool s = sample_flags[i];
    const bool w = whole_flags_restricted[i];
    if (s && w) {
      c.both += 1.0;
    } else if (s) {
      c.sample_only += 1.0;
    } else if (w) {
      c.whole_only += 1.0;
    } else {
      c.neither += 1.0;
    }
  }
  return c;
}

double resilience_exact(const Flags& sample_flags, const Flags& whole_flags_restricted) {
  return resilience_from_expectations(overlap_counts(sample_flags, whole_flags_restricted));
}

OverlapCounts expected_overlaps(double sample_size, const RatePanel& whole,
                                const RatePanel& sample) {
  whole.validate();
  sample.validate();
  if (!(sample_size >= 0.0)) throw DomainError("sample size must be non-negative");
  if (std::abs(whole.gamma - sample.gamma) > 1e-12)
    throw DomainError("whole and sample panels must share the outlier rate");
  const double g = whole.gamma;
  const double a = whole.alpha;
  const double as = sample.alpha;
  const double b = whole.beta;
  const double bs = sample.beta;
  OverlapCounts c;
  c.both = sample_size * (g * a * as + (1 - g) * (1 - b) * (1 - bs));
  c.neither = sample_size * ((1 - g) * b * bs + g * (1 - a) * (1 - as));
  c.sample_only = sample_size * (g * (1 - a) * as + (1 - g) * b * (1 - bs));
  c.whole_only = sample_size * (g * a * (1 - as) + (1 - g) * (1 - b) * bs);
  return c;
}

double resilience_from_expectations(const OverlapCounts& counts) {
  if (counts.both < 0 || counts.sample_only < 0 || counts.whole_only < 0 || counts.neither < 0)
    throw DomainError("overlap counts must be non-negative");
  const double den = 2.0 * counts.both + counts.sample_only + counts.whole_only;
  if (den == 0.0) return 1.0;
  return 2.0 * counts.both / den;
}

Flags restrict_flags(const Flags& whole, const SampleIndex& sample) {
  if (sample.parent_n != whole.size())
    throw DimensionError("sample parent size differs from flag vector length");
  Flags out(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) out[i] = whole[sample.indices[i]];
  return out;
}

const char* to_string(Mode mode) { return mode == Mode::exact ? "exact" : "blind"; }

std::optional<Mode> parse_mode(std::string_view name) {
  if (name == "exact") return Mode::exact;
  if (name == "blind") return Mode::blind;
  return std::nullopt;
}

}  // namespace sres
