#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace sres {

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Stable 64-bit tag for a named substream (FNV-1a).
std::uint64_t stream_tag(std::string_view name);

/// Child seed for the substream identified by `path` under `master`.
/// Streams depend only on (master, path), never on call order.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

}  // namespace sres
