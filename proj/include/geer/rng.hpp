#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace geer {

/// The one generator type used for every random walk.
using RandomStream = std::mt19937_64;

namespace detail {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace detail

/// Hashes a tuple of indices into a single seed. Order matters.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (std::uint64_t p : parts) h = detail::mix64(h ^ detail::mix64(p));
  return h;
}

/// Which query endpoint a stream belongs to.
enum class Endpoint : std::uint64_t { source = 0, target = 1 };

/// Independent sub-stream for (query seed, endpoint, batch). Walks inside a
/// batch consume the stream sequentially, so results never depend on how many
/// threads run queries.
inline RandomStream substream(std::uint64_t query_seed, Endpoint endpoint, std::uint64_t batch) {
  return RandomStream{derive_seed({query_seed, static_cast<std::uint64_t>(endpoint), batch})};
}

/// Seed of the i-th query of a benchmark run.
constexpr std::uint64_t query_seed(std::uint64_t master_seed, std::uint64_t query_index) noexcept {
  return derive_seed({master_seed, 0x51ULL, query_index});
}

} // namespace geer
