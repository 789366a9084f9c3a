#pragma once

// Seedable, forkable random streams.
//
// A stream is identified by (seed, stream_index). Its draws come from a
// xoshiro256** engine whose 256-bit state is filled by SplitMix64 from a key
// that mixes both identifiers. Forking never touches the parent's state, so
// a child stream depends only on the parent's identity and the fork index.
// This makes replicate-level parallelism schedule independent: replicate j
// always consumes fork(parent, j), whichever thread runs it.

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace fidnp {

inline constexpr std::string_view kGeneratorName = "xoshiro256** / splitmix64-keyed streams";
inline constexpr std::string_view kGeneratorVersion = "fidnp-rng 1";

/// Smallest uniform value handed out; draws are clamped into [eps, 1 - eps].
inline constexpr double kUnitEpsilon = 0x1p-53;

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next_u64(); }
  std::uint64_t next_u64() noexcept;

  /// Uniform(0,1) with 53-bit resolution, clamped into [2^-53, 1 - 2^-53].
  double uniform() noexcept;

  /// Standard normal by inversion of one uniform draw.
  double normal() noexcept;

  /// Streams compare equal when they would produce the same future draws.
  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::array<std::uint64_t, 4> state_;
};

/// Child stream derived from the parent's identity and `index`.
/// Does not depend on how many draws the parent has consumed.
RngStream fork_stream(const RngStream& parent, std::uint64_t index);

}  // namespace fidnp
