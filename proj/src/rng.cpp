#include "fidnp/rng.hpp"

#include <algorithm>
#include <bit>

#include <boost/math/special_functions/erf.hpp>

namespace fidnp {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;
constexpr std::uint64_t kForkSalt = 0x8CB92BA72F3D8DD7ULL;

}  // namespace

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index) {
  std::uint64_t key = splitmix64_mix(seed) ^ splitmix64_mix(stream_index ^ kStreamSalt);
  for (auto& word : state_) {
    key += kGolden;
    word = splitmix64_mix(key);
  }
  // xoshiro must not start from the all-zero state.
  if (std::all_of(state_.begin(), state_.end(), [](std::uint64_t w) { return w == 0; })) {
    state_[0] = kGolden;
  }
}

std::uint64_t RngStream::next_u64() noexcept {
  const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = std::rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() noexcept {
  const double u = static_cast<double>(next_u64() >> 11) * 0x1p-53;
  return std::clamp(u, kUnitEpsilon, 1.0 - kUnitEpsilon);
}

double RngStream::normal() noexcept {
  // Phi^{-1}(p) = -sqrt(2) * erfc^{-1}(2p)
  return -1.4142135623730951 * boost::math::erfc_inv(2.0 * uniform());
}

RngStream fork_stream(const RngStream& parent, std::uint64_t index) {
  const std::uint64_t child_seed =
      splitmix64_mix(parent.seed() ^ splitmix64_mix(parent.stream_index() ^ kForkSalt));
  return RngStream(child_seed, index);
}


}  // namespace fidnp
