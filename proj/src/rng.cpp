#include "longmem/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace longmem {

namespace {

// splitmix64 finalizer; also used to stretch the (seed, stream) pair into
// the 256-bit xoshiro state.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t v) {
  std::uint64_t s = v;
  return splitmix64(s);
}

}  // namespace

RandomStream::RandomStream(RngSpec spec) {
  // Hash-combine seed and stream so that neighbouring specs land in
  // unrelated regions of the state space.
  std::uint64_t h = mix(spec.seed) ^ (mix(spec.stream + 0x632BE59BD9B4E019ULL) +
                                      0x9E3779B97F4A7C15ULL + (mix(spec.seed) << 6));
  s_[0] = splitmix64(h);
  s_[1] = splitmix64(h);
  s_[2] = splitmix64(h);
  s_[3] = splitmix64(h);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t RandomStream::next_u64() {
  // xoshiro256++
  const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

double RandomStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // Box-Muller; u1 is shifted into (0,1] so the log is always finite.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(angle);
  has_cached_ = true;
  return r * std::cos(angle);
}

void RandomStream::fill_gaussian(std::span<double> out) {
  for (double& v : out) v = next_gaussian();
}

std::vector<double> gaussian_stream(RngSpec spec, std::size_t count) {
  RandomStream stream(spec);
  std::vector<double> out(count);
  stream.fill_gaussian(out);
  return out;
}

}  // namespace longmem
