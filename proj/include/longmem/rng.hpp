#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "longmem/types.hpp"

namespace longmem {

/// Deterministic stream of uniforms and standard normals.
///
/// xoshiro256++ seeded through splitmix64 from (seed, stream). Streams with
/// different ids are statistically independent, so replicate r of a Monte
/// Carlo run simply uses spec.next_stream(r). Gaussians come from Box-Muller
/// on the raw uniform bits; no libstdc++ distribution is involved, so the
/// byte-level output is stable across standard library versions.
class RandomStream {
 public:
  explicit RandomStream(RngSpec spec);

  std::uint64_t next_u64();
  /// Uniform on [0,1).
  double next_unit();
  /// Standard normal draw.
  double next_gaussian();
  void fill_gaussian(std::span<double> out);

 private:
  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// `count` standard normal draws for the given spec. Same spec, same bytes.
std::vector<double> gaussian_stream(RngSpec spec, std::size_t count);

}  // namespace longmem
