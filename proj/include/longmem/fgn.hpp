#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "longmem/rng.hpp"
#include "longmem/types.hpp"

namespace longmem {

/// E[B_H(s) B_H(t)] under the unit-variance normalization E[B_H(1)^2] = 1:
/// (s^2H + t^2H - |t-s|^2H) / 2.
double fbm_covariance(const HurstIndex& hurst, double s, double t);

/// Autocovariance of unit-variance fractional Gaussian noise,
/// gamma(k) = ((k+1)^2H - 2 k^2H + (k-1)^2H) / 2.
double fgn_autocovariance(const HurstIndex& hurst, std::uint64_t lag);

namespace detail {
// Extended-precision cores. gamma(k) decays like k^(2H-2) while the power
// terms grow like k^2H, so the plain second difference loses all significant
// digits at large lags; the core switches to an even binomial series there.
long double fbm_covariance_ld(double hurst, long double s, long double t);
long double fgn_autocovariance_ld(double hurst, std::uint64_t lag);
}  // namespace detail

/// gamma(0..maxlag) for one Hurst index.
struct FgnCovariance {
  HurstIndex hurst;
  std::vector<double> values;

  static FgnCovariance up_to(const HurstIndex& hurst, std::size_t maxlag);
};

/// Hard cap on the dense-factorization generator; O(n^3) beyond this is not
/// worth it when the circulant path is exact anyway.
inline constexpr std::size_t kExactGeneratorCap = 2048;

/// Samples fGn by Cholesky-factoring the dense Toeplitz covariance and
/// applying the factor to a gaussian_stream draw. Distributionally exact;
/// used as the oracle for the fast generator.
StationarySeries generate_fgn_exact(const HurstIndex& hurst, std::size_t n, RngSpec rng,
                                    std::size_t cap = kExactGeneratorCap);

/// Circulant-embedding sampler: the covariance sequence is embedded in a
/// circulant of length 2(n-1) whose eigenvalues come from one real DFT; each
/// sample is one inverse DFT of a weighted complex Gaussian spectrum.
/// Construction is O(n log n) once; sampling is O(n log n) per draw.
class FgnFastSampler {
 public:
  FgnFastSampler(const HurstIndex& hurst, std::size_t n);
  /// Embed an arbitrary autocovariance sequence gamma(0..n-1). Throws
  /// NumericError if the circulant eigenvalues dip below
  /// -1e-8 * max(eigenvalue); tiny negative rounding residue is zeroed.
  explicit FgnFastSampler(std::vector<double> autocov, SeriesMeta meta = {});
  ~FgnFastSampler();
  FgnFastSampler(FgnFastSampler&&) noexcept;
  FgnFastSampler& operator=(FgnFastSampler&&) noexcept;

  std::size_t size() const;
  std::size_t fft_length() const;
  StationarySeries sample(RngSpec rng);

 private:
  struct Impl;
  static std::unique_ptr<Impl> build_embedding(std::vector<double> autocov, SeriesMeta meta);
  std::unique_ptr<Impl> impl_;
};

StationarySeries generate_fgn_fast(const HurstIndex& hurst, std::size_t n, RngSpec rng);

/// Partial sums scaled by dt^H: the path value at time i*dt has variance
/// (i*dt)^2H when the input is unit-variance fGn with that H. The applied
/// factor is recorded on the result.
ProcessPath cumulate(const StationarySeries& noise);
ProcessPath cumulate(const StationarySeries& noise, const HurstIndex& hurst);

/// Deterministic step function: value levels[j] on [breakpoints[j], breakpoints[j+1]).
struct StepFunction {
  std::vector<double> breakpoints;
  std::vector<double> levels;

  static StepFunction make(std::vector<double> breakpoints, std::vector<double> levels);
  static StepFunction indicator(double from, double to);
  /// 0 outside the support.
  double operator()(double s) const;
};

/// Integral of a step function against a path: sum of level * path increment
/// over each piece. Breakpoints must sit on the path grid.
double step_integral(const StepFunction& g, const ProcessPath& path);

}  // namespace longmem
