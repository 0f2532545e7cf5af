#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "longmem/fgn.hpp"
#include "longmem/rng.hpp"
#include "longmem/types.hpp"

namespace longmem {

/// Kernel exponent index for chaos order k targeting self-similarity H:
/// H0 = 1 - (1-H)/k, which lands in (1 - 1/(2k), 1). Requires 1/2 < H < 1.
HurstIndex h0_from(const HurstIndex& hurst, const HermiteOrder& order);

/// Probabilists' Hermite polynomial h_k(x); h1=x, h2=x^2-1, h3=x^3-3x.
double hermite_polynomial(const HermiteOrder& order, double x);

/// Parameters of a Hermite process: target index H in (1/2,1), chaos order k,
/// and the derived kernel index H0.
struct HermiteSpec {
  HurstIndex target;
  HermiteOrder order;
  HurstIndex h0;

  static HermiteSpec make(const HurstIndex& hurst, const HermiteOrder& order);
};

/// Controls the singular quadrature in hermite_kernel: panels halve toward
/// the singular point down to the epsilon offset, with a fixed-order
/// Gauss-Legendre rule on each panel.
struct QuadratureSpec {
  int gauss_points = 8;
  int max_panels = 64;
  double epsilon = 1e-12;
};

/// The time-representation kernel value: integral over s in [0,t] of
/// prod_j (s - x_j)_+^(H0 - 3/2), skipping an epsilon neighbourhood of the
/// singular endpoint. The exponent lies in (-1,-1/2), so the integral is
/// finite and the epsilon-truncated value converges as epsilon -> 0.
double hermite_kernel(double t, std::span<const double> xs, const HermiteSpec& spec,
                      const QuadratureSpec& quad = {});

/// Discretization lattice for the chaos-sum oracle: cells on
/// [-left_extent * t_max, t_max], independent Gaussian increments with
/// variance equal to the cell width.
struct LatticeSpec {
  double left_extent = 10.0;
  std::size_t cells = 512;
};

inline constexpr std::size_t kHermiteOracleMaxPoints = 64;
inline constexpr int kHermiteOracleMaxOrder = 2;

/// Brute-force oracle for the Hermite process: the multiple Wiener integral
/// is replaced by the off-diagonal sum of kernel values times products of
/// lattice noise increments (diagonal tuples skipped exactly). Small k and
/// coarse grids only; cost is O(cells^k) per path.
class HermiteOracle {
 public:
  HermiteOracle(const HermiteSpec& spec, const TimeGrid& grid, const LatticeSpec& lattice,
                QuadratureSpec quad = QuadratureSpec{});
  ~HermiteOracle();
  HermiteOracle(HermiteOracle&&) noexcept;
  HermiteOracle& operator=(HermiteOracle&&) noexcept;

  const TimeGrid& grid() const;
  double cell_width() const;
  std::span<const double> cell_centers() const;

  /// Unnormalized path from one replicate of standard-normal lattice noise.
  ProcessPath sample_raw(RngSpec rng) const;
  /// Same, from caller-supplied standard normals (one per cell).
  ProcessPath sample_raw_from(std::span<const double> noise) const;

  /// Exact variance of the unnormalized value at one grid index.
  double exact_variance(std::size_t time_index) const;

  /// Estimates the standard deviation at the grid point nearest
  /// reference_time over `replicates` streams and stores it as the
  /// normalization; returns the estimate.
  double calibrate(std::size_t replicates, RngSpec rng, double reference_time = 1.0);
  double normalization() const;
  /// sample_raw scaled to unit variance at the calibration point.
  ProcessPath sample(RngSpec rng) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Scalable Hermite generator: h_k applied to a long fGn sequence with index
/// H0, partial sums taken every `inner_factor` steps, normalized by the exact
/// standard deviation of the full sum (k! * sum of rho^k over all index
/// pairs). The path lives on [0,1] and has unit variance at t=1.
class HermiteFastSampler {
 public:
  HermiteFastSampler(const HermiteSpec& spec, std::size_t n_out, std::size_t inner_factor = 256);

  std::size_t output_points() const { return n_out_ + 1; }
  double normalization() const { return norm_; }
  ProcessPath sample(RngSpec rng);

 private:
  HermiteSpec spec_;
  std::size_t n_out_;
  std::size_t inner_;
  double norm_;
  FgnFastSampler fgn_;
  std::vector<double> transformed_;
};

ProcessPath generate_hermite_fast(const HermiteSpec& spec, std::size_t n_out,
                                  std::size_t inner_factor, RngSpec rng);

/// Both sides of the nested-integral identity: n repeated integrals of a step
/// function from 0 to t (left), and the single integral of
/// (t-s)^(n-1)/(n-1)! times the function (right). The right side is evaluated
/// in closed form; the left numerically.
std::pair<double, double> iterated_integral_check(const StepFunction& g, double t, int n);

}  // namespace longmem
