#pragma once

#include <span>
#include <vector>

#include "longmem/rng.hpp"
#include "longmem/types.hpp"

namespace longmem {

/// Multiplier law for the binary cascade: the left-child share is either the
/// fixed value m0, or m0 / 1-m0 with equal probability (a two-point law with
/// mean 1/2).
struct MultiplierLaw {
  double m0 = 0.5;
  bool random = false;

  /// E[M^q] under this law.
  double moment(double q) const;
};

/// Multifractal activity time: mass over 2^depth dyadic cells and the
/// cumulative time change theta at the dyadic points (theta(0)=0, theta(1)=1,
/// nondecreasing).
struct ActivityTime {
  int depth = 0;
  std::vector<double> mass;
  std::vector<double> cumulative;

  double theta(std::size_t dyadic_index) const { return cumulative[dyadic_index]; }
};

/// Recursive binary multiplicative cascade. Conservative splits hand the
/// parent mass to the children exactly (shares M and 1-M); non-conservative
/// splits draw each child share independently and the final measure is
/// renormalized to total mass 1.
ActivityTime generate_cascade(int depth, const MultiplierLaw& law, RngSpec rng,
                              bool conservative = true);

/// theta as a path on its own dyadic grid (dt = 2^-depth).
ProcessPath activity_path(const ActivityTime& theta);

/// B_H(theta(t)) on the dyadic grid of theta; the fBm path is evaluated at
/// the changed times by linear interpolation. The path must resolve [0,1]
/// with at least 4 increments per cascade cell.
ProcessPath subordinate(const ProcessPath& path, const ActivityTime& theta);

/// Estimated scaling function: tau(q) per requested moment, with the
/// log-intercepts of the partition-function fits.
struct ScalingFunction {
  std::vector<double> qs;
  std::vector<double> tau;
  std::vector<double> intercepts;
  /// Per-q log partition sums used in the fits: rows follow qs, columns the
  /// requested depths.
  std::vector<int> depths;
  std::vector<std::vector<double>> log_partition;
};

/// Partition-function estimate of tau(q): for each depth j the statistic is
/// sum_i |increment over dyadic cell i|^q, and tau(q) is the slope of its log
/// against log(2^-j). A monofractal path with exponent H gives qH-1; the
/// uniform time change gives q-1.
ScalingFunction partition_function(const ProcessPath& path, std::span<const double> qs,
                                   std::span<const int> depths);

/// Exact q-th moment of a single depth-level cell mass:
/// E[mass^q] = (E[M^q])^depth for independent multipliers.
double cascade_moment_exact(int depth, double q, const MultiplierLaw& law);

inline constexpr double kMassConservationTol = 1e-12;

}  // namespace longmem
