#pragma once

#include <span>
#include <string>
#include <vector>

#include "longmem/rng.hpp"
#include "longmem/types.hpp"

namespace longmem {

/// Variance of the length-n partial sum given the autocovariance sequence:
/// n*gamma(0) + 2*sum_{k<n} (n-k)*gamma(k).
double exact_sn2(std::span<const double> autocov, std::size_t n);

/// Partial sums at indices floor(n*t), divided by the supplied normalization.
struct PartialSumProcess {
  std::vector<double> t_grid;
  std::vector<double> values;
  double s_n = 0.0;
  std::size_t n = 0;
};

PartialSumProcess normalized_partial_sums(const StationarySeries& series,
                                          std::span<const double> t_grid, double s_n);

/// What drives a convergence experiment.
struct SourceSpec {
  enum class Kind { iid_gaussian, fgn };
  Kind kind = Kind::iid_gaussian;
  double hurst = 0.5;  // used by fgn only

  static SourceSpec parse(const std::string& name, double hurst);
};

/// Distribution summary of the normalized sum at t=1 for one series length.
struct ConvergenceRow {
  std::size_t n = 0;
  double variance = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  /// sup |ECDF - Phi| over the replicate values.
  double ks_distance = 0.0;
  double s_n = 0.0;
  /// true when s_n had to be estimated from the replicates themselves
  /// (transformed series have no closed-form variance here).
  bool empirical_sn = false;
};

/// Simulates `replicates` normalized sums at t=1 for every n in n_list.
/// hermite_order 1 leaves the series untouched; order k applies h_k before
/// summing. Replicate r uses rng.next_stream(r), so worker count never
/// changes the result.
std::vector<ConvergenceRow> convergence_experiment(const SourceSpec& source, int hermite_order,
                                                   std::span<const std::size_t> n_list,
                                                   std::size_t replicates, RngSpec rng);

/// Standard normal CDF.
double normal_cdf(double x);

/// sup-distance between the empirical CDF of `values` and the standard
/// normal CDF.
double ecdf_normal_distance(std::vector<double> values);

}  // namespace longmem
