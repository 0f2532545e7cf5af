#pragma once

#include <span>
#include <string>
#include <vector>

#include "longmem/types.hpp"

namespace longmem {

/// Log-log regression artifact shared by the scaling estimators. slope is
/// the unweighted least-squares fit of log(statistics) on log(scales) and is
/// recomputable from the stored points.
struct ScalingReport {
  std::string method;
  std::vector<double> scales;
  std::vector<double> statistics;
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  std::vector<double> residuals;
  double hurst = 0.0;
  int skipped_blocks = 0;
};

/// Least-squares fit of log(y) on log(x); needs at least two points.
ScalingReport fit_loglog(std::span<const double> scales, std::span<const double> statistics);

/// Rescaled range over the first `window` values: range of mean-adjusted
/// partial sums (the empty prefix counts as 0) divided by the population
/// standard deviation.
double rs_statistic(std::span<const double> values, std::size_t window);

/// R/S statistics averaged over blocks for each window size; the log-log
/// slope estimates H. Zero-variance blocks are skipped and counted.
ScalingReport rs_hurst(const StationarySeries& series, std::span<const std::size_t> windows,
                       bool disjoint_blocks = true);

/// Variance of block means against block size; slope ~ 2H-2, so
/// H = 1 + slope/2.
ScalingReport aggregated_variance_hurst(const StationarySeries& series,
                                        std::span<const std::size_t> block_sizes);

/// Biased (1/n) sample autocovariance at lags 0..maxlag.
std::vector<double> sample_autocovariance(const StationarySeries& series, std::size_t maxlag);

/// Log periodogram against log frequency over the lowest cutoff_fraction of
/// the Fourier frequencies; slope ~ 1-2H, so H = (1-slope)/2.
ScalingReport periodogram_hurst(const StationarySeries& series, double cutoff_fraction);

/// Dyadic window schedule w, 2w, ... capped at max_window.
std::vector<std::size_t> dyadic_windows(std::size_t from, std::size_t max_window);

/// Default schedules used by the CLI and the acceptance runs.
std::vector<std::size_t> default_rs_windows(std::size_t n);
std::vector<std::size_t> default_aggvar_blocks(std::size_t n);
inline constexpr double kDefaultPeriodogramCutoff = 0.1;

}  // namespace longmem
