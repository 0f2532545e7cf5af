#include "longmem/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft_util.hpp"
#include "longmem/kernels.hpp"

namespace longmem {

ScalingReport fit_loglog(std::span<const double> scales, std::span<const double> statistics) {
  if (scales.size() != statistics.size())
    throw ValidationError("scales and statistics must have equal length");
  const std::size_t n = scales.size();
  if (n < 2) throw ValidationError("log-log fit needs at least two points");

  ScalingReport report;
  report.scales.assign(scales.begin(), scales.end());
  report.statistics.assign(statistics.begin(), statistics.end());

  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(scales[i] > 0.0) || !(statistics[i] > 0.0))
      throw ValidationError("log-log fit needs positive scales and statistics");
    x[i] = std::log(scales[i]);
    y[i] = std::log(statistics[i]);
  }
  const double xbar = kernels::sum(x.data(), n) / static_cast<double>(n);
  const double ybar = kernels::sum(y.data(), n) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  if (sxx == 0.0) throw ValidationError("log-log fit needs at least two distinct scales");
  report.slope = sxy / sxx;
  report.intercept = ybar - report.slope * xbar;
  report.residuals.resize(n);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    report.residuals[i] = y[i] - (report.intercept + report.slope * x[i]);
    rss += report.residuals[i] * report.residuals[i];
  }
  report.stderr_slope = n > 2 ? std::sqrt(rss / static_cast<double>(n - 2) / sxx) : 0.0;
  return report;
}

double rs_statistic(std::span<const double> values, std::size_t window) {
  if (window < 2) throw ValidationError("R/S window must be >= 2");
  if (window > values.size()) throw ValidationError("R/S window exceeds series length");

  const double mean = kernels::sum(values.data(), window) / static_cast<double>(window);
  double w = 0.0, lo = 0.0, hi = 0.0, ssq = 0.0;
  for (std::size_t i = 0; i < window; ++i) {
    const double d = values[i] - mean;
    w += d;
    lo = std::min(lo, w);
    hi = std::max(hi, w);
    ssq += d * d;
  }
  const double sd = std::sqrt(ssq / static_cast<double>(window));
  if (sd == 0.0) throw ValidationError("zero variance: all values in the R/S window are equal");
  return (hi - lo) / sd;
}

ScalingReport rs_hurst(const StationarySeries& series, std::span<const std::size_t> windows,
                       bool disjoint_blocks) {
  if (windows.empty()) throw ValidationError("R/S needs a window schedule");
  for (std::size_t i = 1; i < windows.size(); ++i)
    if (windows[i] <= windows[i - 1])
      throw ValidationError("window schedule must be strictly increasing");
  if (windows.back() > series.size())
    throw ValidationError("largest window exceeds series length");

  const auto& x = series.values;
  std::vector<double> scales, stats;
  int skipped = 0;
  for (std::size_t w : windows) {
    const std::size_t step = disjoint_blocks ? w : std::max<std::size_t>(1, w / 2);
    double acc = 0.0;
    std::size_t blocks = 0;
    for (std::size_t start = 0; start + w <= x.size(); start += step) {
      try {
        acc += rs_statistic(std::span(x).subspan(start, w), w);
        ++blocks;
      } catch (const ValidationError&) {
        ++skipped;
      }
    }
    if (blocks == 0) continue;
    scales.push_back(static_cast<double>(w));
    stats.push_back(acc / static_cast<double>(blocks));
  }
  if (scales.size() < 3)
    throw ValidationError("fewer than 3 usable scales for the R/S fit");
  ScalingReport report = fit_loglog(scales, stats);
  report.method = "rs";
  report.hurst = report.slope;
  report.skipped_blocks = skipped;
  return report;
}

ScalingReport aggregated_variance_hurst(const StationarySeries& series,
                                        std::span<const std::size_t> block_sizes) {
  if (series.values.empty()) throw ValidationError("aggregated variance needs a series");
  if (block_sizes.empty()) throw ValidationError("aggregated variance needs block sizes");
  for (std::size_t i = 1; i < block_sizes.size(); ++i)
    if (block_sizes[i] <= block_sizes[i - 1])
      throw ValidationError("block sizes must be strictly increasing");
  if (block_sizes.back() > series.size() / 4)
    throw ValidationError("largest block exceeds length/4");

  const auto& x = series.values;
  std::vector<double> scales, stats;
  for (std::size_t m : block_sizes) {
    const std::size_t blocks = x.size() / m;
    if (blocks < 2) continue;
    std::vector<double> means(blocks);
    for (std::size_t b = 0; b < blocks; ++b)
      means[b] = kernels::sum(x.data() + b * m, m) / static_cast<double>(m);
    const double mbar = kernels::sum(means.data(), blocks) / static_cast<double>(blocks);
    double var = 0.0;
    for (double v : means) var += (v - mbar) * (v - mbar);
    var /= static_cast<double>(blocks);
    if (var <= 0.0) continue;
    scales.push_back(static_cast<double>(m));
    stats.push_back(var);
  }
  if (scales.size() < 3)
    throw ValidationError("fewer than 3 usable scales for the aggregated-variance fit");
  ScalingReport report = fit_loglog(scales, stats);
  report.method = "aggvar";
  report.hurst = 1.0 + report.slope / 2.0;
  return report;
}

std::vector<double> sample_autocovariance(const StationarySeries& series, std::size_t maxlag) {
  const auto& x = series.values;
  if (maxlag >= x.size())
    throw ValidationError("autocovariance maxlag must be below the series length");
  const std::size_t n = x.size();
  const double mean = kernels::sum(x.data(), n) / static_cast<double>(n);
  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = x[i] - mean;
  std::vector<double> out(maxlag + 1);
  for (std::size_t k = 0; k <= maxlag; ++k)
    out[k] = kernels::dot(centered.data(), centered.data() + k, n - k) / static_cast<double>(n);
  return out;
}

ScalingReport periodogram_hurst(const StationarySeries& series, double cutoff_fraction) {
  const std::size_t n = series.size();
  if (n < 128) throw ValidationError("periodogram estimator needs at least 128 samples");
  if (!(cutoff_fraction > 0.0 && cutoff_fraction <= 0.5))
    throw ValidationError("cutoff fraction must lie in (0, 0.5]");
  const auto m = static_cast<std::size_t>(cutoff_fraction * static_cast<double>(n / 2));
  if (m < 5) throw ValidationError("cutoff keeps fewer than 5 Fourier frequencies");

  const std::vector<double> power = detail::power_spectrum(series.values);
  std::vector<double> freqs(m), ordinates(m);
  const double norm = 2.0 * std::numbers::pi * static_cast<double>(n);
  for (std::size_t j = 1; j <= m; ++j) {
    freqs[j - 1] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    ordinates[j - 1] = power[j] / norm;
  }
  ScalingReport report = fit_loglog(freqs, ordinates);
  report.method = "periodogram";
  report.hurst = (1.0 - report.slope) / 2.0;
  return report;
}

std::vector<std::size_t> dyadic_windows(std::size_t from, std::size_t max_window) {
  std::vector<std::size_t> out;
  for (std::size_t w = from; w <= max_window; w *= 2) out.push_back(w);
  return out;
}

std::vector<std::size_t> default_rs_windows(std::size_t n) {
  return dyadic_windows(16, std::max<std::size_t>(64, n / 8));
}

std::vector<std::size_t> default_aggvar_blocks(std::size_t n) {
  return dyadic_windows(4, std::max<std::size_t>(16, n / 128));
}

}  // namespace longmem
