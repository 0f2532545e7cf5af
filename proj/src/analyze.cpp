#include "longmem/analyze.hpp"

#include <algorithm>
#include <cmath>

#include "longmem/fgn.hpp"
#include "longmem/kernels.hpp"

namespace longmem {

double exact_sn2(std::span<const double> autocov, std::size_t n) {
  if (n < 1) throw ValidationError("partial-sum variance needs n >= 1");
  if (autocov.size() < n)
    throw ValidationError("autocovariance sequence must cover lags 0.." + std::to_string(n - 1));
  long double acc = static_cast<long double>(n) * autocov[0];
  for (std::size_t k = 1; k < n; ++k)
    acc += 2.0L * static_cast<long double>(n - k) * autocov[k];
  return static_cast<double>(acc);
}

PartialSumProcess normalized_partial_sums(const StationarySeries& series,
                                          std::span<const double> t_grid, double s_n) {
  if (!(s_n > 0.0)) throw ValidationError("normalization s_n must be positive");
  for (double t : t_grid)
    if (t < 0.0 || t > 1.0) throw ValidationError("partial-sum times must lie in [0,1]");

  const std::size_t n = series.size();
  std::vector<double> cumsum(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) cumsum[i + 1] = cumsum[i] + series.values[i];

  PartialSumProcess out;
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  out.s_n = s_n;
  out.n = n;
  out.values.resize(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const auto idx = static_cast<std::size_t>(std::floor(static_cast<double>(n) * t_grid[i]));
    out.values[i] = cumsum[std::min(idx, n)] / s_n;
  }
  return out;
}

SourceSpec SourceSpec::parse(const std::string& name, double hurst) {
  if (name == "iid") return {Kind::iid_gaussian, 0.5};
  if (name == "fgn") return {Kind::fgn, hurst};
  throw ValidationError("unknown source '" + name + "' (expected iid or fgn)");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ecdf_normal_distance(std::vector<double> values) {
  if (values.empty()) throw ValidationError("empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double phi = normal_cdf(values[i]);
    sup = std::max(sup, std::abs(static_cast<double>(i + 1) / n - phi));
    sup = std::max(sup, std::abs(static_cast<double>(i) / n - phi));
  }
  return sup;
}

std::vector<ConvergenceRow> convergence_experiment(const SourceSpec& source, int hermite_order,
                                                   std::span<const std::size_t> n_list,
                                                   std::size_t replicates, RngSpec rng) {
  if (replicates < 1000)
    throw ValidationError("distributional metrics need at least 1000 replicates");
  if (hermite_order < 1) throw ValidationError("Hermite order must be >= 1");
  if (n_list.empty()) throw ValidationError("empty n list");

  std::vector<ConvergenceRow> rows;
  rows.reserve(n_list.size());
  std::uint64_t stream_base = rng.stream;

  for (std::size_t n : n_list) {
    if (n < 1) throw ValidationError("series length must be >= 1");

    // Exact normalization whenever the summed series is the raw Gaussian one.
    double sn_exact = 0.0;
    const bool have_exact = hermite_order == 1;
    if (have_exact) {
      if (source.kind == SourceSpec::Kind::iid_gaussian) {
        sn_exact = std::sqrt(static_cast<double>(n));
      } else {
        const FgnCovariance cov = FgnCovariance::up_to(HurstIndex(source.hurst), n - 1);
        sn_exact = std::sqrt(exact_sn2(cov.values, n));
      }
    }

    std::unique_ptr<FgnFastSampler> sampler;
    if (source.kind == SourceSpec::Kind::fgn)
      sampler = std::make_unique<FgnFastSampler>(HurstIndex(source.hurst), n);

    std::vector<double> sums(replicates);
    std::vector<double> transformed(n);
    for (std::size_t r = 0; r < replicates; ++r) {
      const RngSpec spec = rng.with_stream(stream_base + r);
      if (source.kind == SourceSpec::Kind::iid_gaussian) {
        const std::vector<double> z = gaussian_stream(spec, n);
        kernels::hermite_apply(hermite_order, z.data(), transformed.data(), n);
      } else {
        const StationarySeries xi = sampler->sample(spec);
        kernels::hermite_apply(hermite_order, xi.values.data(), transformed.data(), n);
      }
      sums[r] = kernels::sum(transformed.data(), n);
    }
    stream_base += replicates;

    const double mean = kernels::sum(sums.data(), replicates) / static_cast<double>(replicates);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double s : sums) {
      const double d = s - mean;
      m2 += d * d;
      m3 += d * d * d;
      m4 += d * d * d * d;
    }
    const double dr = static_cast<double>(replicates);
    m2 /= dr;
    m3 /= dr;
    m4 /= dr;

    ConvergenceRow row;
    row.n = n;
    row.empirical_sn = !have_exact;
    row.s_n = have_exact ? sn_exact : std::sqrt(m2);
    row.skewness = m3 / std::pow(m2, 1.5);
    row.excess_kurtosis = m4 / (m2 * m2) - 3.0;

    std::vector<double> normalized(replicates);
    for (std::size_t r = 0; r < replicates; ++r) normalized[r] = sums[r] / row.s_n;
    double v = 0.0;
    for (double s : normalized) v += s * s;
    row.variance = v / dr - (mean / row.s_n) * (mean / row.s_n);
    row.ks_distance = ecdf_normal_distance(std::move(normalized));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace longmem
