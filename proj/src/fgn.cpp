#include "longmem/fgn.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

#include "fft_util.hpp"
#include "longmem/kernels.hpp"

namespace longmem {

namespace detail {

long double fbm_covariance_ld(double hurst, long double s, long double t) {
  const long double a = 2.0L * static_cast<long double>(hurst);
  const long double d = s > t ? s - t : t - s;
  return 0.5L * (powl(s, a) + powl(t, a) - powl(d, a));
}

long double fgn_autocovariance_ld(double hurst, std::uint64_t lag) {
  const long double a = 2.0L * static_cast<long double>(hurst);
  if (lag == 0) return 1.0L;
  if (lag == 1) return 0.5L * (powl(2.0L, a) - 2.0L);
  // gamma(k) = k^a * sum_{m>=1} C(a,2m) k^(-2m); the even binomial series of
  // (1+x)^a + (1-x)^a - 2 at x = 1/k. Converges factorially for k >= 2 and
  // avoids the cancellation that kills the direct second difference.
  const long double x2 = 1.0L / (static_cast<long double>(lag) * static_cast<long double>(lag));
  long double coef = 1.0L;  // C(a, 2m), built incrementally
  long double xp = 1.0L;
  long double acc = 0.0L;
  for (int m = 1; m <= 64; ++m) {
    coef *= (a - (2 * m - 2)) / static_cast<long double>(2 * m - 1);
    coef *= (a - (2 * m - 1)) / static_cast<long double>(2 * m);
    xp *= x2;
    const long double term = coef * xp;
    acc += term;
    if (fabsl(term) < 1e-30L + 1e-24L * fabsl(acc)) break;
  }
  return powl(static_cast<long double>(lag), a) * acc;
}

}  // namespace detail

double fbm_covariance(const HurstIndex& hurst, double s, double t) {
  if (s < 0.0 || t < 0.0)
    throw ValidationError("fbm covariance is defined for nonnegative times");
  return static_cast<double>(detail::fbm_covariance_ld(hurst.value(), s, t));
}

double fgn_autocovariance(const HurstIndex& hurst, std::uint64_t lag) {
  return static_cast<double>(detail::fgn_autocovariance_ld(hurst.value(), lag));
}

FgnCovariance FgnCovariance::up_to(const HurstIndex& hurst, std::size_t maxlag) {
  FgnCovariance cov{hurst, {}};
  cov.values.resize(maxlag + 1);
  for (std::size_t k = 0; k <= maxlag; ++k)
    cov.values[k] = fgn_autocovariance(hurst, k);
  return cov;
}

StationarySeries generate_fgn_exact(const HurstIndex& hurst, std::size_t n, RngSpec rng,
                                    std::size_t cap) {
  if (n < 1) throw ValidationError("fgn length must be >= 1");
  if (n > cap)
    throw ValidationError("oracle size exceeded: n=" + std::to_string(n) + " > cap=" +
                          std::to_string(cap));
  const FgnCovariance cov = FgnCovariance::up_to(hurst, n - 1);

  // Lower Cholesky factor of the Toeplitz covariance, row-major.
  std::vector<double> L(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double* Li = L.data() + i * n;
    for (std::size_t j = 0; j <= i; ++j) {
      const double* Lj = L.data() + j * n;
      const double target = cov.values[i - j];
      const double off = kernels::dot(Li, Lj, j);
      if (j < i) {
        Li[j] = (target - off) / Lj[j];
      } else {
        const double d = target - off;
        if (!(d > 0.0))
          throw NumericError("covariance factorization failed: nonpositive pivot at row " +
                             std::to_string(i));
        Li[j] = std::sqrt(d);
      }
    }
  }

  std::vector<double> z = gaussian_stream(rng, n);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = kernels::dot(L.data() + i * n, z.data(), i + 1);
  return make_series(std::move(out), 1.0, SeriesMeta{"fgn", hurst.value(), std::nullopt});
}

struct FgnFastSampler::Impl {
  std::size_t n = 0;
  std::size_t m = 0;  // embedding length, 2(n-1)
  SeriesMeta meta;
  // Synthesis weights: sqrt(lambda_0/m), sqrt(lambda_j/(2m)) for 0<j<m/2,
  // sqrt(lambda_{m/2}/m).
  std::vector<double> weight;
  std::unique_ptr<detail::RealInverseFft> inverse;
  std::vector<std::complex<double>> spectrum;
  std::vector<double> scratch;
};

std::unique_ptr<FgnFastSampler::Impl> FgnFastSampler::build_embedding(std::vector<double> autocov,
                                                                      SeriesMeta meta) {
  auto impl = std::make_unique<FgnFastSampler::Impl>();
  impl->n = autocov.size();
  impl->meta = std::move(meta);
  if (impl->n < 2) return impl;  // single draw, no embedding needed

  const std::size_t m = 2 * (impl->n - 1);
  impl->m = m;
  std::vector<double> circ(m);
  for (std::size_t j = 0; j < m; ++j) circ[j] = autocov[std::min(j, m - j)];

  detail::RealForwardFft forward(m);
  std::vector<std::complex<double>> bins(m / 2 + 1);
  forward.transform(circ.data(), bins.data());

  double max_ev = 0.0;
  double min_ev = 0.0;
  std::vector<double> lambda(m / 2 + 1);
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    lambda[j] = bins[j].real();
    max_ev = std::max(max_ev, lambda[j]);
    min_ev = std::min(min_ev, lambda[j]);
  }
  if (min_ev < -1e-8 * max_ev)
    throw NumericError("circulant embedding not nonnegative: min eigenvalue " +
                       std::to_string(min_ev));

  impl->weight.resize(m / 2 + 1);
  const double dm = static_cast<double>(m);
  for (std::size_t j = 0; j <= m / 2; ++j) {
    const double ev = std::max(lambda[j], 0.0);
    const double denom = (j == 0 || j == m / 2) ? dm : 2.0 * dm;
    impl->weight[j] = std::sqrt(ev / denom);
  }
  impl->inverse = std::make_unique<detail::RealInverseFft>(m);
  impl->spectrum.resize(m / 2 + 1);
  impl->scratch.resize(m);
  return impl;
}

FgnFastSampler::FgnFastSampler(const HurstIndex& hurst, std::size_t n)
    : impl_(build_embedding(FgnCovariance::up_to(hurst, n == 0 ? 0 : n - 1).values,
                            SeriesMeta{"fgn", hurst.value(), std::nullopt})) {
  if (n < 1) throw ValidationError("fgn length must be >= 1");
}

FgnFastSampler::FgnFastSampler(std::vector<double> autocov, SeriesMeta meta)
    : impl_(build_embedding(std::move(autocov), std::move(meta))) {
  if (impl_->n < 1) throw ValidationError("autocovariance sequence must be nonempty");
}

FgnFastSampler::~FgnFastSampler() = default;
FgnFastSampler::FgnFastSampler(FgnFastSampler&&) noexcept = default;
FgnFastSampler& FgnFastSampler::operator=(FgnFastSampler&&) noexcept = default;

std::size_t FgnFastSampler::size() const { return impl_->n; }
std::size_t FgnFastSampler::fft_length() const { return impl_->m; }

StationarySeries FgnFastSampler::sample(RngSpec rng) {
  RandomStream stream(rng);
  if (impl_->n == 1)
    return make_series({stream.next_gaussian()}, 1.0, impl_->meta);

  const std::size_t half = impl_->m / 2;
  auto& spec = impl_->spectrum;
  spec[0] = {impl_->weight[0] * stream.next_gaussian(), 0.0};
  spec[half] = {impl_->weight[half] * stream.next_gaussian(), 0.0};
  for (std::size_t j = 1; j < half; ++j) {
    const double re = stream.next_gaussian();
    const double im = stream.next_gaussian();
    spec[j] = {impl_->weight[j] * re, impl_->weight[j] * im};
  }
  impl_->inverse->transform(spec.data(), impl_->scratch.data());
  std::vector<double> out(impl_->scratch.begin(), impl_->scratch.begin() + impl_->n);
  return make_series(std::move(out), 1.0, impl_->meta);
}

StationarySeries generate_fgn_fast(const HurstIndex& hurst, std::size_t n, RngSpec rng) {
  FgnFastSampler sampler(hurst, n);
  return sampler.sample(rng);
}

namespace {

ProcessPath cumulate_impl(const StationarySeries& noise, double hurst) {
  const double scale = std::pow(noise.dt, hurst);
  std::vector<double> values(noise.size() + 1);
  values[0] = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < noise.size(); ++i) {
    acc += noise.values[i];
    values[i + 1] = scale * acc;
  }
  SeriesMeta meta = noise.meta;
  if (meta.kind == "fgn") meta.kind = "fbm";
  meta.hurst = hurst;
  return make_path(make_grid(noise.size() + 1, noise.dt), std::move(values), std::move(meta),
                   scale);
}

}  // namespace

ProcessPath cumulate(const StationarySeries& noise) {
  if (noise.values.empty()) throw ValidationError("cannot cumulate an empty series");
  if (!noise.meta.hurst)
    throw ValidationError("cumulate needs a Hurst exponent; series metadata carries none");
  return cumulate_impl(noise, *noise.meta.hurst);
}

ProcessPath cumulate(const StationarySeries& noise, const HurstIndex& hurst) {
  if (noise.values.empty()) throw ValidationError("cannot cumulate an empty series");
  return cumulate_impl(noise, hurst.value());
}

StepFunction StepFunction::make(std::vector<double> breakpoints, std::vector<double> levels) {
  if (breakpoints.size() < 2 || levels.size() + 1 != breakpoints.size())
    throw ValidationError("step function needs m+1 breakpoints for m levels");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw ValidationError("step function breakpoints must be strictly increasing");
  for (double c : levels)
    if (!std::isfinite(c)) throw ValidationError("step function levels must be finite");
  return StepFunction{std::move(breakpoints), std::move(levels)};
}

StepFunction StepFunction::indicator(double from, double to) {
  return make({from, to}, {1.0});
}

double StepFunction::operator()(double s) const {
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), s);
  if (it == breakpoints.begin() || it == breakpoints.end()) return 0.0;
  return levels[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

namespace {

std::size_t grid_index_of(const TimeGrid& grid, double t) {
  const double pos = t / grid.dt;
  const auto idx = static_cast<long long>(std::llround(pos));
  const double tol = 1e-9 * std::max(1.0, std::abs(t) / grid.dt);
  if (idx < 0 || static_cast<std::size_t>(idx) >= grid.points ||
      std::abs(pos - static_cast<double>(idx)) > tol) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", t);
    throw ValidationError(std::string("breakpoint ") + buf + " does not lie on the path grid");
  }
  return static_cast<std::size_t>(idx);
}

}  // namespace

double step_integral(const StepFunction& g, const ProcessPath& path) {
  double acc = 0.0;
  std::size_t prev = grid_index_of(path.grid, g.breakpoints[0]);
  for (std::size_t j = 0; j < g.levels.size(); ++j) {
    const std::size_t next = grid_index_of(path.grid, g.breakpoints[j + 1]);
    acc += g.levels[j] * (path.values[next] - path.values[prev]);
    prev = next;
  }
  return acc;
}

}  // namespace longmem
