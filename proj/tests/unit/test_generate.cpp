#include <doctest.h>

#include <cmath>
#include <vector>

#include "longmem/analyze.hpp"
#include "longmem/estimate.hpp"
#include "longmem/fgn.hpp"
#include "longmem/kernels.hpp"
#include "longmem/rng.hpp"
#include "oracles/moving_average_oracle.hpp"

using namespace longmem;

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kGammaOne075 = 0.41421356237309515;  // 2^(2H-1)-1 at H=0.75
constexpr double kGammaOne09 = 0.74110112659224813;   // 2^(2H-1)-1 at H=0.9
}  // namespace

TEST_CASE("fbm_covariance closed-form values") {
  CHECK(fbm_covariance(HurstIndex(0.5), 1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fbm_covariance(HurstIndex(0.3), 0.0, 3.0) == 0.0);
  CHECK(fbm_covariance(HurstIndex(0.75), 1.0, 2.0) == doctest::Approx(kSqrt2).epsilon(1e-12));
  CHECK(fbm_covariance(HurstIndex(0.75), 2.0, 1.0) == doctest::Approx(kSqrt2).epsilon(1e-12));
  CHECK(fbm_covariance(HurstIndex(0.6), 2.0, 2.0) ==
        doctest::Approx(std::pow(2.0, 1.2)).epsilon(1e-12));
  CHECK_THROWS_AS(fbm_covariance(HurstIndex(0.6), -1.0, 2.0), ValidationError);
}

TEST_CASE("covariance self-similarity and stationary increments") {
  const double hs[] = {0.3, 0.5, 0.75, 0.9};
  const double times[] = {0.25, 1.0, 2.5, 7.0};
  const double scales[] = {0.5, 2.0, 3.7};
  for (double h : hs) {
    const HurstIndex H(h);
    for (double a : scales)
      for (double s : times)
        for (double t : times) {
          const double lhs = fbm_covariance(H, a * s, a * t);
          const double rhs = std::pow(a, 2.0 * h) * fbm_covariance(H, s, t);
          CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
        }
    for (double s : times)
      for (double t : times) {
        const double var_inc = fbm_covariance(H, t, t) - 2.0 * fbm_covariance(H, s, t) +
                               fbm_covariance(H, s, s);
        const double want = std::pow(std::abs(t - s), 2.0 * h);
        CHECK(std::abs(var_inc - want) <= 1e-10 * std::max(1.0, want));
      }
  }
}

TEST_CASE("fgn_autocovariance values and the covariance second difference") {
  CHECK(fgn_autocovariance(HurstIndex(0.5), 3) == 0.0);
  CHECK(fgn_autocovariance(HurstIndex(0.31), 0) == 1.0);
  CHECK(fgn_autocovariance(HurstIndex(0.75), 1) == doctest::Approx(kGammaOne075).epsilon(1e-13));
  CHECK(fgn_autocovariance(HurstIndex(0.9), 1) == doctest::Approx(kGammaOne09).epsilon(1e-13));

  for (double h : {0.55, 0.7, 0.9}) {
    for (std::uint64_t k : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{5},
                            std::uint64_t{37}, std::uint64_t{1000}}) {
      // increments of consecutive unit steps, through the covariance route
      const auto kk = static_cast<long double>(k);
      const long double via_cov = detail::fbm_covariance_ld(h, kk + 1.0L, 1.0L) -
                                  detail::fbm_covariance_ld(h, kk, 1.0L) -
                                  detail::fbm_covariance_ld(h, kk + 1.0L, 0.0L) +
                                  detail::fbm_covariance_ld(h, kk, 0.0L);
      const double direct = fgn_autocovariance(HurstIndex(h), k);
      CHECK(std::abs(direct - static_cast<double>(via_cov)) <=
            1e-10 * std::abs(direct));
    }
  }
}

TEST_CASE("autocovariance decay matches H(2H-1) k^(2H-2)") {
  for (double h : {0.6, 0.75, 0.9}) {
    const double limit = h * (2.0 * h - 1.0);
    const double scaled = fgn_autocovariance(HurstIndex(h), 1000000) *
                          std::pow(1e6, 2.0 - 2.0 * h);
    CHECK(std::abs(scaled / limit - 1.0) < 0.01);
  }
}

TEST_CASE("partial covariance sums diverge like K^(2H-1)") {
  for (double h : {0.6, 0.75, 0.9}) {
    const HurstIndex H(h);
    // telescoping closed form of sum_{k<=K} gamma(k)
    auto closed = [&](double K) {
      return 0.5 * (std::pow(K + 1.0, 2.0 * h) - std::pow(K, 2.0 * h) + 1.0);
    };
    double prev_sum = 0.0;
    std::uint64_t prev_K = 0;
    for (std::uint64_t K : {std::uint64_t{1000}, std::uint64_t{10000}, std::uint64_t{100000}}) {
      long double acc = 0.0L;
      for (std::uint64_t k = 0; k <= K; ++k)
        acc += detail::fgn_autocovariance_ld(h, k);
      const auto sum = static_cast<double>(acc);
      CHECK(std::abs(sum - closed(static_cast<double>(K))) <= 1e-10 * sum);
      if (prev_K != 0) {
        const double ratio = sum / prev_sum;
        const double want = closed(static_cast<double>(K)) / closed(static_cast<double>(prev_K));
        CHECK(ratio == doctest::Approx(want).epsilon(1e-9));
        CHECK(ratio == doctest::Approx(std::pow(10.0, 2.0 * h - 1.0)).epsilon(0.05));
      }
      prev_sum = sum;
      prev_K = K;
    }
  }
}

TEST_CASE("FgnCovariance is a unit-variance nonnegative-definite sequence") {
  for (double h : {0.55, 0.75, 0.95}) {
    const FgnCovariance cov = FgnCovariance::up_to(HurstIndex(h), 63);
    CHECK(cov.values[0] == 1.0);
    // Cholesky succeeding is the positive-definiteness check
    CHECK_NOTHROW(generate_fgn_exact(HurstIndex(h), 64, {5, 0}));
    if (h > 0.5)
      for (std::size_t k = 1; k < cov.values.size(); ++k) CHECK(cov.values[k] > 0.0);
  }
}

TEST_CASE("exact generator is the identity map at H=1/2") {
  const RngSpec spec{777, 3};
  const StationarySeries series = generate_fgn_exact(HurstIndex(0.5), 4, spec);
  const auto raw = gaussian_stream(spec, 4);
  REQUIRE(series.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(series.values[i] == raw[i]);
}

TEST_CASE("exact generator respects its size cap") {
  CHECK_THROWS_WITH_AS(generate_fgn_exact(HurstIndex(0.7), 4096, {1, 0}),
                       doctest::Contains("oracle size exceeded"), ValidationError);
  CHECK_THROWS_AS(generate_fgn_exact(HurstIndex(0.7), 64, {1, 0}, 32), ValidationError);
  CHECK_NOTHROW(generate_fgn_exact(HurstIndex(0.7), 32, {1, 0}, 32));
}

TEST_CASE("exact generator pair correlation at H=0.9") {
  const HurstIndex H(0.9);
  const std::size_t reps = 100000;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    const StationarySeries s = generate_fgn_exact(H, 2, RngSpec{31, r});
    sxy += s.values[0] * s.values[1];
    sxx += s.values[0] * s.values[0];
    syy += s.values[1] * s.values[1];
  }
  const double corr = sxy / std::sqrt(sxx * syy);
  CHECK(std::abs(corr - kGammaOne09) < 0.01);
}

TEST_CASE("exact generator pooled lag-1 autocovariance at H=0.75") {
  const HurstIndex H(0.75);
  long double acc = 0.0L;
  std::size_t pairs = 0;
  for (std::size_t seed = 0; seed < 200; ++seed) {
    const StationarySeries s = generate_fgn_exact(H, 512, RngSpec{1001, seed});
    acc += kernels::dot(s.values.data(), s.values.data() + 1, 511);
    pairs += 511;
  }
  CHECK(std::abs(static_cast<double>(acc) / pairs - kGammaOne075) < 0.02);
}

TEST_CASE("fast generator determinism and white-noise case") {
  const StationarySeries a = generate_fgn_fast(HurstIndex(0.5), 1024, {9, 4});
  const StationarySeries b = generate_fgn_fast(HurstIndex(0.5), 1024, {9, 4});
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.values[i] == b.values[i]);

  const auto acov = sample_autocovariance(a, 5);
  for (std::size_t k = 1; k <= 5; ++k) CHECK(std::abs(acov[k]) < 0.1);
}

TEST_CASE("fast generator pooled lag-1 autocovariance at H=0.75") {
  FgnFastSampler sampler(HurstIndex(0.75), 2048);
  long double acc = 0.0L;
  std::size_t pairs = 0;
  for (std::size_t seed = 0; seed < 100; ++seed) {
    const StationarySeries s = sampler.sample(RngSpec{2002, seed});
    acc += kernels::dot(s.values.data(), s.values.data() + 1, 2047);
    pairs += 2047;
  }
  CHECK(std::abs(static_cast<double>(acc) / pairs - kGammaOne075) < 0.02);
}

TEST_CASE("fast and exact generators draw from the same law") {
  // Pooled-by-lag empirical covariance against the exact sequence.
  const HurstIndex H(0.8);
  const std::size_t n = 256, reps = 600;
  const FgnCovariance cov = FgnCovariance::up_to(H, n - 1);

  // Lags up to n/2 keep at least n/2 products per replicate; beyond that the
  // pooled estimator is too noisy at this replicate count (the acceptance
  // suite runs the full protocol).
  FgnFastSampler sampler(H, n);
  std::vector<long double> pooled_fast(n, 0.0L), pooled_exact(n, 0.0L);
  for (std::size_t r = 0; r < reps; ++r) {
    const StationarySeries f = sampler.sample(RngSpec{42, r});
    const StationarySeries e = generate_fgn_exact(H, n, RngSpec{43, r});
    for (std::size_t k = 0; k <= n / 2; k += 5) {
      pooled_fast[k] += kernels::dot(f.values.data(), f.values.data() + k, n - k) /
                        static_cast<double>(n - k);
      pooled_exact[k] += kernels::dot(e.values.data(), e.values.data() + k, n - k) /
                         static_cast<double>(n - k);
    }
  }
  for (std::size_t k = 0; k <= n / 2; k += 5) {
    CHECK(std::abs(static_cast<double>(pooled_fast[k] / reps) - cov.values[k]) < 0.05);
    CHECK(std::abs(static_cast<double>(pooled_exact[k] / reps) - cov.values[k]) < 0.05);
  }
}

TEST_CASE("embedding failure is an error, not a silent clip") {
  // gamma = (1, 0.9, 0) embeds into a circulant with a -0.8 eigenvalue.
  CHECK_THROWS_WITH_AS(FgnFastSampler({1.0, 0.9, 0.0}).sample({1, 0}),
                       doctest::Contains("embedding not nonnegative"), NumericError);
}

TEST_CASE("custom autocovariance sequences sample with the right law") {
  // geometric decay embeds cleanly; check the empirical covariance
  const std::vector<double> gamma{1.0, 0.5, 0.25, 0.125};
  FgnFastSampler sampler(gamma);
  const std::size_t reps = 4000, n = 4;
  std::vector<long double> pooled(n, 0.0L);
  for (std::size_t r = 0; r < reps; ++r) {
    const StationarySeries s = sampler.sample({616, r});
    for (std::size_t k = 0; k < n; ++k)
      pooled[k] += kernels::dot(s.values.data(), s.values.data() + k, n - k) /
                   static_cast<double>(n - k);
  }
  for (std::size_t k = 0; k < n; ++k)
    CHECK(std::abs(static_cast<double>(pooled[k] / reps) - gamma[k]) < 0.05);
}

TEST_CASE("cumulate basics") {
  const StationarySeries one = make_series({2.5}, 1.0, {"fgn", 0.7, std::nullopt});
  const ProcessPath p = cumulate(one);
  REQUIRE(p.values.size() == 2);
  CHECK(p.values[0] == 0.0);
  CHECK(p.values[1] == 2.5);

  const StationarySeries zeros = make_series(std::vector<double>(16, 0.0), 0.5,
                                             {"fgn", 0.7, std::nullopt});
  for (double v : cumulate(zeros).values) CHECK(v == 0.0);

  const StationarySeries quarter = make_series({1.0, 1.0}, 0.25, {"fgn", 0.5, std::nullopt});
  const ProcessPath q = cumulate(quarter);
  CHECK(q.scale_applied == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(q.values[2] == doctest::Approx(1.0).epsilon(1e-15));

  const StationarySeries bare = make_series({1.0}, 1.0);
  CHECK_THROWS_AS(cumulate(bare), ValidationError);
  CHECK_NOTHROW(cumulate(bare, HurstIndex(0.6)));
}

TEST_CASE("cumulated fGn has variance n^2H at time n") {
  // algebraic identity via the covariance row sums
  const double h = 0.7;
  const std::size_t n = 1000;
  const FgnCovariance cov = FgnCovariance::up_to(HurstIndex(h), n - 1);
  const double sn2 = exact_sn2(cov.values, n);
  CHECK(sn2 == doctest::Approx(15848.931924611136).epsilon(1e-10));
  CHECK(sn2 == doctest::Approx(std::pow(1000.0, 1.4)).epsilon(1e-10));
}

TEST_CASE("step functions validate and evaluate") {
  CHECK_THROWS_AS(StepFunction::make({1.0, 1.0}, {2.0}), ValidationError);
  CHECK_THROWS_AS(StepFunction::make({0.0}, {}), ValidationError);
  const StepFunction g = StepFunction::make({0.0, 1.0, 2.0}, {1.0, -1.0});
  CHECK(g(0.5) == 1.0);
  CHECK(g(1.5) == -1.0);
  CHECK(g(2.5) == 0.0);
  CHECK(g(-0.5) == 0.0);
}

TEST_CASE("step_integral telescopes and validates breakpoints") {
  std::vector<double> vals{0.0, 0.5, 1.25, 0.75, 2.0};
  const ProcessPath path = make_path(make_grid(5, 0.5), vals);

  CHECK(step_integral(StepFunction::indicator(0.0, 1.5), path) == doctest::Approx(0.75));
  CHECK(step_integral(StepFunction::make({0.0, 0.5, 1.0}, {0.0, 0.0}), path) == 0.0);

  CHECK_THROWS_WITH_AS(step_integral(StepFunction::indicator(0.0, 0.7), path),
                       doctest::Contains("0.69999999999999996"), ValidationError);
}

TEST_CASE("step_integral variance against the covariance bilinear form") {
  // g = 1 on [0,1) minus 1 on [1,2): the integral is X1 - X2, whose variance
  // is 2 - 2 gamma(1).
  const HurstIndex H(0.75);
  const double want = 2.0 - 2.0 * kGammaOne075;
  CHECK(want == doctest::Approx(1.1715728752538097).epsilon(1e-12));

  const StepFunction g = StepFunction::make({0.0, 1.0, 2.0}, {1.0, -1.0});
  long double acc = 0.0L;
  const std::size_t reps = 100000;
  for (std::size_t r = 0; r < reps; ++r) {
    const StationarySeries noise = generate_fgn_exact(H, 2, RngSpec{71, r});
    const double v = step_integral(g, cumulate(noise));
    acc += static_cast<long double>(v) * v;
  }
  CHECK(std::abs(static_cast<double>(acc) / reps - want) < 0.02);
}

TEST_CASE("moving-average discretization reproduces the covariance ratio") {
  // E[B(1)B(2)] / E[B(1)^2] = sqrt(2) at H = 0.75; the oracle normalizes by
  // its own variance because its kernel constant is arbitrary.
  longmem::testing::MovingAverageOracle oracle(0.75, 2.0, 10.0, 2048);
  std::vector<double> k1(oracle.centers.size()), k2(oracle.centers.size());
  for (std::size_t i = 0; i < oracle.centers.size(); ++i) {
    k1[i] = oracle.kernel(1.0, oracle.centers[i]);
    k2[i] = oracle.kernel(2.0, oracle.centers[i]);
  }
  const std::size_t reps = 100000;
  long double s11 = 0.0L, s12 = 0.0L;
  std::vector<double> z(oracle.centers.size());
  for (std::size_t r = 0; r < reps; ++r) {
    RandomStream stream(RngSpec{314, r});
    stream.fill_gaussian(z);
    const double b1 = kernels::dot(k1.data(), z.data(), z.size());
    const double b2 = kernels::dot(k2.data(), z.data(), z.size());
    s11 += static_cast<long double>(b1) * b1;
    s12 += static_cast<long double>(b1) * b2;
  }
  const double ratio = static_cast<double>(s12 / s11);
  CHECK(std::abs(ratio - kSqrt2) < 0.04);
}
