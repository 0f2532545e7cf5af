#include "longmem/multifractal.hpp"

#include <algorithm>
#include <cmath>

#include "longmem/estimate.hpp"
#include "longmem/kernels.hpp"

namespace longmem {

double MultiplierLaw::moment(double q) const {
  if (!random) return std::pow(m0, q);
  return 0.5 * (std::pow(m0, q) + std::pow(1.0 - m0, q));
}

ActivityTime generate_cascade(int depth, const MultiplierLaw& law, RngSpec rng,
                              bool conservative) {
  if (depth < 1 || depth > 20)
    throw ValidationError("cascade depth must lie in 1..20; got " + std::to_string(depth));
  if (!(law.m0 > 0.0 && law.m0 < 1.0))
    throw ValidationError("cascade multiplier m0 must lie in (0,1); got " +
                          std::to_string(law.m0));

  RandomStream stream(rng);
  std::vector<double> mass{1.0};
  std::vector<double> next;
  for (int level = 0; level < depth; ++level) {
    next.resize(mass.size() * 2);
    for (std::size_t i = 0; i < mass.size(); ++i) {
      double left, right;
      if (conservative) {
        const double m = law.random ? (stream.next_unit() < 0.5 ? law.m0 : 1.0 - law.m0)
                                    : law.m0;
        left = m;
        right = 1.0 - m;
      } else {
        left = law.random ? (stream.next_unit() < 0.5 ? law.m0 : 1.0 - law.m0) : law.m0;
        right = law.random ? (stream.next_unit() < 0.5 ? law.m0 : 1.0 - law.m0) : 1.0 - law.m0;
      }
      next[2 * i] = mass[i] * left;
      next[2 * i + 1] = mass[i] * right;
    }
    mass.swap(next);
  }

  double total = kernels::sum(mass.data(), mass.size());
  if (!conservative) {
    for (double& m : mass) m /= total;
    total = 1.0;
  }

  ActivityTime out;
  out.depth = depth;
  out.mass = std::move(mass);
  out.cumulative.resize(out.mass.size() + 1);
  out.cumulative[0] = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < out.mass.size(); ++i) {
    acc += out.mass[i];
    out.cumulative[i + 1] = acc / total;  // theta(1) = 1 exactly
  }
  out.cumulative.back() = 1.0;
  return out;
}

ProcessPath activity_path(const ActivityTime& theta) {
  const std::size_t cells = theta.mass.size();
  return make_path(make_grid(cells + 1, 1.0 / static_cast<double>(cells)), theta.cumulative,
                   SeriesMeta{"cascade", std::nullopt, std::nullopt});
}

ProcessPath subordinate(const ProcessPath& path, const ActivityTime& theta) {
  const std::size_t cells = theta.mass.size();
  const std::size_t n_inc = path.increments();
  if (n_inc < 4 * cells)
    throw ValidationError("path resolution too low for subordination: need at least " +
                          std::to_string(4 * cells) + " increments, have " +
                          std::to_string(n_inc));
  const double span = path.grid.max_time();
  if (!(span >= 1.0 - 1e-9))
    throw ValidationError("subordination needs a path covering [0,1]");

  const double dt = path.grid.dt;
  std::vector<double> values(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    const double target = theta.cumulative[i];  // in [0,1]
    double pos = target / dt;
    auto lo = static_cast<std::size_t>(pos);
    if (lo >= n_inc) {
      lo = n_inc - 1;
      pos = static_cast<double>(n_inc);
    }
    const double frac = pos - static_cast<double>(lo);
    values[i] = path.values[lo] + frac * (path.values[lo + 1] - path.values[lo]);
  }
  values[0] = 0.0;

  SeriesMeta meta = path.meta;
  meta.kind = "subordinated";
  return make_path(make_grid(cells + 1, 1.0 / static_cast<double>(cells)), std::move(values),
                   std::move(meta));
}

ScalingFunction partition_function(const ProcessPath& path, std::span<const double> qs,
                                   std::span<const int> depths) {
  const std::size_t n = path.increments();
  if (n == 0 || (n & (n - 1)) != 0)
    throw ValidationError("partition function needs a power-of-two number of increments; got " +
                          std::to_string(n));
  if (qs.empty() || depths.empty())
    throw ValidationError("partition function needs moments and depths");
  for (double q : qs)
    if (std::abs(q) > 10.0) throw ValidationError("moment order must satisfy |q| <= 10");
  int max_depth = 0;
  for (int j : depths) {
    if (j < 1) throw ValidationError("depths must be >= 1");
    max_depth = std::max(max_depth, j);
  }
  if (n < (std::size_t{1} << max_depth))
    throw ValidationError("series shorter than 2^max_depth increments");

  ScalingFunction out;
  out.qs.assign(qs.begin(), qs.end());
  out.depths.assign(depths.begin(), depths.end());
  out.log_partition.resize(qs.size());

  std::vector<double> scales(depths.size()), stats(depths.size());
  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    const double q = qs[qi];
    for (std::size_t di = 0; di < depths.size(); ++di) {
      const int j = depths[di];
      const std::size_t cells = std::size_t{1} << j;
      const std::size_t step = n / cells;
      double sum = 0.0;
      for (std::size_t i = 0; i < cells; ++i) {
        const double inc =
            std::abs(path.values[(i + 1) * step] - path.values[i * step]);
        if (inc == 0.0 && q < 0.0)
          throw ValidationError("degenerate increment for negative moment at depth " +
                                std::to_string(j));
        sum += std::pow(inc, q);
      }
      scales[di] = std::pow(2.0, -j);
      stats[di] = sum;
      out.log_partition[qi].push_back(std::log(sum));
    }
    const ScalingReport fit = fit_loglog(scales, stats);
    out.tau.push_back(fit.slope);
    out.intercepts.push_back(fit.intercept);
  }
  return out;
}

double cascade_moment_exact(int depth, double q, const MultiplierLaw& law) {
  if (depth < 0) throw ValidationError("depth must be nonnegative");
  if (!(law.m0 > 0.0 && law.m0 < 1.0))
    throw ValidationError("cascade multiplier m0 must lie in (0,1)");
  return std::pow(law.moment(q), depth);
}

}  // namespace longmem
