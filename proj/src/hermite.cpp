#include "longmem/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "longmem/kernels.hpp"

namespace longmem {

HurstIndex h0_from(const HurstIndex& hurst, const HermiteOrder& order) {
  const double h = hurst.value();
  if (!(h > 0.5 && h < 1.0))
    throw ValidationError("Hermite regime needs 1/2 < H < 1; got " + std::to_string(h));
  return HurstIndex(1.0 - (1.0 - h) / static_cast<double>(order.value()));
}

double hermite_polynomial(const HermiteOrder& order, double x) {
  double out;
  kernels::hermite_apply(order.value(), &x, &out, 1);
  return out;
}

HermiteSpec HermiteSpec::make(const HurstIndex& hurst, const HermiteOrder& order) {
  return HermiteSpec{hurst, order, h0_from(hurst, order)};
}

namespace {

// Gauss-Legendre nodes/weights on [-1,1], computed once per order by Newton
// iteration on the Legendre recurrence.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussRule(int n) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        pp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
  }
};

double product_kernel(std::span<const double> xs_sorted, double p, double s) {
  double acc = 1.0;
  for (double x : xs_sorted) acc *= std::pow(s - x, p);
  return acc;
}

// Integral of prod (s-x)^p over [from, to] with panels halving toward the
// singular point `sing` (<= from).
double integrate_toward_singularity(std::span<const double> xs_sorted, double p, double sing,
                                    double from, double to, const GaussRule& rule,
                                    int max_panels) {
  if (!(to > from)) return 0.0;
  double acc = 0.0;
  double hi = to;
  for (int panel = 0; panel < max_panels && hi > from; ++panel) {
    double lo = sing + (hi - sing) * 0.5;
    if (lo <= from || panel == max_panels - 1) lo = from;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double panel_acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      panel_acc += rule.weights[i] * product_kernel(xs_sorted, p, mid + half * rule.nodes[i]);
    acc += half * panel_acc;
    hi = lo;
  }
  return acc;
}

}  // namespace

double hermite_kernel(double t, std::span<const double> xs, const HermiteSpec& spec,
                      const QuadratureSpec& quad) {
  if (!(t > 0.0)) throw ValidationError("kernel time must be positive");
  if (xs.size() != static_cast<std::size_t>(spec.order.value()))
    throw ValidationError("kernel needs one argument per chaos order");
  if (!(quad.epsilon > 0.0) || quad.gauss_points < 2 || quad.max_panels < 1)
    throw ValidationError("invalid quadrature settings");

  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double sing = sorted.back();
  const double from = std::max(0.0, sing + quad.epsilon);
  if (from >= t) return 0.0;

  const double p = spec.h0.value() - 1.5;
  static thread_local int cached_order = 0;
  static thread_local std::unique_ptr<GaussRule> cached_rule;
  if (!cached_rule || cached_order != quad.gauss_points) {
    cached_rule = std::make_unique<GaussRule>(quad.gauss_points);
    cached_order = quad.gauss_points;
  }
  return integrate_toward_singularity(sorted, p, sing, from, t, *cached_rule, quad.max_panels);
}

struct HermiteOracle::Impl {
  HermiteSpec spec;
  TimeGrid grid;
  LatticeSpec lattice;
  QuadratureSpec quad;
  double width = 0.0;
  std::vector<double> centers;
  // k=1: per grid index, kernel values per cell. k=2: per grid index, the
  // symmetric cell-pair matrix, row-major.
  std::vector<std::vector<double>> tables;
  double normalization = 0.0;

  Impl(const HermiteSpec& s, const TimeGrid& g, const LatticeSpec& l, QuadratureSpec q)
      : spec(s), grid(g), lattice(l), quad(q) {}

  void build_tables();
  double raw_value(std::size_t time_index, std::span<const double> z) const;
};

namespace {

// Cumulative integrals of the kernel product between consecutive grid times,
// graded toward the singular point. Returns the value per grid index (index 0
// is time 0, always 0).
std::vector<double> cumulative_kernel(std::span<const double> xs_sorted, double p,
                                      const TimeGrid& grid, const QuadratureSpec& quad,
                                      const GaussRule& rule) {
  std::vector<double> out(grid.points, 0.0);
  const double sing = xs_sorted.back();
  const double start = std::max(0.0, sing + quad.epsilon);
  double acc = 0.0;
  for (std::size_t l = 1; l < grid.points; ++l) {
    const double a = std::max(grid.time(l - 1), start);
    const double b = grid.time(l);
    if (b > a)
      acc += integrate_toward_singularity(xs_sorted, p, sing, a, b, rule, quad.max_panels);
    out[l] = acc;
  }
  return out;
}

}  // namespace

void HermiteOracle::Impl::build_tables() {
  const double t_max = grid.max_time();
  const double left = -lattice.left_extent * t_max;
  const std::size_t m = lattice.cells;
  width = (t_max - left) / static_cast<double>(m);
  centers.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    centers[i] = left + (static_cast<double>(i) + 0.5) * width;

  // epsilon <= 0 means auto: offset by half a lattice cell.
  if (quad.epsilon <= 0.0) quad.epsilon = 0.5 * width;

  const double p = spec.h0.value() - 1.5;
  const GaussRule rule(quad.gauss_points);
  const int k = spec.order.value();
  tables.assign(grid.points, {});

  if (k == 1) {
    for (auto& tbl : tables) tbl.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double xs[1] = {centers[i]};
      const std::vector<double> cum = cumulative_kernel(xs, p, grid, quad, rule);
      for (std::size_t l = 1; l < grid.points; ++l) tables[l][i] = cum[l];
    }
  } else {
    for (auto& tbl : tables) tbl.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        const double xs[2] = {centers[i], centers[j]};
        const std::vector<double> cum = cumulative_kernel(xs, p, grid, quad, rule);
        for (std::size_t l = 1; l < grid.points; ++l) {
          tables[l][i * m + j] = cum[l];
          tables[l][j * m + i] = cum[l];
        }
      }
    }
  }
}

double HermiteOracle::Impl::raw_value(std::size_t time_index, std::span<const double> z) const {
  const std::size_t m = lattice.cells;
  const auto& tbl = tables[time_index];
  if (spec.order.value() == 1) {
    // sum_i g(x_i) dB_i with dB_i = sqrt(width) z_i
    return std::sqrt(width) * kernels::dot(tbl.data(), z.data(), m);
  }
  // Off-diagonal pair sum: z^T G z minus the diagonal, scaled by the cell
  // variance. Ordered pairs are both counted, matching the multiple-integral
  // convention.
  double quadform = 0.0;
  double diag = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    quadform += z[i] * kernels::dot(tbl.data() + i * m, z.data(), m);
    diag += tbl[i * m + i] * z[i] * z[i];
  }
  return width * (quadform - diag);
}

HermiteOracle::HermiteOracle(const HermiteSpec& spec, const TimeGrid& grid,
                             const LatticeSpec& lattice, QuadratureSpec quad)
    : impl_(std::make_unique<Impl>(spec, grid, lattice, quad)) {
  if (spec.order.value() > kHermiteOracleMaxOrder)
    throw ValidationError("oracle size exceeded: chaos order " +
                          std::to_string(spec.order.value()) + " > 2");
  if (grid.points > kHermiteOracleMaxPoints)
    throw ValidationError("oracle size exceeded: grid has " + std::to_string(grid.points) +
                          " points > 64");
  if (lattice.cells < 2 || !(lattice.left_extent > 0.0))
    throw ValidationError("lattice needs at least 2 cells and positive left extent");
  impl_->build_tables();
}

HermiteOracle::~HermiteOracle() = default;
HermiteOracle::HermiteOracle(HermiteOracle&&) noexcept = default;
HermiteOracle& HermiteOracle::operator=(HermiteOracle&&) noexcept = default;

const TimeGrid& HermiteOracle::grid() const { return impl_->grid; }
double HermiteOracle::cell_width() const { return impl_->width; }
std::span<const double> HermiteOracle::cell_centers() const { return impl_->centers; }

ProcessPath HermiteOracle::sample_raw_from(std::span<const double> noise) const {
  if (noise.size() != impl_->lattice.cells)
    throw ValidationError("noise vector must have one draw per lattice cell");
  std::vector<double> values(impl_->grid.points, 0.0);
  for (std::size_t l = 1; l < impl_->grid.points; ++l)
    values[l] = impl_->raw_value(l, noise);
  SeriesMeta meta{"hermite", impl_->spec.target.value(), impl_->spec.order.value()};
  return make_path(impl_->grid, std::move(values), std::move(meta));
}

ProcessPath HermiteOracle::sample_raw(RngSpec rng) const {
  return sample_raw_from(gaussian_stream(rng, impl_->lattice.cells));
}

double HermiteOracle::exact_variance(std::size_t time_index) const {
  const std::size_t m = impl_->lattice.cells;
  const auto& tbl = impl_->tables.at(time_index);
  if (impl_->spec.order.value() == 1)
    return impl_->width * kernels::sum_sq(tbl.data(), m);
  // Var(sum_{i != j} G_ij z_i z_j) = 2 sum_{i != j} G_ij^2
  double total = kernels::sum_sq(tbl.data(), m * m);
  double diag = 0.0;
  for (std::size_t i = 0; i < m; ++i) diag += tbl[i * m + i] * tbl[i * m + i];
  return 2.0 * impl_->width * impl_->width * (total - diag);
}

double HermiteOracle::calibrate(std::size_t replicates, RngSpec rng, double reference_time) {
  if (replicates < 2) throw ValidationError("calibration needs at least 2 replicates");
  std::size_t ref = 0;
  double best = std::abs(impl_->grid.time(0) - reference_time);
  for (std::size_t l = 1; l < impl_->grid.points; ++l) {
    const double d = std::abs(impl_->grid.time(l) - reference_time);
    if (d < best) {
      best = d;
      ref = l;
    }
  }
  if (ref == 0) throw ValidationError("reference time precedes the first positive grid point");

  std::vector<double> z(impl_->lattice.cells);
  long double acc = 0.0L;
  for (std::size_t r = 0; r < replicates; ++r) {
    RandomStream stream(rng.next_stream(r));
    stream.fill_gaussian(z);
    const double v = impl_->raw_value(ref, z);
    acc += static_cast<long double>(v) * v;
  }
  impl_->normalization = std::sqrt(static_cast<double>(acc / replicates));
  if (!(impl_->normalization > 0.0)) throw NumericError("degenerate oracle normalization");
  return impl_->normalization;
}

double HermiteOracle::normalization() const { return impl_->normalization; }

ProcessPath HermiteOracle::sample(RngSpec rng) const {
  if (!(impl_->normalization > 0.0))
    throw ValidationError("oracle must be calibrated before normalized sampling");
  ProcessPath path = sample_raw(rng);
  for (double& v : path.values) v /= impl_->normalization;
  path.scale_applied = 1.0 / impl_->normalization;
  return path;
}

HermiteFastSampler::HermiteFastSampler(const HermiteSpec& spec, std::size_t n_out,
                                       std::size_t inner_factor)
    : spec_(spec),
      n_out_(n_out),
      inner_(inner_factor),
      norm_(0.0),
      fgn_(spec.h0, n_out * inner_factor) {
  if (n_out < 2) throw ValidationError("Hermite generator needs at least 2 output steps");
  if (inner_factor < 64)
    throw ValidationError("inner factor must be >= 64 for the partial-sum construction");

  // Exact variance of the full transformed sum:
  // Var(sum h_k(xi_j)) = k! * sum_{i,j} rho(|i-j|)^k.
  const std::size_t total = n_out * inner_factor;
  const int k = spec.order.value();
  long double kfact = 1.0L;
  for (int i = 2; i <= k; ++i) kfact *= i;
  long double acc = static_cast<long double>(total);  // rho(0)^k = 1 terms
  for (std::size_t d = 1; d < total; ++d) {
    long double rho = detail::fgn_autocovariance_ld(spec.h0.value(), d);
    long double rk = rho;
    for (int i = 1; i < k; ++i) rk *= rho;
    acc += 2.0L * static_cast<long double>(total - d) * rk;
  }
  norm_ = std::sqrt(static_cast<double>(kfact * acc));
  transformed_.resize(total);
}

ProcessPath HermiteFastSampler::sample(RngSpec rng) {
  const StationarySeries xi = fgn_.sample(rng);
  const std::size_t total = xi.size();
  kernels::hermite_apply(spec_.order.value(), xi.values.data(), transformed_.data(), total);

  std::vector<double> values(n_out_ + 1, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < n_out_; ++i) {
    acc += kernels::sum(transformed_.data() + i * inner_, inner_);
    values[i + 1] = acc / norm_;
  }
  SeriesMeta meta{"hermite", spec_.target.value(), spec_.order.value()};
  return make_path(make_grid(n_out_ + 1, 1.0 / static_cast<double>(n_out_)), std::move(values),
                   std::move(meta), 1.0 / norm_);
}

ProcessPath generate_hermite_fast(const HermiteSpec& spec, std::size_t n_out,
                                  std::size_t inner_factor, RngSpec rng) {
  HermiteFastSampler sampler(spec, n_out, inner_factor);
  return sampler.sample(rng);
}

namespace {

// Exact integral of a step function over [a,b].
double step_mass(const StepFunction& g, double a, double b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < g.levels.size(); ++j) {
    const double lo = std::max(a, g.breakpoints[j]);
    const double hi = std::min(b, g.breakpoints[j + 1]);
    if (hi > lo) acc += g.levels[j] * (hi - lo);
  }
  return acc;
}

}  // namespace

std::pair<double, double> iterated_integral_check(const StepFunction& g, double t, int n) {
  if (!(t > 0.0)) throw ValidationError("upper limit must be positive");
  if (n < 1) throw ValidationError("iteration count must be >= 1");

  // Left side: the innermost integral of the step function is exact, the
  // remaining n-1 passes are cumulative trapezoids on a fine uniform grid.
  const std::size_t cells = 4096;
  const double h = t / static_cast<double>(cells);
  std::vector<double> cur(cells + 1, 0.0);
  for (std::size_t i = 0; i < cells; ++i)
    cur[i + 1] = cur[i] + step_mass(g, static_cast<double>(i) * h,
                                    static_cast<double>(i + 1) * h);
  for (int round = 1; round < n; ++round) {
    std::vector<double> next(cells + 1, 0.0);
    for (std::size_t i = 0; i < cells; ++i)
      next[i + 1] = next[i] + 0.5 * h * (cur[i] + cur[i + 1]);
    cur = std::move(next);
  }
  const double lhs = cur.back();

  // Right side in closed form: integral of (t-s)^(n-1) g(s) ds / (n-1)!
  // piece by piece.
  long double nfact = 1.0L;
  for (int i = 2; i <= n; ++i) nfact *= i;
  long double rhs = 0.0L;
  for (std::size_t j = 0; j < g.levels.size(); ++j) {
    const double a = std::max(0.0, g.breakpoints[j]);
    const double b = std::min(t, g.breakpoints[j + 1]);
    if (b > a)
      rhs += static_cast<long double>(g.levels[j]) *
             (powl(t - a, n) - powl(t - b, n)) / nfact;
  }
  return {lhs, static_cast<double>(rhs)};
}

}  // namespace longmem
