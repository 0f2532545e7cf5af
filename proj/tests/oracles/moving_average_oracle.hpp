#pragma once

// Test-side oracle: fBm by brute-force discretization of its moving-average
// representation against white noise on a lattice. The kernel constant is
// unspecified, so every comparison divides out an empirical or analytic
// scale. Kept independent of the library's generators on purpose.

#include <cmath>
#include <span>
#include <vector>

namespace longmem::testing {

struct MovingAverageOracle {
  double hurst;
  double left;   // lattice covers [left, t_max]
  double width;  // cell width
  std::vector<double> centers;

  MovingAverageOracle(double hurst_, double t_max, double left_extent, std::size_t cells)
      : hurst(hurst_), left(-left_extent * t_max) {
    width = (t_max - left) / static_cast<double>(cells);
    centers.resize(cells);
    for (std::size_t i = 0; i < cells; ++i)
      centers[i] = left + (static_cast<double>(i) + 0.5) * width;
  }

  // (t-x)_+^(H-1/2) - (-x)_+^(H-1/2)
  double kernel(double t, double x) const {
    const double p = hurst - 0.5;
    const double a = t - x > 0.0 ? std::pow(t - x, p) : 0.0;
    const double b = -x > 0.0 ? std::pow(-x, p) : 0.0;
    return a - b;
  }

  // Path value at time t for one replicate of standard normal noise.
  double value(double t, std::span<const double> noise) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i)
      acc += kernel(t, centers[i]) * noise[i];
    return std::sqrt(width) * acc;
  }
};

}  // namespace longmem::testing
