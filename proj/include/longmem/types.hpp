#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace longmem {

/// Raised when an argument violates a documented precondition.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical procedure fails (non-PD matrix, bad embedding, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a file cannot be opened or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on malformed input files; carries the offending line when known.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Relative tolerance for assertions on exact (non-Monte-Carlo) formulas.
inline constexpr double kExactRelTol = 1e-10;

/// Self-similarity exponent, valid strictly inside (0,1).
class HurstIndex {
 public:
  explicit HurstIndex(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0))
      throw ValidationError("Hurst index must lie strictly in (0,1); got " +
                            std::to_string(value));
  }
  double value() const { return value_; }
  friend bool operator==(const HurstIndex&, const HurstIndex&) = default;

 private:
  double value_;
};

/// Order of the Wiener-chaos level; k = 1 is the Gaussian case.
class HermiteOrder {
 public:
  explicit HermiteOrder(int k) : k_(k) {
    if (k < 1) throw ValidationError("Hermite order must be >= 1; got " + std::to_string(k));
  }
  int value() const { return k_; }
  bool is_gaussian() const { return k_ == 1; }
  friend bool operator==(const HermiteOrder&, const HermiteOrder&) = default;

 private:
  int k_;
};

/// Uniform grid 0, dt, ..., (points-1)*dt. Origin is always 0.
struct TimeGrid {
  std::size_t points = 0;
  double dt = 0.0;

  double time(std::size_t i) const { return static_cast<double>(i) * dt; }
  double max_time() const { return time(points - 1); }
};

TimeGrid make_grid(std::size_t points, double dt);

/// Deterministic randomness source: identical (seed, stream) yields
/// bit-identical draws across runs and across workers. Monte Carlo
/// replicates take consecutive stream ids off a common base.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  RngSpec with_stream(std::uint64_t s) const { return {seed, s}; }
  RngSpec next_stream(std::uint64_t offset) const { return {seed, stream + offset}; }
};

/// What produced a series; carried along so downstream operations
/// (cumulate, file emission) know the scaling exponent.
struct SeriesMeta {
  std::string kind = "external";
  std::optional<double> hurst;
  std::optional<int> order;
};

/// Equally spaced stationary increments (fGn, Hermite noise, or ingested data).
struct StationarySeries {
  std::vector<double> values;
  double dt = 1.0;
  SeriesMeta meta;

  std::size_t size() const { return values.size(); }
};

StationarySeries make_series(std::vector<double> values, double dt, SeriesMeta meta = {});

/// Cumulative sample path on a TimeGrid, anchored at value 0 at time 0.
struct ProcessPath {
  TimeGrid grid;
  std::vector<double> values;
  SeriesMeta meta;
  /// Multiplicative factor applied when the path was assembled (dt^H or a
  /// chaos-normalization constant); purely informational.
  double scale_applied = 1.0;

  std::size_t increments() const { return values.size() - 1; }
};

ProcessPath make_path(TimeGrid grid, std::vector<double> values, SeriesMeta meta = {},
                      double scale_applied = 1.0);

}  // namespace longmem
