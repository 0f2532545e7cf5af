#include "longmem/types.hpp"

#include <cmath>

namespace longmem {

TimeGrid make_grid(std::size_t points, double dt) {
  if (points < 1) throw ValidationError("time grid needs at least one point");
  if (!(dt > 0.0)) throw ValidationError("time grid step must be positive; got " +
                                         std::to_string(dt));
  return TimeGrid{points, dt};
}

StationarySeries make_series(std::vector<double> values, double dt, SeriesMeta meta) {
  if (values.empty()) throw ValidationError("series must contain at least one value");
  if (!(dt > 0.0)) throw ValidationError("series step must be positive");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("series values must be finite");
  return StationarySeries{std::move(values), dt, std::move(meta)};
}

ProcessPath make_path(TimeGrid grid, std::vector<double> values, SeriesMeta meta,
                      double scale_applied) {
  if (values.size() != grid.points)
    throw ValidationError("path length does not match its grid");
  if (values.empty() || values.front() != 0.0)
    throw ValidationError("paths are anchored at value 0 at time 0");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("path values must be finite");
  return ProcessPath{grid, std::move(values), std::move(meta), scale_applied};
}

}  // namespace longmem
