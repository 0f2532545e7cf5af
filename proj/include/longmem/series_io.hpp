#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "longmem/estimate.hpp"
#include "longmem/multifractal.hpp"
#include "longmem/types.hpp"

namespace longmem {

/// Text series format, exact round trip at 17 significant digits:
///   # dt=<real> kind=<fgn|fbm|hermite|cascade|subordinated|external> [hurst=..] [order=..]
/// followed by one value per line for stationary series, or time,value pairs
/// for paths.
void emit_series(std::ostream& out, const StationarySeries& series);
void emit_series(std::ostream& out, const ProcessPath& path);
void emit_series_file(const std::string& file, const StationarySeries& series);
void emit_series_file(const std::string& file, const ProcessPath& path);

using IngestedSeries = std::variant<StationarySeries, ProcessPath>;

/// Strict parser for the format above. Malformed headers, non-numeric
/// values, blank rows and non-monotone time columns raise ParseError with
/// the offending line number.
IngestedSeries ingest_series(std::istream& in);
IngestedSeries ingest_series_file(const std::string& file);

/// Increments of whichever variant was ingested; paths are differenced.
StationarySeries as_increments(const IngestedSeries& ingested);
/// Path view: stationary series are cumulated with unit scale.
ProcessPath as_path(const IngestedSeries& ingested);

/// Report format: '# key=value' header lines, then a
/// scale,statistic,log_scale,log_statistic table.
void emit_report(std::ostream& out, const ScalingReport& report);
void emit_report(std::ostream& out, const ScalingFunction& scaling);

/// %.17g rendering used everywhere a double goes to disk.
std::string format_double(double v);

}  // namespace longmem
