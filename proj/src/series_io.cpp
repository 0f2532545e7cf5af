#include "longmem/series_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace longmem {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_header(std::ostream& out, const SeriesMeta& meta, double dt) {
  out << "# dt=" << format_double(dt) << " kind=" << meta.kind;
  if (meta.hurst) out << " hurst=" << format_double(*meta.hurst);
  if (meta.order) out << " order=" << *meta.order;
  out << '\n';
}

double parse_number(const std::string& token, std::size_t line) {
  if (token.empty()) throw ParseError("empty numeric field", line);
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + token.size() || !std::isfinite(v))
    throw ParseError("not a finite number: '" + token + "'", line);
  return v;
}

}  // namespace

void emit_series(std::ostream& out, const StationarySeries& series) {
  write_header(out, series.meta, series.dt);
  for (double v : series.values) out << format_double(v) << '\n';
}

void emit_series(std::ostream& out, const ProcessPath& path) {
  write_header(out, path.meta, path.grid.dt);
  for (std::size_t i = 0; i < path.values.size(); ++i)
    out << format_double(path.grid.time(i)) << ',' << format_double(path.values[i]) << '\n';
}

namespace {

template <typename T>
void emit_to_file(const std::string& file, const T& data) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot open '" + file + "' for writing");
  emit_series(out, data);
  out.flush();
  if (!out) throw IoError("failed writing '" + file + "'");
}

}  // namespace

void emit_series_file(const std::string& file, const StationarySeries& series) {
  emit_to_file(file, series);
}
void emit_series_file(const std::string& file, const ProcessPath& path) {
  emit_to_file(file, path);
}

IngestedSeries ingest_series(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty input", 1);

  // Header: '# dt=<real> kind=<word>' with optional hurst=/order= tokens.
  std::istringstream header(line);
  std::string hash;
  header >> hash;
  if (hash != "#") throw ParseError("missing '# dt=... kind=...' header", 1);
  SeriesMeta meta;
  double dt = 0.0;
  bool have_dt = false, have_kind = false;
  std::string token;
  while (header >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ParseError("malformed header token '" + token + "'", 1);
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "dt") {
      dt = parse_number(value, 1);
      have_dt = true;
    } else if (key == "kind") {
      meta.kind = value;
      have_kind = true;
    } else if (key == "hurst") {
      meta.hurst = parse_number(value, 1);
    } else if (key == "order") {
      meta.order = static_cast<int>(parse_number(value, 1));
    } else {
      throw ParseError("unknown header key '" + key + "'", 1);
    }
  }
  if (!have_dt || !have_kind) throw ParseError("header must declare dt and kind", 1);
  if (!(dt > 0.0)) throw ParseError("dt must be positive", 1);

  std::vector<double> values;
  std::vector<double> times;
  bool is_path = false;
  bool decided = false;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) throw ParseError("blank row", lineno);
    const auto comma = line.find(',');
    if (!decided) {
      is_path = comma != std::string::npos;
      decided = true;
    }
    if (is_path) {
      if (comma == std::string::npos) throw ParseError("expected time,value pair", lineno);
      const double t = parse_number(line.substr(0, comma), lineno);
      const double v = parse_number(line.substr(comma + 1), lineno);
      if (!times.empty() && !(t > times.back()))
        throw ParseError("time column is not strictly increasing", lineno);
      times.push_back(t);
      values.push_back(v);
    } else {
      if (comma != std::string::npos) throw ParseError("unexpected comma in value row", lineno);
      values.push_back(parse_number(line, lineno));
    }
  }
  if (values.empty()) throw ParseError("no data rows", lineno + 1);

  if (!is_path) return make_series(std::move(values), dt, std::move(meta));

  for (std::size_t i = 0; i < times.size(); ++i) {
    const double expected = static_cast<double>(i) * dt;
    if (std::abs(times[i] - expected) > 1e-9 * std::max(1.0, std::abs(expected)))
      throw ParseError("time column does not match the declared dt", i + 2);
  }
  if (values.front() != 0.0) throw ParseError("path must start at value 0", 2);
  const TimeGrid grid = make_grid(values.size(), dt);
  return make_path(grid, std::move(values), std::move(meta));
}

IngestedSeries ingest_series_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open '" + file + "'");
  return ingest_series(in);
}

StationarySeries as_increments(const IngestedSeries& ingested) {
  if (const auto* series = std::get_if<StationarySeries>(&ingested)) return *series;
  const auto& path = std::get<ProcessPath>(ingested);
  if (path.values.size() < 2) throw ValidationError("path too short to difference");
  std::vector<double> inc(path.values.size() - 1);
  for (std::size_t i = 0; i + 1 < path.values.size(); ++i)
    inc[i] = path.values[i + 1] - path.values[i];
  return make_series(std::move(inc), path.grid.dt, path.meta);
}

ProcessPath as_path(const IngestedSeries& ingested) {
  if (const auto* path = std::get_if<ProcessPath>(&ingested)) return *path;
  const auto& series = std::get<StationarySeries>(ingested);
  std::vector<double> values(series.size() + 1, 0.0);
  for (std::size_t i = 0; i < series.size(); ++i) values[i + 1] = values[i] + series.values[i];
  return make_path(make_grid(series.size() + 1, series.dt), std::move(values), series.meta);
}

void emit_report(std::ostream& out, const ScalingReport& report) {
  out << "# method=" << report.method << '\n';
  out << "# hurst_estimate=" << format_double(report.hurst) << '\n';
  out << "# slope=" << format_double(report.slope) << '\n';
  out << "# intercept=" << format_double(report.intercept) << '\n';
  out << "# stderr=" << format_double(report.stderr_slope) << '\n';
  if (report.skipped_blocks > 0) out << "# skipped_blocks=" << report.skipped_blocks << '\n';
  out << "scale,statistic,log_scale,log_statistic\n";
  for (std::size_t i = 0; i < report.scales.size(); ++i)
    out << format_double(report.scales[i]) << ',' << format_double(report.statistics[i]) << ','
        << format_double(std::log(report.scales[i])) << ','
        << format_double(std::log(report.statistics[i])) << '\n';
}

void emit_report(std::ostream& out, const ScalingFunction& scaling) {
  out << "# method=partition\n";
  for (std::size_t i = 0; i < scaling.qs.size(); ++i)
    out << "# tau[q=" << format_double(scaling.qs[i])
        << "]=" << format_double(scaling.tau[i])
        << " intercept=" << format_double(scaling.intercepts[i]) << '\n';
  out << "q,scale,statistic,log_scale,log_statistic\n";
  for (std::size_t i = 0; i < scaling.qs.size(); ++i) {
    for (std::size_t d = 0; d < scaling.depths.size(); ++d) {
      const double scale = std::pow(2.0, -scaling.depths[d]);
      const double log_stat = scaling.log_partition[i][d];
      out << format_double(scaling.qs[i]) << ',' << format_double(scale) << ','
          << format_double(std::exp(log_stat)) << ',' << format_double(std::log(scale)) << ','
          << format_double(log_stat) << '\n';
    }
  }
}

}  // namespace longmem
