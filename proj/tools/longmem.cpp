// longmem: simulate long-memory processes and estimate their scaling
// exponents from the command line. Every randomized run requires an explicit
// seed (flag or LONGMEM_SEED) and emits a resolved-config file next to its
// output so the run can be reproduced byte for byte.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "longmem/analyze.hpp"
#include "longmem/estimate.hpp"
#include "longmem/fgn.hpp"
#include "longmem/hermite.hpp"
#include "longmem/multifractal.hpp"
#include "longmem/series_io.hpp"

namespace {

using nlohmann::json;

struct CommonArgs {
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string config_file;
};

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  if (const char* env = std::getenv("LONGMEM_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw longmem::ValidationError("LONGMEM_SEED is not a valid integer");
    }
  }
  throw longmem::ValidationError(
      "a seed is required: pass --seed or set LONGMEM_SEED (no wall-clock default)");
}

void write_resolved_config(const std::string& output, const json& resolved) {
  std::ofstream out(output + ".config.json");
  if (!out) throw longmem::IoError("cannot write resolved config next to '" + output + "'");
  out << resolved.dump(2) << '\n';
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw longmem::ValidationError("empty entry in list '" + csv + "'");
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw longmem::ValidationError("not a number in list: '" + item + "'");
    }
  }
  if (out.empty()) throw longmem::ValidationError("empty list");
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& csv) {
  std::vector<std::size_t> out;
  for (double v : parse_double_list(csv)) {
    if (v < 1) throw longmem::ValidationError("list entries must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_double_list(csv)) out.push_back(static_cast<int>(v));
  return out;
}

// ---- simulate ----------------------------------------------------------

struct SimulateArgs {
  std::string process;
  double hurst = 0.7;
  int order = 2;
  std::size_t n = 1024;
  double dt = 1.0;
  int depth = 10;
  double m0 = 0.6;
  bool random_multiplier = false;
  bool non_conservative = false;
  std::size_t inner_factor = 256;
};

int run_simulate(const SimulateArgs& args, const CommonArgs& common) {
  const std::uint64_t seed = require_seed(common.seed);
  const longmem::RngSpec rng{seed, 0};

  json resolved = {
      {"command", "simulate"},
      {"seed", seed},
      {"output_path", common.output},
      {"params",
       {{"process", args.process},
        {"n", args.n},
        {"dt", args.dt}}},
  };

  if (args.process == "fgn") {
    if (args.n < 1) throw longmem::ValidationError("n must be >= 1");
    longmem::StationarySeries series =
        longmem::generate_fgn_fast(longmem::HurstIndex(args.hurst), args.n, rng);
    series.dt = args.dt;
    longmem::emit_series_file(common.output, series);
    resolved["params"]["hurst"] = args.hurst;
  } else if (args.process == "fbm") {
    if (args.n < 2) throw longmem::ValidationError("fbm needs n >= 2 output rows");
    longmem::StationarySeries noise =
        longmem::generate_fgn_fast(longmem::HurstIndex(args.hurst), args.n - 1, rng);
    noise.dt = args.dt;
    longmem::emit_series_file(common.output, longmem::cumulate(noise));
    resolved["params"]["hurst"] = args.hurst;
  } else if (args.process == "hermite") {
    if (!(args.hurst > 0.5 && args.hurst < 1.0))
      throw longmem::ValidationError("H must exceed 1/2 for Hermite processes (and stay below 1)");
    if (args.n < 3) throw longmem::ValidationError("hermite needs n >= 3 output rows");
    const longmem::HermiteSpec spec = longmem::HermiteSpec::make(
        longmem::HurstIndex(args.hurst), longmem::HermiteOrder(args.order));
    longmem::emit_series_file(
        common.output, longmem::generate_hermite_fast(spec, args.n - 1, args.inner_factor, rng));
    resolved["params"]["hurst"] = args.hurst;
    resolved["params"]["order"] = args.order;
    resolved["params"]["inner_factor"] = args.inner_factor;
  } else if (args.process == "cascade") {
    const longmem::ActivityTime theta = longmem::generate_cascade(
        args.depth, {args.m0, args.random_multiplier}, rng, !args.non_conservative);
    longmem::emit_series_file(common.output, longmem::activity_path(theta));
    resolved["params"]["depth"] = args.depth;
    resolved["params"]["m0"] = args.m0;
    resolved["params"]["random_multiplier"] = args.random_multiplier;
    resolved["params"]["conservative"] = !args.non_conservative;
  } else if (args.process == "subordinated") {
    const longmem::ActivityTime theta = longmem::generate_cascade(
        args.depth, {args.m0, args.random_multiplier}, rng, !args.non_conservative);
    const std::size_t path_inc = 4 * theta.mass.size();
    longmem::StationarySeries noise = longmem::generate_fgn_fast(
        longmem::HurstIndex(args.hurst), path_inc, rng.next_stream(1));
    noise.dt = 1.0 / static_cast<double>(path_inc);
    const longmem::ProcessPath bh = longmem::cumulate(noise);
    longmem::emit_series_file(common.output, longmem::subordinate(bh, theta));
    resolved["params"]["hurst"] = args.hurst;
    resolved["params"]["depth"] = args.depth;
    resolved["params"]["m0"] = args.m0;
    resolved["params"]["random_multiplier"] = args.random_multiplier;
    resolved["params"]["conservative"] = !args.non_conservative;
  } else {
    throw longmem::ValidationError("unknown process '" + args.process + "'");
  }

  write_resolved_config(common.output, resolved);
  return 0;
}

// ---- estimate ----------------------------------------------------------

struct EstimateArgs {
  std::string method;
  std::string input;
  std::string windows;
  std::string qs = "0.5,1,2,3";
  std::string depths;
  double cutoff = longmem::kDefaultPeriodogramCutoff;
  bool overlapping = false;
  bool allow_negative_q = false;
};

void check_length(std::size_t n, std::size_t need, const std::string& method) {
  if (n < need)
    throw longmem::ValidationError("series too short for method " + method + ": have " +
                                   std::to_string(n) + " values, need at least " +
                                   std::to_string(need));
}

int run_estimate(const EstimateArgs& args, const CommonArgs& common) {
  const longmem::IngestedSeries ingested = longmem::ingest_series_file(args.input);

  std::ostringstream body;
  json resolved = {{"command", "estimate"},
                   {"input_path", args.input},
                   {"output_path", common.output},
                   {"params", {{"method", args.method}}}};

  if (args.method == "partition") {
    const longmem::ProcessPath path = longmem::as_path(ingested);
    const std::size_t n = path.increments();
    check_length(n, 64, args.method);
    std::vector<int> depths;
    if (!args.depths.empty()) {
      depths = parse_int_list(args.depths);
    } else {
      int max_depth = 0;
      while ((std::size_t{1} << (max_depth + 1)) <= n) ++max_depth;
      for (int j = 4; j <= max_depth - 4; ++j) depths.push_back(j);
      if (depths.size() < 2) {
        depths.clear();
        for (int j = 1; j <= max_depth; ++j) depths.push_back(j);
      }
    }
    const std::vector<double> qs = parse_double_list(args.qs);
    if (!args.allow_negative_q)
      for (double q : qs)
        if (q < 0.0)
          throw longmem::ValidationError(
              "negative moments are numerically explosive; pass --allow-negative-q to force");
    const longmem::ScalingFunction scaling = longmem::partition_function(path, qs, depths);
    longmem::emit_report(body, scaling);
    resolved["params"]["q"] = qs;
    resolved["params"]["depths"] = depths;
  } else {
    const longmem::StationarySeries series = longmem::as_increments(ingested);
    longmem::ScalingReport report;
    if (args.method == "rs") {
      check_length(series.size(), 64, args.method);
      const std::vector<std::size_t> windows = args.windows.empty()
                                                   ? longmem::default_rs_windows(series.size())
                                                   : parse_size_list(args.windows);
      report = longmem::rs_hurst(series, windows, !args.overlapping);
      resolved["params"]["windows"] = windows;
      resolved["params"]["overlapping"] = args.overlapping;
    } else if (args.method == "aggvar") {
      check_length(series.size(), 64, args.method);
      const std::vector<std::size_t> blocks = args.windows.empty()
                                                  ? longmem::default_aggvar_blocks(series.size())
                                                  : parse_size_list(args.windows);
      report = longmem::aggregated_variance_hurst(series, blocks);
      resolved["params"]["windows"] = blocks;
    } else if (args.method == "periodogram") {
      check_length(series.size(), 128, args.method);
      report = longmem::periodogram_hurst(series, args.cutoff);
      resolved["params"]["cutoff"] = args.cutoff;
    } else {
      throw longmem::ValidationError("unknown method '" + args.method + "'");
    }
    longmem::emit_report(body, report);
  }

  std::ofstream out(common.output);
  if (!out) throw longmem::IoError("cannot open '" + common.output + "' for writing");
  out << body.str();
  out.flush();
  if (!out) throw longmem::IoError("failed writing '" + common.output + "'");
  write_resolved_config(common.output, resolved);
  return 0;
}

// ---- cascade -----------------------------------------------------------

struct CascadeArgs {
  int depth = 10;
  double m0 = 0.6;
  bool random_multiplier = false;
  bool non_conservative = false;
  std::string qs;
};

int run_cascade(const CascadeArgs& args, const CommonArgs& common) {
  const std::uint64_t seed = require_seed(common.seed);
  const longmem::MultiplierLaw law{args.m0, args.random_multiplier};
  const longmem::ActivityTime theta =
      longmem::generate_cascade(args.depth, law, {seed, 0}, !args.non_conservative);
  longmem::emit_series_file(common.output, longmem::activity_path(theta));

  json resolved = {{"command", "cascade"},
                   {"seed", seed},
                   {"output_path", common.output},
                   {"params",
                    {{"depth", args.depth},
                     {"m0", args.m0},
                     {"random_multiplier", args.random_multiplier},
                     {"conservative", !args.non_conservative}}}};

  if (!args.qs.empty()) {
    const std::vector<double> qs = parse_double_list(args.qs);
    std::ofstream out(common.output + ".moments");
    if (!out) throw longmem::IoError("cannot write moment table for '" + common.output + "'");
    out << "q,exact_moment,realized_mean\n";
    for (double q : qs) {
      long double realized = 0.0L;
      for (double m : theta.mass) realized += powl(m, static_cast<long double>(q));
      realized /= static_cast<long double>(theta.mass.size());
      out << longmem::format_double(q) << ','
          << longmem::format_double(longmem::cascade_moment_exact(args.depth, q, law)) << ','
          << longmem::format_double(static_cast<double>(realized)) << '\n';
    }
    resolved["params"]["q"] = qs;
  }

  write_resolved_config(common.output, resolved);
  return 0;
}

// ---- analyze -----------------------------------------------------------

struct AnalyzeArgs {
  std::string process = "fgn";
  double hurst = 0.7;
  int order = 1;
  std::string ns = "1024,4096";
  std::size_t replicates = 2000;
};

int run_analyze(const AnalyzeArgs& args, const CommonArgs& common) {
  const std::uint64_t seed = require_seed(common.seed);
  const longmem::SourceSpec source = longmem::SourceSpec::parse(args.process, args.hurst);
  const std::vector<std::size_t> ns = parse_size_list(args.ns);
  const std::vector<longmem::ConvergenceRow> rows =
      longmem::convergence_experiment(source, args.order, ns, args.replicates, {seed, 0});

  std::ofstream out(common.output);
  if (!out) throw longmem::IoError("cannot open '" + common.output + "' for writing");
  out << "n,variance,skewness,excess_kurtosis,ks_distance,s_n,empirical_sn\n";
  for (const auto& row : rows)
    out << row.n << ',' << longmem::format_double(row.variance) << ','
        << longmem::format_double(row.skewness) << ','
        << longmem::format_double(row.excess_kurtosis) << ','
        << longmem::format_double(row.ks_distance) << ',' << longmem::format_double(row.s_n)
        << ',' << (row.empirical_sn ? 1 : 0) << '\n';
  out.flush();
  if (!out) throw longmem::IoError("failed writing '" + common.output + "'");

  json resolved = {{"command", "analyze"},
                   {"seed", seed},
                   {"output_path", common.output},
                   {"params",
                    {{"process", args.process},
                     {"hurst", args.hurst},
                     {"order", args.order},
                     {"n", ns},
                     {"replicates", args.replicates}}}};
  write_resolved_config(common.output, resolved);
  return 0;
}

// ---- config-file merge ---------------------------------------------------

// Flags beat config-file entries, which beat defaults: config values are
// injected into the argument list only for options absent from the command
// line, before CLI11 parses anything.
std::vector<std::string> merge_config_args(std::vector<std::string> args, CLI::App& app) {
  std::string config_file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_file = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_file = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (config_file.empty()) return args;

  std::ifstream in(config_file);
  if (!in) throw longmem::IoError("cannot open config file '" + config_file + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw longmem::ParseError(std::string("config file: ") + e.what());
  }

  CLI::App* sub = nullptr;
  for (const std::string& a : args)
    if (!a.empty() && a[0] != '-') {
      sub = app.get_subcommand_no_throw(a);
      break;
    }
  if (!sub) throw longmem::ValidationError("--config needs a subcommand");

  for (const auto& [key, value] : doc.items()) {
    const std::string flag = "--" + key;
    if (!sub->get_option_no_throw(flag))
      throw longmem::ValidationError("config file sets unknown option '" + key + "'");
    bool present = false;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) {
        present = true;
        break;
      }
    if (present) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else {
      args.push_back(flag + "=" +
                     (value.is_string() ? value.get<std::string>() : value.dump()));
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"long-memory process simulation and estimation"};
  app.require_subcommand(1);

  CommonArgs common;
  SimulateArgs sim;
  EstimateArgs est;
  CascadeArgs cas;
  AnalyzeArgs ana;

  auto add_common = [&](CLI::App* cmd, bool needs_output = true) {
    cmd->add_option("--seed", common.seed, "RNG seed (required for randomized commands)");
    auto* out = cmd->add_option("--output", common.output, "output file");
    if (needs_output) out->required();
    cmd->add_option("--config", common.config_file, "JSON config file (flags take precedence)");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "generate a series or path file");
  simulate->add_option("--process", sim.process, "fgn|fbm|hermite|cascade|subordinated")
      ->required();
  simulate->add_option("--hurst", sim.hurst, "Hurst index");
  simulate->add_option("--order", sim.order, "Hermite chaos order");
  simulate->add_option("--n", sim.n, "output rows");
  simulate->add_option("--dt", sim.dt, "time step");
  simulate->add_option("--depth", sim.depth, "cascade depth");
  simulate->add_option("--m0", sim.m0, "cascade multiplier");
  simulate->add_flag("--random-multiplier", sim.random_multiplier,
                     "draw multipliers from the two-point law");
  simulate->add_flag("--non-conservative", sim.non_conservative,
                     "independent child shares, renormalized");
  simulate->add_option("--inner-factor", sim.inner_factor, "inner points per Hermite step");
  add_common(simulate);

  CLI::App* estimate = app.add_subcommand("estimate", "fit a scaling report to a series file");
  estimate->add_option("--method", est.method, "rs|aggvar|periodogram|partition")->required();
  estimate->add_option("--input", est.input, "series file")->required();
  estimate->add_option("--windows", est.windows, "comma-separated window/block sizes");
  estimate->add_option("--q", est.qs, "comma-separated moments for partition");
  estimate->add_option("--depth", est.depths, "comma-separated dyadic depths for partition");
  estimate->add_option("--cutoff", est.cutoff, "periodogram low-frequency fraction");
  estimate->add_flag("--overlapping", est.overlapping, "half-overlapping R/S blocks");
  estimate->add_flag("--allow-negative-q", est.allow_negative_q,
                     "permit q < 0 in the partition function");
  add_common(estimate);

  CLI::App* cascade = app.add_subcommand("cascade", "generate an activity time");
  cascade->add_option("--depth", cas.depth, "cascade depth");
  cascade->add_option("--m0", cas.m0, "cascade multiplier");
  cascade->add_flag("--random-multiplier", cas.random_multiplier,
                    "draw multipliers from the two-point law");
  cascade->add_flag("--non-conservative", cas.non_conservative,
                    "independent child shares, renormalized");
  cascade->add_option("--q", cas.qs, "emit exact moments for these q");
  add_common(cascade);

  CLI::App* analyze = app.add_subcommand("analyze", "normalized partial-sum convergence table");
  analyze->add_option("--process", ana.process, "iid|fgn");
  analyze->add_option("--hurst", ana.hurst, "Hurst index of the source");
  analyze->add_option("--order", ana.order, "Hermite transform order (1 = identity)");
  analyze->add_option("--n", ana.ns, "comma-separated series lengths");
  analyze->add_option("--replicates", ana.replicates, "Monte Carlo replicates");
  add_common(analyze);

  try {
    try {
      std::vector<std::string> args =
          merge_config_args(std::vector<std::string>(argv + 1, argv + argc), app);
      std::reverse(args.begin(), args.end());  // CLI11's vector overload pops from the back
      app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) return app.exit(e);  // --help
      std::cerr << "E_USAGE: " << e.what() << '\n';
      return 2;
    }

    if (simulate->parsed()) return run_simulate(sim, common);
    if (estimate->parsed()) return run_estimate(est, common);
    if (cascade->parsed()) return run_cascade(cas, common);
    if (analyze->parsed()) return run_analyze(ana, common);
    std::cerr << "E_USAGE: no subcommand\n";
    return 2;
  } catch (const longmem::ValidationError& e) {
    std::cerr << "E_VALIDATION: " << e.what() << '\n';
    return 3;
  } catch (const longmem::ParseError& e) {
    std::cerr << "E_PARSE: " << e.what() << '\n';
    return 4;
  } catch (const longmem::NumericError& e) {
    std::cerr << "E_NUMERIC: " << e.what() << '\n';
    return 5;
  } catch (const longmem::IoError& e) {
    std::cerr << "E_IO: " << e.what() << '\n';
    return 6;
  } catch (const std::exception& e) {
    std::cerr << "E_INTERNAL: " << e.what() << '\n';
    return 10;
  }
}
