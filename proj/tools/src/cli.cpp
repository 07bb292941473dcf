#include "c2c/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "c2c/analysis.hpp"
#include "c2c/config.hpp"
#include "c2c/cvim.hpp"
#include "c2c/engine.hpp"
#include "c2c/error.hpp"
#include "c2c/mobility.hpp"
#include "c2c/radio.hpp"
#include "c2c/results.hpp"
#include "c2c/trace_io.hpp"

namespace fs = std::filesystem;

namespace c2c::cli {

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App& sub, CommonOptions& opts) {
  sub.add_option("--config", opts.config_path, "Configuration file (section.key = value)");
  sub.add_option("--set", opts.overrides, "Override one key, e.g. --set road.inflow=4000")
      ->allow_extra_args(false)
      ->take_all();
  sub.add_option("--seed", opts.seed, "Override sim.seed");
}

SimConfig load(const CommonOptions& opts) {
  SimConfig config;
  if (!opts.config_path.empty()) load_config_file(opts.config_path, config);
  for (const auto& o : opts.overrides) apply_override(o, config);
  if (opts.seed) config.seed = *opts.seed;
  config.validate();
  return config;
}

std::ifstream open_input(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::lookup, std::string("cannot open ") + what + " '" + path + "'");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) {
      throw Error(ErrorKind::config,
                  "cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::config, "cannot write '" + path.string() + "'");
  return out;
}

TraceSet read_traces(const std::string& path) {
  auto in = open_input(path, "trace file");
  try {
    if (fs::path(path).extension() == ".xml") return parse_fcd_xml(in);
    return parse_trace_csv(in);
  } catch (const Error& e) {
    throw e.with_context(path);
  }
}

std::vector<BaseStation> read_stations(const std::string& path, const SimConfig& config) {
  auto in = open_input(path, "station file");
  try {
    auto stations = parse_station_csv(in, config.bs_gain, config.bs_height);
    if (stations.empty()) throw Error(ErrorKind::validation, "no stations listed");
    return stations;
  } catch (const Error& e) {
    throw e.with_context(path);
  }
}

// ---- gen-traces ---------------------------------------------------------

struct GenTracesOptions {
  CommonOptions common;
  std::string out_path;
};

int gen_traces(const GenTracesOptions& opts, std::ostream& err) {
  const SimConfig config = load(opts.common);
  const TraceSet traces = generate_traces(config.road_spec(), config.krauss);
  auto out = open_output(opts.out_path);
  emit_trace_csv(out, traces);
  err << "wrote " << traces.size() << " vehicle traces to " << opts.out_path << '\n';
  return kOk;
}

// ---- simulate -----------------------------------------------------------

struct SimulateOptions {
  CommonOptions common;
  std::string traces_path;
  std::string stations_path;
  std::string out_dir;
};

int simulate(const SimulateOptions& opts, std::ostream& err) {
  const SimConfig config = load(opts.common);
  const TraceSet traces = read_traces(opts.traces_path);
  const auto stations = read_stations(opts.stations_path, config);
  const RunOutput result = run(config, traces, stations);

  const fs::path dir(opts.out_dir);
  {
    auto out = open_output(dir / "results.csv");
    write_results_csv(out, result.results);
  }
  {
    auto out = open_output(dir / "summary.json");
    write_summary_json(out, config, result.summary);
  }
  err << "simulated " << result.summary.vehicles << " vehicles over "
      << result.summary.rows << " vehicle-ticks into " << opts.out_dir << '\n';
  if (result.summary.undelivered_packages > 0) {
    err << result.summary.undelivered_packages << " packages ("
        << result.summary.undelivered_bytes << " bytes) left undelivered\n";
  }
  return kOk;
}

// ---- analyze ------------------------------------------------------------

struct AnalyzeOptions {
  CommonOptions common;
  std::vector<std::string> inputs;
  std::string out_dir;
};

struct Scenario {
  std::string label;
  std::string path;
};

std::string label_from_summary(const fs::path& results_path) {
  const fs::path summary = results_path.parent_path() / "summary.json";
  std::ifstream in(summary);
  if (in) {
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (!j.is_discarded() && j.contains("scenario_label") && j["scenario_label"].is_string()) {
      return j["scenario_label"].get<std::string>();
    }
  }
  const auto parent = fs::absolute(results_path).parent_path().filename().string();
  return parent.empty() ? results_path.stem().string() : parent;
}

Scenario parse_input(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq != std::string::npos && eq > 0) return {arg.substr(0, eq), arg.substr(eq + 1)};
  return {label_from_summary(arg), arg};
}

int analyze(const AnalyzeOptions& opts, std::ostream& err) {
  const SimConfig config = load(opts.common);
  std::vector<Scenario> scenarios;
  std::set<std::string> seen;
  for (const auto& arg : opts.inputs) {
    auto s = parse_input(arg);
    if (!seen.insert(s.label).second) {
      throw Error(ErrorKind::validation,
                  "scenario label '" + s.label + "' given twice; use label=path to disambiguate");
    }
    scenarios.push_back(std::move(s));
  }

  std::vector<RateStats> stats;
  std::vector<std::vector<CdfPoint>> cdfs;
  std::vector<std::map<std::string, double>> packages;
  for (const auto& s : scenarios) {
    auto in = open_input(s.path, "results file");
    try {
      const ResultTable results = read_results_csv(in);
      stats.push_back(rate_stats(results, s.label, config.pooling));
      cdfs.push_back(cdf(results));
      packages.push_back(count_packages_per_cell(results));
    } catch (const Error& e) {
      throw e.with_context(s.path);
    }
  }

  std::optional<RatioReport> ratios;
  if (stats.size() >= 2) ratios = compare_scenarios(stats[0], stats[1]);

  const fs::path dir(opts.out_dir);
  {
    auto out = open_output(dir / "stats.json");
    write_stats_json(out, stats, ratios, config.pooling);
  }
  {
    auto out = open_output(dir / "cdf.csv");
    write_cdf_csv(out, cdfs.front());
  }
  {
    auto out = open_output(dir / "cell_packages.csv");
    write_cell_packages_csv(out, packages.front());
  }
  if (scenarios.size() > 1) {
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      auto c = open_output(dir / ("cdf_" + scenarios[i].label + ".csv"));
      write_cdf_csv(c, cdfs[i]);
      auto p = open_output(dir / ("cell_packages_" + scenarios[i].label + ".csv"));
      write_cell_packages_csv(p, packages[i]);
    }
  }
  for (const auto& s : stats) {
    err << s.scenario_label << ": mean " << s.mean_rate << " bit/s, p5 " << s.percentiles.at(5)
        << " bit/s over " << s.sample_count << " samples\n";
  }
  return kOk;
}

// ---- plan ---------------------------------------------------------------

struct PlanOptions {
  CommonOptions common;
  double rate = 0.0;
  double snr = 0.0;
  double speed = 0.0;
};

int plan(const PlanOptions& opts, std::ostream& out) {
  const SimConfig config = load(opts.common);
  const RbPlan p = plan_rb(opts.rate, opts.snr, opts.speed, config.linkrate);
  nlohmann::ordered_json j;
  j["required_rate_bps"] = p.required_rate;
  j["snr_db"] = p.snr;
  j["speed_mps"] = p.speed;
  j["rb_rate_bps"] = p.rb_rate;
  j["rb_needed"] = p.rb_needed;
  out << j.dump(2) << '\n';
  return kOk;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
      return kConfigError;
    case ErrorKind::parse:
    case ErrorKind::validation:
    case ErrorKind::lookup:
    case ErrorKind::infeasible:
      return kDataError;
    case ErrorKind::integrity:
      break;
  }
  return kInternalError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Car-to-cloud LTE uplink traffic simulator"};
  app.require_subcommand(1);

  GenTracesOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-traces", "Generate synthetic vehicle traces");
  add_common(*gen_cmd, gen.common);
  gen_cmd->add_option("--out", gen.out_path, "Trace CSV to write")->required();

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the uplink model over a trace file");
  add_common(*sim_cmd, sim.common);
  sim_cmd->add_option("--traces", sim.traces_path, "Trace CSV, or SUMO FCD XML (.xml)")->required();
  sim_cmd->add_option("--stations", sim.stations_path, "Station CSV")->required();
  sim_cmd->add_option("--out-dir", sim.out_dir, "Directory for results.csv and summary.json")
      ->required();

  AnalyzeOptions ana;
  auto* ana_cmd = app.add_subcommand("analyze", "Rate statistics, CDFs and package counts");
  add_common(*ana_cmd, ana.common);
  ana_cmd->add_option("results", ana.inputs, "results.csv files, optionally as label=path")
      ->required();
  ana_cmd->add_option("--out-dir", ana.out_dir, "Directory for stats.json and the CSV reports")
      ->required();

  PlanOptions pl;
  auto* plan_cmd = app.add_subcommand("plan", "Resource blocks needed for a guaranteed rate");
  add_common(*plan_cmd, pl.common);
  plan_cmd->add_option("--rate", pl.rate, "Required rate, bit/s")->required();
  plan_cmd->add_option("--snr", pl.snr, "Link SNR, dB")->required();
  plan_cmd->add_option("--speed", pl.speed, "Vehicle speed, m/s")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kConfigError;
  }

  try {
    if (gen_cmd->parsed()) return gen_traces(gen, err);
    if (sim_cmd->parsed()) return simulate(sim, err);
    if (ana_cmd->parsed()) return analyze(ana, err);
    return plan(pl, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace c2c::cli
