#include "xct/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "xct/cache_sim.hpp"
#include "xct/log_parser.hpp"
#include "xct/power_law.hpp"
#include "xct/report.hpp"
#include "xct/stats_engine.hpp"
#include "xct/units.hpp"
#include "xct/workload_synth.hpp"

namespace xct::cli {

namespace {

using Json = nlohmann::ordered_json;

// Raised for bad input data or I/O trouble; maps to kExitData.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Columns {
  const char* command;
  const char* table;
  std::vector<std::string> columns;
};

const std::vector<Columns>& schemas() {
  static const std::vector<Columns> all = {
      {"analyze reads", "summary",
       {"total_read_ops", "unresolved_readv_ops", "distinct_files", "size_samples",
        "total_bytes_read", "mean_read_size", "mean_offset", "mean_reads_per_file"}},
      {"analyze reads", "per_file", {"path", "read_ops"}},
      {"analyze reads", "read_count_histogram", {"bin_lo", "bin_hi", "files"}},
      {"analyze lifetimes", "summary",
       {"tau_hours", "lifetimes", "incomplete", "orphan_closes", "mean_hours"}},
      {"analyze lifetimes", "histogram", {"bin_lo_hours", "bin_hi_hours", "lifetimes"}},
      {"analyze lifetimes", "quantiles", {"threshold_hours", "fraction_below"}},
      {"analyze transfers", "summary", {"transfers", "total_bytes"}},
      {"analyze transfers", "per_day", {"day", "bytes"}},
      {"analyze sweep-tau", "thresholds", {"tau_days", "tau_hours", "lifetimes", "mean_hours"}},
      {"analyze sweep-tau", "summary", {"grand_mean_hours"}},
      {"fit-powerlaw", "summary", {"a", "b", "eps", "rmse", "iterations", "converged", "points"}},
      {"fit-powerlaw", "points", {"x", "y", "fitted"}},
      {"simulate hit-rate", "hit_rate",
       {"capacity_bytes", "hit_rate", "hits", "misses", "total_reads", "eviction_events",
        "bytes_evicted"}},
      {"simulate content-model", "series",
       {"step", "hit_rate", "size_param", "rate_param", "increment_bytes", "cache_bytes",
        "evicted_bytes_cumulative"}},
      {"simulate content-model", "summary", {"capacity_bytes", "steps", "fill_step"}},
      {"simulate fill-time", "fill_time", {"capacity_bytes", "filled", "fill_seconds", "fill_days"}},
      {"oracle lru", "hit_rate",
       {"capacity_bytes", "hit_rate", "hits", "misses", "total_reads", "eviction_events",
        "bytes_evicted"}},
  };
  return all;
}

Table make_table(std::string_view command, std::string_view name, bool summary = false) {
  for (const auto& s : schemas()) {
    if (command == s.command && name == s.table) return Table{s.table, s.columns, {}, summary};
  }
  throw std::logic_error("no schema for table");
}

Cell opt_real(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

double hours(Duration d) { return static_cast<double>(d.count()) / 3600.0; }
double days_of(Duration d) { return static_cast<double>(d.count()) / 86400.0; }

void configure_logging() {
  auto logger = spdlog::get("xct");
  if (!logger) {
    logger = spdlog::stderr_color_mt("xct");
    spdlog::set_default_logger(logger);
  }
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("XCT_LOG_LEVEL");
  const std::string level = env ? env : "warn";
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::set_level(spdlog::level::warn);
  }
}

struct InputOptions {
  std::string logs;
  std::string days;
  bool tolerant = false;
};

struct OutputOptions {
  std::string out;
  std::string format = "csv";
};

void add_input(CLI::App* app, InputOptions& in) {
  app->add_option("--logs", in.logs, "Directory of xrootd-YYYYMMDD.log[.gz] files")->required();
  app->add_option("--days", in.days, "Restrict to YYYY-MM-DD:YYYY-MM-DD");
  app->add_flag("--tolerant", in.tolerant, "Skip unreadable log files");
}

void add_output(CLI::App* app, OutputOptions& out) {
  app->add_option("--out", out.out, "Output file")->required();
  app->add_option("--format", out.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

std::vector<TraceEvent> load_events(const InputOptions& in) {
  std::optional<DayRange> days;
  TimeRange range = TimeRange::everything();
  if (!in.days.empty()) {
    days = parse_day_range(in.days);
    range = {days->begin(), days->end()};
  }
  std::vector<std::filesystem::path> files;
  try {
    files = list_log_files(in.logs, days);
  } catch (const IoError& e) {
    throw DataError(e.what());
  }
  if (files.empty()) spdlog::warn("no log files found in {}", in.logs);
  ParsedLogs parsed;
  try {
    parsed = parse_logs(files, range, ParseOptions{in.tolerant, 0});
  } catch (const IoError& e) {
    throw DataError(e.what());
  }
  const auto& r = parsed.report;
  spdlog::info("parsed {} files, {} lines, {} events, {} bytes", r.files_parsed, r.lines_total,
               parsed.events.size(), r.byte_volume_scanned);
  if (r.malformed) spdlog::warn("{} malformed lines skipped", r.malformed);
  if (r.readv_unresolved) spdlog::warn("{} vector reads could not be resolved", r.readv_unresolved);
  if (r.field_warnings) spdlog::warn("{} extra size@offset fields ignored", r.field_warnings);
  for (const auto& f : r.failed_files) spdlog::warn("skipped unreadable file {}", f);
  return std::move(parsed.events);
}

OutputFormat format_of(const OutputOptions& o) {
  return o.format == "json" ? OutputFormat::json : OutputFormat::csv;
}

// Flags given on the command line, excluding output locations, so identical
// runs into different directories produce identical files.
Json collect_flags(const CLI::App* app) {
  Json flags = Json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->count() == 0) continue;
    const std::string name = opt->get_name();
    if (name == "--out" || name == "--help" || name == "-h") continue;
    const auto& results = opt->results();
    std::string value;
    for (std::size_t i = 0; i < results.size(); ++i) value += (i ? "," : "") + results[i];
    flags[name] = value;
  }
  return flags;
}

Json make_meta(const std::string& command, const CLI::App* app, std::optional<std::uint64_t> seed) {
  Json meta;
  meta["tool"] = "xct";
  meta["version"] = kVersion;
  meta["command"] = command;
  meta["seed"] = seed ? Json(*seed) : Json(nullptr);
  meta["flags"] = collect_flags(app);
  return meta;
}

Report reads_report(std::span<const TraceEvent> events) {
  const ReadStats stats = count_reads_per_file(events);
  Table summary = make_table("analyze reads", "summary", true);
  summary.add_row({stats.total_read_ops, stats.unresolved_ops,
                   static_cast<std::uint64_t>(stats.per_file_counts.size()), stats.size_samples,
                   stats.total_bytes_read, opt_real(stats.mean_read_size()),
                   opt_real(stats.mean_offset()), opt_real(stats.mean_reads_per_file())});
  Table per_file = make_table("analyze reads", "per_file");
  std::vector<double> counts;
  for (const auto& [path, n] : stats.per_file_counts) {
    per_file.add_row({path.value, n});
    counts.push_back(static_cast<double>(n));
  }
  Table hist_table = make_table("analyze reads", "read_count_histogram");
  const auto edges = default_read_count_edges();
  const Histogram hist = build_histogram(counts, edges);
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    hist_table.add_row({hist.edges[i], hist.edges[i + 1], hist.counts[i]});
  }
  return {{summary, per_file, hist_table}};
}

Report lifetimes_report(std::span<const TraceEvent> events, Duration tau,
                        const std::vector<Duration>& thresholds) {
  const auto seg = segment_lifetimes(events, tau);
  const auto incomplete = std::count_if(seg.records.begin(), seg.records.end(),
                                        [](const LifetimeRecord& r) { return !r.complete; });
  Table summary = make_table("analyze lifetimes", "summary", true);
  summary.add_row({hours(tau), static_cast<std::uint64_t>(seg.records.size()),
                   static_cast<std::uint64_t>(incomplete), seg.orphan_closes,
                   opt_real(mean_lifetime_hours(seg.records))});

  std::vector<double> lengths;
  lengths.reserve(seg.records.size());
  for (const auto& r : seg.records) lengths.push_back(r.hours());
  const auto edges = default_lifetime_edges();
  const Histogram hist = build_histogram(lengths, edges);
  Table hist_table = make_table("analyze lifetimes", "histogram");
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    hist_table.add_row({hist.edges[i], hist.edges[i + 1], hist.counts[i]});
  }

  Table quantiles = make_table("analyze lifetimes", "quantiles");
  if (seg.records.empty()) {
    throw DataError("no file lifetimes in the input; quantile report is undefined");
  }
  const auto fractions = lifetime_quantile_report(seg.records, thresholds);
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    quantiles.add_row({hours(thresholds[i]), fractions[i]});
  }
  return {{summary, hist_table, quantiles}};
}

Report transfers_report(std::span<const TraceEvent> events) {
  std::uint64_t n = 0;
  for (const auto& e : events) n += std::holds_alternative<TransferEvent>(e) ? 1 : 0;
  Table summary = make_table("analyze transfers", "summary", true);
  summary.add_row({n, transfer_totals(events)});
  Table per_day = make_table("analyze transfers", "per_day");
  for (const auto& [day, bytes] : transfer_totals_by_day(events)) per_day.add_row({format_day(day), bytes});
  return {{summary, per_day}};
}

Report sweep_report(std::span<const TraceEvent> events, const std::vector<Duration>& taus) {
  const auto sweep = threshold_sweep(events, taus);
  Table table = make_table("analyze sweep-tau", "thresholds");
  for (const auto& p : sweep.points) {
    table.add_row({days_of(p.threshold), hours(p.threshold),
                   static_cast<std::uint64_t>(p.lifetimes), opt_real(p.mean_hours)});
  }
  Table summary = make_table("analyze sweep-tau", "summary", true);
  summary.add_row({opt_real(sweep.grand_mean_hours)});
  return {{table, summary}};
}

Report sweep_table(std::string_view command, const std::vector<SweepPoint>& points) {
  Table table = make_table(command, "hit_rate");
  for (const auto& p : points) {
    table.add_row({p.capacity, opt_real(p.result.hit_rate()), p.result.hits, p.result.misses,
                   p.result.total_reads, p.result.eviction_events, p.result.bytes_evicted});
  }
  return {{table}};
}

std::vector<std::pair<double, double>> read_points(const std::string& file) {
  std::ifstream in{file};
  if (!in) throw DataError("cannot open " + file);
  std::vector<std::pair<double, double>> points;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DataError("line " + std::to_string(lineno) + ": expected x,y");
    char* end_x = nullptr;
    char* end_y = nullptr;
    const std::string xs = line.substr(0, comma), ys = line.substr(comma + 1);
    const double x = std::strtod(xs.c_str(), &end_x);
    const double y = std::strtod(ys.c_str(), &end_y);
    if (end_x == xs.c_str() || end_y == ys.c_str()) {
      if (lineno == 1) continue;  // header
      throw DataError("line " + std::to_string(lineno) + ": not numeric");
    }
    points.emplace_back(x, y);
  }
  return points;
}

Report fit_report(const std::vector<std::pair<double, double>>& points) {
  Eigen::ArrayXd x(static_cast<Eigen::Index>(points.size()));
  Eigen::ArrayXd y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x(i) = points[static_cast<std::size_t>(i)].first;
    y(i) = points[static_cast<std::size_t>(i)].second;
  }
  PowerLawFit<double> fit;
  try {
    fit = fit_power_law(x, y);
  } catch (const DegenerateInput& e) {
    throw DataError(std::string{"cannot fit: "} + e.what());
  }
  if (!fit.converged) spdlog::warn("power-law fit did not converge; reporting best parameters");
  Table summary = make_table("fit-powerlaw", "summary", true);
  summary.add_row({fit.params.a, fit.params.b, fit.params.eps, fit.rmse,
                   static_cast<std::int64_t>(fit.iterations), fit.converged,
                   static_cast<std::uint64_t>(points.size())});
  Table table = make_table("fit-powerlaw", "points");
  const Eigen::ArrayXd fitted = power_law(x, fit.params);
  for (Eigen::Index i = 0; i < x.size(); ++i) table.add_row({x(i), y(i), fitted(i)});
  return {{summary, table}};
}

Report content_report(const ContentModelParams& params) {
  const auto series = content_model(params);
  Table table = make_table("simulate content-model", "series");
  for (const auto& s : series) {
    table.add_row({static_cast<std::uint64_t>(s.step), s.hit_rate, s.size_param, s.rate_param,
                   s.increment, s.cache_bytes, s.evicted_cumulative});
  }
  Table summary = make_table("simulate content-model", "summary", true);
  const auto fill = content_fill_step(series, params.capacity);
  summary.add_row({params.capacity, static_cast<std::uint64_t>(params.steps),
                   fill ? Cell{static_cast<std::uint64_t>(*fill)} : Cell{}});
  return {{table, summary}};
}

Report fill_report(const std::vector<FillPoint>& points) {
  Table table = make_table("simulate fill-time", "fill_time");
  for (const auto& p : points) {
    if (p.fill_time) {
      table.add_row({p.capacity, true, static_cast<std::int64_t>(p.fill_time->count()),
                     days_of(*p.fill_time)});
    } else {
      table.add_row({p.capacity, false, Cell{}, Cell{}});
    }
  }
  return {{table}};
}

void emit(const Report& report, const Json& meta, const OutputOptions& o, std::ostream& out) {
  try {
    for (const auto& path : write_report(report, meta, o.out, format_of(o))) {
      spdlog::info("wrote {}", path.string());
    }
  } catch (const std::exception& e) {
    throw DataError(e.what());
  }
  (void)out;
}

}  // namespace

std::string schema_text() {
  std::ostringstream s;
  for (const auto& c : schemas()) {
    s << c.command << " [" << c.table << "]: ";
    for (std::size_t i = 0; i < c.columns.size(); ++i) s << (i ? "," : "") << c.columns[i];
    s << '\n';
  }
  s << "CSV: the first table listed for a command is written to --out, the others to "
       "<stem>.<table>.csv. JSON: {\"meta\":{...},\"data\":{summary fields..., <table>:[rows]}}\n";
  return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging();

  CLI::App app{"XRootD cache trace analysis and LRU cache simulation", "xct"};
  app.set_version_flag("--version", kVersion);
  bool show_schema = false;
  app.add_flag("--schema", show_schema, "Print the column layout of every output and exit");

  // generate
  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic daily log corpus");
  std::uint64_t gen_seed = 7;
  std::string gen_days, gen_out, gen_profile = "default";
  double gen_scale = 0.001;
  std::optional<std::size_t> gen_population;
  std::optional<double> gen_readv, gen_junk, gen_unresolved;
  bool gen_single_transfer = false;
  generate_cmd->add_option("--seed", gen_seed, "Random seed");
  generate_cmd->add_option("--days", gen_days, "YYYY-MM-DD:YYYY-MM-DD")->required();
  generate_cmd->add_option("--out", gen_out, "Output directory")->required();
  generate_cmd->add_option("--profile", gen_profile, "default or scaled")
      ->check(CLI::IsMember({"default", "scaled"}));
  generate_cmd->add_option("--scale", gen_scale, "Population scale for --profile scaled");
  generate_cmd->add_option("--population", gen_population, "Number of distinct files");
  generate_cmd->add_option("--readv-fraction", gen_readv, "Fraction of reads issued as readV");
  generate_cmd->add_option("--junk-rate", gen_junk, "Noise lines per event line");
  generate_cmd->add_option("--unresolved-rate", gen_unresolved, "Fraction of orphan readVs");
  generate_cmd->add_flag("--single-transfer", gen_single_transfer,
                         "Transfer each file only at its first lifetime");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Trace statistics");
  analyze_cmd->require_subcommand(1);
  InputOptions an_in;
  OutputOptions an_out;
  std::string an_tau = "1.2d", an_thresholds = "1h,5h,10h", an_taus = "1d:10d:1d";
  auto* reads_cmd = analyze_cmd->add_subcommand("reads", "Per-file read counts and read sizes");
  auto* lifetimes_cmd = analyze_cmd->add_subcommand("lifetimes", "File lifetime distribution");
  auto* transfers_cmd = analyze_cmd->add_subcommand("transfers", "Bytes transferred into the cache");
  auto* sweep_cmd = analyze_cmd->add_subcommand("sweep-tau", "Mean lifetime across thresholds");
  for (auto* c : {reads_cmd, lifetimes_cmd, transfers_cmd, sweep_cmd}) {
    add_input(c, an_in);
    add_output(c, an_out);
  }
  lifetimes_cmd->add_option("--tau", an_tau, "Lifetime gap threshold (e.g. 1.2d, 28.8h)");
  lifetimes_cmd->add_option("--thresholds", an_thresholds, "Quantile thresholds");
  sweep_cmd->add_option("--taus", an_taus, "Thresholds, start:stop:step or list");

  // fit-powerlaw
  auto* fit_cmd = app.add_subcommand("fit-powerlaw", "Fit a*x^b+eps to points or to the lifetime histogram");
  std::string fit_points, fit_tau = "1.2d";
  double fit_x_min = 0.0, fit_x_max = 24.0;
  InputOptions fit_in;
  OutputOptions fit_out;
  auto* points_opt = fit_cmd->add_option("--points", fit_points, "CSV of x,y");
  auto* logs_opt = fit_cmd->add_option("--logs", fit_in.logs, "Log directory (fits the lifetime histogram)");
  points_opt->excludes(logs_opt);
  fit_cmd->add_option("--days", fit_in.days, "Restrict to YYYY-MM-DD:YYYY-MM-DD");
  fit_cmd->add_flag("--tolerant", fit_in.tolerant, "Skip unreadable log files");
  fit_cmd->add_option("--tau", fit_tau, "Lifetime threshold for --logs");
  fit_cmd->add_option("--x-min", fit_x_min, "Lowest histogram bin centre (hours) to fit");
  fit_cmd->add_option("--x-max", fit_x_max, "Highest histogram bin centre (hours) to fit");
  add_output(fit_cmd, fit_out);

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "LRU cache simulation");
  simulate_cmd->require_subcommand(1);
  InputOptions sim_in;
  OutputOptions sim_out;
  std::string sim_capacities;
  auto* hit_cmd = simulate_cmd->add_subcommand("hit-rate", "Hit rate versus cache capacity");
  auto* fill_cmd = simulate_cmd->add_subcommand("fill-time", "Time to fill caches of several sizes");
  auto* content_cmd = simulate_cmd->add_subcommand("content-model", "Stochastic cache content model");
  for (auto* c : {hit_cmd, fill_cmd}) {
    add_input(c, sim_in);
    add_output(c, sim_out);
  }
  hit_cmd->add_option("--capacities", sim_capacities, "start:stop:step or list (default 40TB:60TB:2TB)");
  fill_cmd->add_option("--capacities", sim_capacities, "start:stop:step or list (default 40TB:280TB:40TB)");

  std::uint64_t cm_seed = 1;
  std::string cm_capacity = "40TB", cm_days, cm_param_range = "1.0:1.4";
  std::size_t cm_steps = 60, cm_param_count = 64;
  double cm_h0 = 0.1, cm_h_cap = 0.6, cm_access_rate = 7000.0, cm_file_size = 200'000'000.0;
  std::optional<double> cm_delta;
  bool cm_clamp = false;
  content_cmd->add_option("--seed", cm_seed, "Random seed");
  content_cmd->add_option("--capacity", cm_capacity, "Cache capacity");
  content_cmd->add_option("--steps", cm_steps, "Number of daily steps");
  auto* cm_days_opt = content_cmd->add_option("--days", cm_days, "Steps = days between start and end");
  cm_days_opt->excludes(content_cmd->get_option("--steps"));
  content_cmd->add_option("--h0", cm_h0, "Initial hit rate");
  content_cmd->add_option("--h-cap", cm_h_cap, "Hit-rate ceiling");
  content_cmd->add_option("--delta", cm_delta, "Hit-rate increment per step (default (h_cap-h0)/30)");
  content_cmd->add_option("--access-rate", cm_access_rate, "Accesses per step");
  content_cmd->add_option("--file-size", cm_file_size, "Mean file size in bytes");
  content_cmd->add_option("--param-range", cm_param_range, "lo:hi range of size/rate scalars");
  content_cmd->add_option("--param-count", cm_param_count, "Scalars per parameter array");
  content_cmd->add_flag("--clamp-negative", cm_clamp, "Clamp negative increments to zero");
  add_output(content_cmd, sim_out);

  // oracle (hidden)
  auto* oracle_cmd = app.add_subcommand("oracle", "Reference implementations");
  oracle_cmd->group("");
  oracle_cmd->require_subcommand(1);
  auto* oracle_lru_cmd = oracle_cmd->add_subcommand("lru", "Naive LRU hit-rate sweep");
  add_input(oracle_lru_cmd, sim_in);
  add_output(oracle_lru_cmd, sim_out);
  oracle_lru_cmd->add_option("--capacities", sim_capacities, "start:stop:step or list");

  std::vector<std::string> argv_store{"xct"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (show_schema) {
      out << schema_text();
      return kExitOk;
    }

    if (generate_cmd->parsed()) {
      WorkloadProfile profile = gen_profile == "scaled" ? scaled_cache_profile(gen_scale) : default_profile();
      if (gen_population) profile.file_population = *gen_population;
      if (gen_readv) profile.readv_fraction = *gen_readv;
      if (gen_junk) profile.junk_line_rate = *gen_junk;
      if (gen_unresolved) profile.unresolved_readv_rate = *gen_unresolved;
      if (gen_single_transfer) profile.retransfer_each_lifetime = false;
      const DayRange days = parse_day_range(gen_days);
      GeneratedCorpus corpus;
      try {
        corpus = generate(profile, gen_seed, days, gen_out);
      } catch (const InvalidProfile&) {
        throw;
      } catch (const std::runtime_error& e) {
        throw DataError(e.what());
      }
      out << "wrote " << corpus.files.size() << " log files with " << corpus.events.size()
          << " events to " << gen_out << '\n';
      return kExitOk;
    }

    if (analyze_cmd->parsed()) {
      const auto events = load_events(an_in);
      if (reads_cmd->parsed()) {
        emit(reads_report(events), make_meta("analyze reads", reads_cmd, std::nullopt), an_out, out);
      } else if (lifetimes_cmd->parsed()) {
        emit(lifetimes_report(events, parse_duration(an_tau), parse_duration_list(an_thresholds)),
             make_meta("analyze lifetimes", lifetimes_cmd, std::nullopt), an_out, out);
      } else if (transfers_cmd->parsed()) {
        emit(transfers_report(events), make_meta("analyze transfers", transfers_cmd, std::nullopt),
             an_out, out);
      } else {
        emit(sweep_report(events, parse_duration_list(an_taus)),
             make_meta("analyze sweep-tau", sweep_cmd, std::nullopt), an_out, out);
      }
      return kExitOk;
    }

    if (fit_cmd->parsed()) {
      std::vector<std::pair<double, double>> points;
      if (!fit_points.empty()) {
        points = read_points(fit_points);
      } else if (!fit_in.logs.empty()) {
        const auto events = load_events(fit_in);
        const auto seg = segment_lifetimes(events, parse_duration(fit_tau));
        std::vector<double> lengths;
        for (const auto& r : seg.records) lengths.push_back(r.hours());
        const auto hist = build_histogram(lengths, default_lifetime_edges());
        for (std::size_t i = 0; i < hist.counts.size(); ++i) {
          const double c = hist.center(i);
          if (c >= fit_x_min && c <= fit_x_max) points.emplace_back(c, static_cast<double>(hist.counts[i]));
        }
      } else {
        err << "fit-powerlaw needs --points or --logs\n" << fit_cmd->help();
        return kExitUsage;
      }
      emit(fit_report(points), make_meta("fit-powerlaw", fit_cmd, std::nullopt), fit_out, out);
      return kExitOk;
    }

    if (simulate_cmd->parsed() || oracle_cmd->parsed()) {
      if (content_cmd->parsed()) {
        const auto colon = cm_param_range.find(':');
        if (colon == std::string::npos) throw BadValue("--param-range needs lo:hi");
        const double lo = std::stod(cm_param_range.substr(0, colon));
        const double hi = std::stod(cm_param_range.substr(colon + 1));
        ContentModelParams params = default_content_params(cm_seed, cm_param_count, lo, hi);
        params.capacity = parse_bytes(cm_capacity);
        params.steps = cm_steps;
        if (!cm_days.empty()) {
          const DayRange r = parse_day_range(cm_days);
          params.steps = static_cast<std::size_t>((r.last - r.first).count());
        }
        params.h0 = cm_h0;
        params.h_cap = cm_h_cap;
        params.delta = cm_delta.value_or((cm_h_cap - cm_h0) / 30.0);
        params.access_rate = cm_access_rate;
        params.file_size = cm_file_size;
        params.clamp_negative_increments = cm_clamp;
        emit(content_report(params), make_meta("simulate content-model", content_cmd, cm_seed),
             sim_out, out);
        return kExitOk;
      }
      const bool fill = fill_cmd->parsed();
      const auto capacities = parse_byte_list(
          !sim_capacities.empty() ? sim_capacities : (fill ? "40TB:280TB:40TB" : "40TB:60TB:2TB"));
      const auto events = load_events(sim_in);
      if (fill) {
        emit(fill_report(fill_time(events, capacities)), make_meta("simulate fill-time", fill_cmd, std::nullopt),
             sim_out, out);
      } else if (hit_cmd->parsed()) {
        emit(sweep_table("simulate hit-rate", hit_rate_sweep(events, capacities)),
             make_meta("simulate hit-rate", hit_cmd, std::nullopt), sim_out, out);
      } else {
        std::vector<SweepPoint> points;
        for (const Bytes c : capacities) points.push_back({c, oracle_lru(events, c)});
        emit(sweep_table("oracle lru", points), make_meta("oracle lru", oracle_lru_cmd, std::nullopt),
             sim_out, out);
      }
      return kExitOk;
    }

    err << app.help();
    return kExitUsage;
  } catch (const EmptyInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const BadValue& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidProfile& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidCapacity& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    spdlog::error("{}", e.what());
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace xct::cli
