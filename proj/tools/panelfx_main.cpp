// Command line front end for the panelfx library: validate and aggregate
// traffic panels, fit the panel estimators, run the specification tests, and
// drive the simulation harness. Exit codes: 0 success, 1 usage, 2 bad data,
// 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "panelfx/panelfx.hpp"

namespace {

using namespace panelfx;

double alpha_from_env() {
  const char* raw = std::getenv("PANELFX_ALPHA");
  if (!raw) return 0.05;
  char* end = nullptr;
  const double alpha = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(alpha > 0.0 && alpha < 1.0))
    throw CLI::ValidationError("PANELFX_ALPHA",
                               "must be a number in (0, 1), got '" + std::string(raw) + "'");
  return alpha;
}

// Writes to --out when given, stdout otherwise.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) raise(errc::parse_error, "cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

Device parse_device(const std::string& name) {
  if (name == "mobile") return Device::mobile;
  if (name == "desktop") return Device::desktop;
  throw CLI::ValidationError("--device", "must be mobile or desktop");
}

Level parse_level(const std::string& name) {
  if (name == "website") return Level::website;
  if (name == "category") return Level::category;
  throw CLI::ValidationError("--level", "must be website or category");
}

// Category map for an ingested corpus: an explicit --map file wins, the
// ticker column embedded in the data is the fallback.
std::optional<CategoryMap> resolve_map(const IngestResult& corpus,
                                       const std::string& map_path) {
  if (!map_path.empty()) return load_category_map_file(map_path);
  if (!corpus.map.assignments.empty()) return corpus.map;
  return std::nullopt;
}

CategoryMap require_map(const IngestResult& corpus, const std::string& map_path) {
  const auto map = resolve_map(corpus, map_path);
  if (!map)
    raise(errc::unmapped_entity,
          "no category assignments: pass --map or use a corpus with a ticker column");
  return *map;
}

// Simulation settings file: one `key = value` per line, # starts a comment.
// desktop_-prefixed keys override the base values for the desktop stream.
struct SimFileConfig {
  SimConfig mobile;
  SimConfig desktop;
  std::size_t categories = 0;
};

SimFileConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::parse_error, "cannot open '" + path + "' for reading");

  std::map<std::string, std::string> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      raise(errc::invalid_config,
            path + " line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      raise(errc::invalid_config,
            path + " line " + std::to_string(line_no) + ": empty key or value");
    if (!raw.emplace(key, value).second)
      raise(errc::invalid_config,
            path + " line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }

  const auto as_double = [&](const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
      raise(errc::invalid_config, "key '" + key + "': cannot parse '" + value + "'");
    return v;
  };
  const auto as_u64 = [&](const std::string& key, const std::string& value) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
      raise(errc::invalid_config, "key '" + key + "': cannot parse '" + value + "'");
    return static_cast<std::uint64_t>(v);
  };

  SimFileConfig out;
  // Base pass first so desktop overrides see the final base values.
  for (const bool desktop_pass : {false, true}) {
    for (const auto& [key, value] : raw) {
      const bool is_desktop = key.rfind("desktop_", 0) == 0;
      if (is_desktop != desktop_pass) continue;
      const std::string base_key = is_desktop ? key.substr(8) : key;
      SimConfig& target = is_desktop ? out.desktop : out.mobile;

      if (base_key == "delta") target.delta = as_double(key, value);
      else if (base_key == "sigma_u") target.sigma_u = as_double(key, value);
      else if (base_key == "sigma_e") target.sigma_e = as_double(key, value);
      else if (base_key == "rho") target.rho = as_double(key, value);
      else if (base_key == "regressor_low") target.regressor_low = as_double(key, value);
      else if (base_key == "regressor_high") target.regressor_high = as_double(key, value);
      else if (base_key == "seed") target.seed = as_u64(key, value);
      else if (!is_desktop && base_key == "n_entities")
        out.mobile.n_entities = static_cast<std::size_t>(as_u64(key, value));
      else if (!is_desktop && base_key == "periods")
        out.mobile.periods = static_cast<std::size_t>(as_u64(key, value));
      else if (!is_desktop && base_key == "categories")
        out.categories = static_cast<std::size_t>(as_u64(key, value));
      else
        raise(errc::invalid_config, "unknown key '" + key + "'");
    }
    if (!desktop_pass) {
      out.desktop = out.mobile;
      out.desktop.seed = out.mobile.seed + 1;  // default offset; desktop_seed overrides
    }
  }
  if (out.categories > default_ticker_definitions().size())
    raise(errc::invalid_config, "categories cannot exceed " +
                                    std::to_string(default_ticker_definitions().size()));
  validate(out.mobile);
  validate(out.desktop);
  if (out.desktop.n_entities != out.mobile.n_entities ||
      out.desktop.periods != out.mobile.periods)
    raise(errc::invalid_config, "desktop overrides cannot change the panel shape");
  return out;
}

std::string site_domain(std::size_t index) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "site%05zu.example", index + 1);
  return buf;
}

// Simulated corpus in the traffic schema: the mobile stream fills the mobile
// columns, the desktop stream the desktop ones, and the first `categories`
// tickers are assigned round robin when requested.
std::pair<PanelDataset, CategoryMap> simulate_corpus(const SimFileConfig& config,
                                                     bool mobile, bool desktop) {
  std::vector<Observation> records;
  CategoryMap map;
  const std::size_t n = config.mobile.n_entities;
  const std::size_t t = config.mobile.periods;

  std::vector<Observation> merged(n * t);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < t; ++s) {
      merged[i * t + s].entity_id = site_domain(i);
      merged[i * t + s].time_id = static_cast<std::int64_t>(s + 1);
    }

  const auto blend = [&](const SimConfig& base, const char* share, const char* bounce) {
    SimConfig named = base;
    named.regressor_name = share;
    named.response_name = bounce;
    const PanelDataset panel = generate_panel(named);
    // generate_panel orders entities e00001..; rows are (entity, time) sorted,
    // which matches the merged layout index (i * t + s).
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t s = 0; s < t; ++s) {
        const Observation& row = panel.rows[i * t + s];
        merged[i * t + s].values[share] = row.values.at(share);
        merged[i * t + s].values[bounce] = row.values.at(bounce);
      }
  };
  if (mobile) blend(config.mobile, "mobile_share", "mobile_bounce");
  if (desktop) blend(config.desktop, "desktop_share", "desktop_bounce");

  if (config.categories > 0) {
    std::vector<std::string> tickers;
    for (const auto& [ticker, unused] : default_ticker_definitions())
      tickers.push_back(ticker);
    for (std::size_t i = 0; i < n; ++i)
      map.assignments[site_domain(i)] = tickers[i % config.categories];
  }
  return {build_panel(std::move(merged)), map};
}

int run_validate(const std::string& input, const std::string& format, OutputTarget& target) {
  const IngestResult corpus = ingest_csv_file(input);
  const BalanceReport report = balance_report(corpus.panel);
  std::ostream& out = target.stream();
  if (format == "json") {
    out << jsonio::dump(jsonio::to_json(report));
  } else if (format == "csv") {
    out << "n_entities,n_times,n_rows,time_min,time_max,min_group_size,max_group_size,"
           "mean_group_size,balanced\n"
        << report.n_entities << ',' << report.n_times << ',' << report.n_rows << ','
        << report.time_min << ',' << report.time_max << ',' << report.min_group_size << ','
        << report.max_group_size << ',' << detail::format_double(report.mean_group_size) << ','
        << (report.balanced ? 1 : 0) << '\n';
  } else {
    out << "entities      " << report.n_entities << "\n"
        << "times         " << report.n_times << " (" << report.time_min << ".."
        << report.time_max << ")\n"
        << "rows          " << report.n_rows << "\n"
        << "group sizes   min " << report.min_group_size << ", max " << report.max_group_size
        << ", mean " << format_fixed(report.mean_group_size, 3) << "\n"
        << "balanced      " << (report.balanced ? "yes" : "no") << "\n"
        << "mapped        " << corpus.map.assignments.size() << " of "
        << report.n_entities << " entities\n";
  }
  return 0;
}

int run_aggregate(const std::string& input, const std::string& map_path,
                  OutputTarget& target) {
  const IngestResult corpus = ingest_csv_file(input);
  const CategoryMap map = require_map(corpus, map_path);
  const PanelDataset aggregated = aggregate_by_category(corpus.panel, map);
  CategoryMap identity;
  for (const auto& entity : aggregated.entities) identity.assignments[entity] = entity;
  emit_csv(aggregated, identity, target.stream());
  return 0;
}

int run_fit(const std::string& input, const std::string& model, Device device, Level level,
            const std::string& map_path, const std::string& format, OutputTarget& target) {
  const IngestResult corpus = ingest_csv_file(input);
  PanelDataset panel = corpus.panel;
  if (level == Level::category)
    panel = aggregate_by_category(corpus.panel, require_map(corpus, map_path));
  const std::string response = bounce_variable(device);
  const std::string regressor = share_variable(device);
  std::ostream& out = target.stream();

  jsonio::json j;
  std::ostringstream table;
  if (model == "pooled") {
    const RegressionFit fit = pooled_ols(panel, response, regressor);
    j = jsonio::to_json(fit, response, regressor);
    render::fit_table(table, "pooled regression", fit.coefficients[1], fit.ci_low[1],
                      fit.ci_high[1], fit.p_values[1], fit.n_obs, fit.r_squared,
                      fit.adj_r_squared);
  } else if (model == "fe") {
    const FixedEffectsFit fit = fixed_effects_within(panel, response, regressor);
    j = jsonio::to_json(fit);
    render::fit_table(table, "fixed effects (within) regression", fit.delta, fit.ci_low,
                      fit.ci_high, fit.p_value, fit.n_obs, fit.r_squared_within,
                      fit.adj_r_squared);
  } else if (model == "re") {
    const RandomEffectsFit fit = random_effects_gls(panel, response, regressor);
    j = jsonio::to_json(fit);
    table << "random effects (GLS) regression\n"
          << "  slope        " << format_fixed(fit.delta, 2) << "  ["
          << format_fixed(fit.ci_low, 2) << ", " << format_fixed(fit.ci_high, 2) << "]  p "
          << format_p_value(fit.p_value) << "\n"
          << "  observations " << fit.n_obs << "\n"
          << "  sigma2_e     " << detail::format_double(fit.sigma2_e) << "\n"
          << "  sigma2_u     " << detail::format_double(fit.sigma2_u)
          << (fit.sigma2_u_clamped ? "  (clamped at 0)" : "") << "\n";
  } else {
    throw CLI::ValidationError("--model", "must be pooled, fe, or re");
  }

  if (format == "json") {
    j["device"] = device_name(device);
    j["level"] = level_name(level);
    out << jsonio::dump(j);
  } else if (format == "csv") {
    out << "model,device,level,delta,std_error,p_value,ci_low,ci_high,n_obs\n"
        << j["model"].get<std::string>() << ',' << device_name(device) << ','
        << level_name(level) << ',' << detail::format_double(j["delta"].get<double>()) << ','
        << detail::format_double(j["std_error"].get<double>()) << ','
        << detail::format_double(j["p_value"].get<double>()) << ','
        << detail::format_double(j["ci_low"].get<double>()) << ','
        << detail::format_double(j["ci_high"].get<double>()) << ','
        << j["n_obs"].get<std::size_t>() << '\n';
  } else {
    out << "=== " << device_name(device) << " / " << level_name(level) << " ===\n"
        << table.str();
  }
  return 0;
}

int run_tests_cmd(const std::string& input, Device device, Level level,
                  const std::string& map_path, const std::string& format, double alpha,
                  OutputTarget& target) {
  const IngestResult corpus = ingest_csv_file(input);
  PanelDataset panel = corpus.panel;
  if (level == Level::category)
    panel = aggregate_by_category(corpus.panel, require_map(corpus, map_path));
  const std::string response = bounce_variable(device);
  const std::string regressor = share_variable(device);
  const ModelSelection selection = select_model(panel, response, regressor, alpha);
  std::ostream& out = target.stream();

  if (format == "json") {
    jsonio::json j{{"device", device_name(device)},
                   {"level", level_name(level)},
                   {"alpha", alpha},
                   {"breusch_pagan", jsonio::to_json(selection.bp)},
                   {"hausman", selection.hausman_result
                                   ? jsonio::to_json(*selection.hausman_result)
                                   : jsonio::json(nullptr)},
                   {"chosen_model", model_name(selection.chosen)}};
    out << jsonio::dump(j);
  } else if (format == "csv") {
    out << "test,statistic,dof,p_value,reject_null\n";
    out << "breusch_pagan," << detail::format_double(selection.bp.statistic) << ",1,"
        << detail::format_double(selection.bp.p_value) << ','
        << (selection.bp.reject_null ? 1 : 0) << '\n';
    if (selection.hausman_result)
      out << "hausman," << detail::format_double(selection.hausman_result->statistic) << ",1,"
          << detail::format_double(selection.hausman_result->p_value) << ','
          << (selection.hausman_result->reject_null ? 1 : 0) << '\n';
  } else {
    out << "=== " << device_name(device) << " / " << level_name(level) << " ===\n";
    render::spec_test_line(out, selection.bp);
    if (selection.hausman_result)
      render::spec_test_line(out, *selection.hausman_result);
    else
      out << "  Hausman: not run (pooled model kept)\n";
    out << "  chosen model: " << model_name(selection.chosen) << "\n";
  }
  return 0;
}

int run_slopes(const std::string& input, const std::string& device, Level level,
               const std::string& map_path, const std::string& format, OutputTarget& target) {
  const IngestResult corpus = ingest_csv_file(input);
  PanelDataset panel = corpus.panel;
  if (level == Level::category)
    panel = aggregate_by_category(corpus.panel, require_map(corpus, map_path));

  const bool want_mobile = device == "mobile" || device == "both";
  const bool want_desktop = device == "desktop" || device == "both";
  if (!want_mobile && !want_desktop)
    throw CLI::ValidationError("--device", "must be mobile, desktop, or both");

  std::vector<EntitySlope> mobile, desktop;
  if (want_mobile) mobile = entity_slopes(panel, "mobile_bounce", "mobile_share");
  if (want_desktop) desktop = entity_slopes(panel, "desktop_bounce", "desktop_share");
  if (!want_mobile) mobile.assign(desktop.size(), EntitySlope{});
  if (!want_desktop) desktop.assign(mobile.size(), EntitySlope{});

  std::ostream& out = target.stream();
  if (format == "json") {
    jsonio::json j{{"level", level_name(level)}};
    if (want_mobile) j["mobile"] = jsonio::to_json(mobile);
    if (want_desktop) j["desktop"] = jsonio::to_json(desktop);
    out << jsonio::dump(j);
  } else if (want_mobile && want_desktop) {
    render::slopes_csv(out, mobile, desktop);
  } else {
    const auto& slopes = want_mobile ? mobile : desktop;
    out << "entity," << device << "_slope," << device << "_degenerate\n";
    for (const auto& s : slopes)
      out << detail::quote_csv_field(s.entity) << ',' << detail::format_double(s.slope) << ','
          << (s.degenerate ? 1 : 0) << '\n';
  }
  return 0;
}

int run_report(const std::string& input, const std::string& map_path,
               const std::string& format, double alpha, OutputTarget& target) {
  const IngestResult corpus = ingest_csv_file(input);
  const CategoryMap map = require_map(corpus, map_path);
  const std::vector<PipelineReport> reports = run_all_pipelines(corpus.panel, map, alpha);
  std::ostream& out = target.stream();

  if (format == "json") {
    out << jsonio::dump(jsonio::to_json(reports));
  } else if (format == "csv") {
    // Per-entity slope table from the website-level fits.
    const PipelineReport* mobile = nullptr;
    const PipelineReport* desktop = nullptr;
    for (const auto& r : reports) {
      if (r.level != Level::website) continue;
      (r.device == Device::mobile ? mobile : desktop) = &r;
    }
    render::slopes_csv(out, mobile->fe.slopes, desktop->fe.slopes);
  } else {
    for (const auto& report : reports) render::pipeline_table(out, report);
  }
  return 0;
}

int run_simulate(const std::string& config_path, const std::string& device,
                 OutputTarget& target) {
  const SimFileConfig config = load_sim_config(config_path);
  const bool mobile = device == "mobile" || device == "both";
  const bool desktop = device == "desktop" || device == "both";
  if (!mobile && !desktop)
    throw CLI::ValidationError("--device", "must be mobile, desktop, or both");
  const auto [panel, map] = simulate_corpus(config, mobile, desktop);
  emit_csv(panel, map, target.stream());
  return 0;
}

int run_montecarlo(const std::string& config_path, const std::string& study_name_arg,
                   std::size_t reps, const std::string& device, const std::string& format,
                   OutputTarget& target) {
  const SimFileConfig config = load_sim_config(config_path);
  if (device != "mobile" && device != "desktop")
    throw CLI::ValidationError("--device", "must be mobile or desktop");
  const SimConfig& chosen = device == "desktop" ? config.desktop : config.mobile;
  const MonteCarloSummary summary = monte_carlo(chosen, reps, parse_study(study_name_arg));
  std::ostream& out = target.stream();

  if (format == "json") {
    out << jsonio::dump(jsonio::to_json(summary));
  } else if (format == "csv") {
    out << "study,reps,mean_estimate,bias,rmse,ci_coverage,rejection_rate\n"
        << study_name(summary.study) << ',' << summary.reps << ','
        << detail::format_double(summary.mean_estimate) << ','
        << detail::format_double(summary.bias) << ',' << detail::format_double(summary.rmse)
        << ',' << detail::format_double(summary.ci_coverage) << ','
        << detail::format_double(summary.rejection_rate) << '\n';
  } else {
    out << "study           " << study_name(summary.study) << "\n"
        << "replications    " << summary.reps << "\n"
        << "mean estimate   " << detail::format_double(summary.mean_estimate) << "\n"
        << "bias            " << detail::format_double(summary.bias) << "\n"
        << "rmse            " << detail::format_double(summary.rmse) << "\n"
        << "ci coverage     " << detail::format_double(summary.ci_coverage) << "\n"
        << "rejection rate  " << detail::format_double(summary.rejection_rate) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"panel regression toolkit for entity/time traffic data"};
  app.require_subcommand(1);

  std::string input, map_path, out_path, config_path;
  std::string format = "table";
  std::string model = "fe";
  std::string device = "mobile";
  std::string both_device = "both";  // slopes and simulate default to both streams
  std::string level = "website";
  std::string study = "fe_slope";
  std::size_t reps = 100;

  const auto add_common = [&](CLI::App* cmd, bool with_input) {
    if (with_input) cmd->add_option("input", input, "input CSV file")->required();
    cmd->add_option("--format", format, "output format: json, csv, or table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    cmd->add_option("--out", out_path, "write output to this file instead of stdout");
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "ingest a corpus and report shape");
  add_common(validate_cmd, true);

  CLI::App* aggregate_cmd =
      app.add_subcommand("aggregate", "collapse websites into category panels");
  add_common(aggregate_cmd, true);
  aggregate_cmd->add_option("--map", map_path, "domain,ticker assignment file");

  CLI::App* fit_cmd = app.add_subcommand("fit", "fit one panel estimator");
  add_common(fit_cmd, true);
  fit_cmd->add_option("--model", model, "pooled, fe, or re")
      ->check(CLI::IsMember({"pooled", "fe", "re"}));
  fit_cmd->add_option("--device", device, "mobile or desktop");
  fit_cmd->add_option("--level", level, "website or category");
  fit_cmd->add_option("--map", map_path, "domain,ticker assignment file");

  CLI::App* tests_cmd =
      app.add_subcommand("tests", "run the specification tests and pick a model");
  add_common(tests_cmd, true);
  tests_cmd->add_option("--device", device, "mobile or desktop");
  tests_cmd->add_option("--level", level, "website or category");
  tests_cmd->add_option("--map", map_path, "domain,ticker assignment file");

  CLI::App* slopes_cmd = app.add_subcommand("slopes", "per-entity slope table");
  add_common(slopes_cmd, true);
  slopes_cmd->add_option("--device", both_device, "mobile, desktop, or both");
  slopes_cmd->add_option("--level", level, "website or category");
  slopes_cmd->add_option("--map", map_path, "domain,ticker assignment file");

  CLI::App* report_cmd =
      app.add_subcommand("report", "full pipeline over both devices and levels");
  add_common(report_cmd, true);
  report_cmd->add_option("--map", map_path, "domain,ticker assignment file");

  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "generate a synthetic corpus in the traffic schema");
  add_common(simulate_cmd, false);
  simulate_cmd->add_option("--config", config_path, "simulation settings file")->required();
  simulate_cmd->add_option("--device", both_device, "mobile, desktop, or both");

  CLI::App* mc_cmd = app.add_subcommand("montecarlo", "replicate a study and summarize it");
  add_common(mc_cmd, false);
  mc_cmd->add_option("--config", config_path, "simulation settings file")->required();
  mc_cmd->add_option("--study", study,
                     "fe_slope, re_slope, pooled_slope, bp_test, or hausman_test");
  mc_cmd->add_option("--reps", reps, "number of replications")->check(CLI::PositiveNumber);
  mc_cmd->add_option("--device", device, "mobile or desktop parameter set");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const double alpha = alpha_from_env();
    OutputTarget target(out_path);
    if (validate_cmd->parsed()) return run_validate(input, format, target);
    if (aggregate_cmd->parsed()) return run_aggregate(input, map_path, target);
    if (fit_cmd->parsed())
      return run_fit(input, model, parse_device(device), parse_level(level), map_path, format,
                     target);
    if (tests_cmd->parsed())
      return run_tests_cmd(input, parse_device(device), parse_level(level), map_path, format,
                           alpha, target);
    if (slopes_cmd->parsed())
      return run_slopes(input, both_device, parse_level(level), map_path, format, target);
    if (report_cmd->parsed()) return run_report(input, map_path, format, alpha, target);
    if (simulate_cmd->parsed()) return run_simulate(config_path, both_device, target);
    if (mc_cmd->parsed())
      return run_montecarlo(config_path, study, reps, device, format, target);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const panelfx::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.cls()) {
      case error_class::usage: return 1;
      case error_class::data: return 2;
      case error_class::numeric: return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
