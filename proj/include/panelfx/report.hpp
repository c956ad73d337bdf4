#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "csv.hpp"
#include "errors.hpp"
#include "estimators.hpp"
#include "modelsel.hpp"
#include "panel.hpp"
#include "simulate.hpp"

namespace panelfx {

enum class Device { mobile, desktop };
enum class Level { website, category };

inline const char* device_name(Device d) {
  return d == Device::mobile ? "mobile" : "desktop";
}
inline const char* level_name(Level l) {
  return l == Level::website ? "website" : "category";
}

inline std::string share_variable(Device d) {
  return std::string(device_name(d)) + "_share";
}
inline std::string bounce_variable(Device d) {
  return std::string(device_name(d)) + "_bounce";
}

// Tiny p-values are displayed with the conventional floors; everything else
// gets three decimals. Full precision always stays in the numeric fields.
inline std::string format_p_value(double p) {
  if (p < 2.2e-16) return "< 2.2e-16";
  if (p < 1e-3) return "<0.001";
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.3f", p);
  return buf;
}

inline std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

struct SignAgreement {
  enum class Status { match, mismatch, degenerate };

  struct Entry {
    std::string entity;
    std::string category;
    double entity_slope = 0.0;
    double category_slope = 0.0;
    Status status = Status::match;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::size_t matches = 0;
  std::size_t mismatches = 0;
  std::size_t degenerate = 0;
  std::vector<Entry> entries;

  friend bool operator==(const SignAgreement&, const SignAgreement&) = default;
};

// Compares the sign of each entity's slope with the slope of its category.
// Entities or categories with a degenerate slope are counted separately
// rather than as agreements or disagreements. sign(0) counts as degenerate
// only via the flag; an exact zero slope without the flag matches only
// another exact zero.
inline SignAgreement sign_agreement(const std::vector<EntitySlope>& entity,
                                    const std::vector<EntitySlope>& category,
                                    const CategoryMap& map) {
  std::map<std::string, const EntitySlope*> by_category;
  for (const auto& slope : category) by_category.emplace(slope.entity, &slope);

  SignAgreement out;
  for (const auto& slope : entity) {
    const std::string* ticker = map.find(slope.entity);
    if (!ticker)
      raise(errc::unmapped_entity, "entity '" + slope.entity + "' has no category assignment");
    const auto it = by_category.find(*ticker);
    if (it == by_category.end())
      raise(errc::unmapped_entity,
            "category '" + *ticker + "' has no slope for entity '" + slope.entity + "'");
    const EntitySlope& cat = *it->second;

    SignAgreement::Entry entry;
    entry.entity = slope.entity;
    entry.category = *ticker;
    entry.entity_slope = slope.slope;
    entry.category_slope = cat.slope;
    if (slope.degenerate || cat.degenerate) {
      entry.status = SignAgreement::Status::degenerate;
      ++out.degenerate;
    } else {
      const bool agree = (slope.slope > 0.0 && cat.slope > 0.0) ||
                         (slope.slope < 0.0 && cat.slope < 0.0) ||
                         (slope.slope == 0.0 && cat.slope == 0.0);
      entry.status = agree ? SignAgreement::Status::match : SignAgreement::Status::mismatch;
      if (agree)
        ++out.matches;
      else
        ++out.mismatches;
    }
    out.entries.push_back(std::move(entry));
  }
  return out;
}

struct PipelineReport {
  Device device = Device::mobile;
  Level level = Level::website;
  double alpha = 0.05;
  SpecTestResult bp;
  std::optional<SpecTestResult> hausman_result;
  ModelChoice chosen = ModelChoice::pooled;
  FixedEffectsFit fe;                       // always computed for the slope tables
  std::optional<RegressionFit> pooled_fit;  // present when the pooled model is chosen
  std::optional<RandomEffectsFit> re_fit;   // present when the GLS fit was computed
  std::optional<SignAgreement> agreement;   // website level with a category map only
};

// One device/level cell of the full analysis: select the model via the
// specification tests, and always compute the within fit since the
// per-entity slope tables come from it. At website level with a map, the
// slopes are additionally compared against the category-level slopes.
inline PipelineReport run_pipeline(const PanelDataset& panel, Device device, Level level,
                                   const std::optional<CategoryMap>& map, double alpha = 0.05) {
  const std::string response = bounce_variable(device);
  const std::string regressor = share_variable(device);

  PipelineReport report;
  report.device = device;
  report.level = level;
  report.alpha = alpha;

  PanelDataset aggregated;
  const PanelDataset* work = &panel;
  if (level == Level::category) {
    if (!map)
      raise(errc::unmapped_entity, "category level requires a category map");
    aggregated = aggregate_by_category(panel, *map);
    work = &aggregated;
  }

  ModelSelection selection = select_model(*work, response, regressor, alpha);
  report.bp = selection.bp;
  report.hausman_result = selection.hausman_result;
  report.chosen = selection.chosen;
  report.fe = selection.fe ? std::move(*selection.fe)
                           : fixed_effects_within(*work, response, regressor);
  if (selection.re) report.re_fit = std::move(*selection.re);
  if (report.chosen == ModelChoice::pooled)
    report.pooled_fit = pooled_ols(*work, response, regressor);

  if (level == Level::website && map) {
    const PanelDataset by_category = aggregate_by_category(panel, *map);
    const auto category_slopes = entity_slopes(by_category, response, regressor);
    report.agreement = sign_agreement(report.fe.slopes, category_slopes, *map);
  }
  return report;
}

// The standard full run: both levels and both devices, category first.
inline std::vector<PipelineReport> run_all_pipelines(const PanelDataset& panel,
                                                     const CategoryMap& map,
                                                     double alpha = 0.05) {
  std::vector<PipelineReport> reports;
  for (Level level : {Level::category, Level::website})
    for (Device device : {Device::mobile, Device::desktop})
      reports.push_back(run_pipeline(panel, device, level, map, alpha));
  return reports;
}

namespace jsonio {

using nlohmann::json;

inline json to_json(const SpecTestResult& r) {
  json j{{"test", r.test_name == SpecTest::breusch_pagan ? "breusch_pagan" : "hausman"},
         {"statistic", r.statistic},
         {"dof", r.dof},
         {"p_value", r.p_value},
         {"p_display", format_p_value(r.p_value)},
         {"alpha", r.alpha},
         {"reject_null", r.reject_null}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline json to_json(const std::vector<EntitySlope>& slopes) {
  json arr = json::array();
  for (const auto& s : slopes)
    arr.push_back(json{{"entity", s.entity}, {"slope", s.slope}, {"degenerate", s.degenerate}});
  return arr;
}

inline json to_json(const FixedEffectsFit& fit) {
  json effects = json::object();
  for (const auto& [entity, u] : fit.entity_effects) effects[entity] = u;
  return json{{"model", "fixed_effects"},
              {"response", fit.response},
              {"regressor", fit.regressor},
              {"delta", fit.delta},
              {"std_error", fit.std_error},
              {"t_stat", fit.t_stat},
              {"p_value", fit.p_value},
              {"p_display", format_p_value(fit.p_value)},
              {"ci_low", fit.ci_low},
              {"ci_high", fit.ci_high},
              {"n_obs", fit.n_obs},
              {"n_entities", fit.n_entities},
              {"dof", fit.dof},
              {"sigma2", fit.sigma2},
              {"r_squared_within", fit.r_squared_within},
              {"adj_r_squared", fit.adj_r_squared},
              {"entity_effects", effects}};
}

inline json to_json(const RegressionFit& fit, const std::string& response,
                    const std::string& regressor) {
  return json{{"model", "pooled"},
              {"response", response},
              {"regressor", regressor},
              {"intercept", fit.coefficients[0]},
              {"delta", fit.coefficients[1]},
              {"std_error", fit.standard_errors[1]},
              {"t_stat", fit.t_stats[1]},
              {"p_value", fit.p_values[1]},
              {"p_display", format_p_value(fit.p_values[1])},
              {"ci_low", fit.ci_low[1]},
              {"ci_high", fit.ci_high[1]},
              {"n_obs", fit.n_obs},
              {"dof", fit.dof},
              {"r_squared", fit.r_squared},
              {"adj_r_squared", fit.adj_r_squared}};
}

inline json to_json(const RandomEffectsFit& fit) {
  json theta = json::object();
  for (const auto& [entity, value] : fit.theta) theta[entity] = value;
  return json{{"model", "random_effects"},
              {"response", fit.response},
              {"regressor", fit.regressor},
              {"delta", fit.delta},
              {"intercept", fit.intercept},
              {"std_error", fit.std_error},
              {"p_value", fit.p_value},
              {"p_display", format_p_value(fit.p_value)},
              {"ci_low", fit.ci_low},
              {"ci_high", fit.ci_high},
              {"n_obs", fit.n_obs},
              {"n_entities", fit.n_entities},
              {"sigma2_e", fit.sigma2_e},
              {"sigma2_u", fit.sigma2_u},
              {"sigma2_u_clamped", fit.sigma2_u_clamped},
              {"theta", theta}};
}

inline json to_json(const SignAgreement& agreement) {
  json entries = json::array();
  for (const auto& e : agreement.entries) {
    const char* status = e.status == SignAgreement::Status::match       ? "match"
                         : e.status == SignAgreement::Status::mismatch ? "mismatch"
                                                                       : "degenerate";
    entries.push_back(json{{"entity", e.entity},
                           {"category", e.category},
                           {"entity_slope", e.entity_slope},
                           {"category_slope", e.category_slope},
                           {"status", status}});
  }
  return json{{"matches", agreement.matches},
              {"mismatches", agreement.mismatches},
              {"degenerate", agreement.degenerate},
              {"entries", entries}};
}

inline json to_json(const PipelineReport& report) {
  json j{{"device", device_name(report.device)},
         {"level", level_name(report.level)},
         {"alpha", report.alpha},
         {"chosen_model", model_name(report.chosen)},
         {"tests", json{{"breusch_pagan", to_json(report.bp)},
                        {"hausman", report.hausman_result ? to_json(*report.hausman_result)
                                                          : json(nullptr)}}},
         {"fixed_effects", to_json(report.fe)},
         {"entity_slopes", to_json(report.fe.slopes)}};
  switch (report.chosen) {
    case ModelChoice::pooled:
      j["fit"] = to_json(*report.pooled_fit, report.fe.response, report.fe.regressor);
      break;
    case ModelChoice::fixed_effects:
      j["fit"] = to_json(report.fe);
      break;
    case ModelChoice::random_effects:
      j["fit"] = to_json(*report.re_fit);
      break;
  }
  if (report.re_fit) j["random_effects"] = to_json(*report.re_fit);
  j["sign_agreement"] = report.agreement ? to_json(*report.agreement) : json(nullptr);
  return j;
}

inline json to_json(const std::vector<PipelineReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

inline json to_json(const MonteCarloSummary& s) {
  return json{{"study", study_name(s.study)},
              {"reps", s.reps},
              {"mean_estimate", s.mean_estimate},
              {"bias", s.bias},
              {"rmse", s.rmse},
              {"ci_coverage", s.ci_coverage},
              {"rejection_rate", s.rejection_rate}};
}

inline json to_json(const BalanceReport& b) {
  return json{{"n_entities", b.n_entities},
              {"n_times", b.n_times},
              {"n_rows", b.n_rows},
              {"time_min", b.time_min},
              {"time_max", b.time_max},
              {"min_group_size", b.min_group_size},
              {"max_group_size", b.max_group_size},
              {"mean_group_size", b.mean_group_size},
              {"balanced", b.balanced}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace jsonio

namespace render {

// Regression summary in the traditional journal layout: point estimate with
// its confidence interval and p-value, then the sample size, then the fit
// statistics. Estimates get two decimals, R-squared three.
inline void fit_table(std::ostream& out, const std::string& title, double delta, double ci_low,
                      double ci_high, double p_value, std::size_t n_obs, double r2, double adj) {
  out << title << "\n";
  out << "  slope        " << format_fixed(delta, 2) << "  [" << format_fixed(ci_low, 2) << ", "
      << format_fixed(ci_high, 2) << "]  p " << format_p_value(p_value) << "\n";
  out << "  observations " << n_obs << "\n";
  out << "  R-squared    " << format_fixed(r2, 3) << "  (adjusted " << format_fixed(adj, 3)
      << ")\n";
}

inline void spec_test_line(std::ostream& out, const SpecTestResult& r) {
  const char* name = r.test_name == SpecTest::breusch_pagan ? "Breusch-Pagan" : "Hausman";
  out << "  " << name << ": statistic " << format_fixed(r.statistic, 4) << ", p "
      << format_p_value(r.p_value) << " -> " << (r.reject_null ? "reject" : "keep")
      << " null at alpha " << format_fixed(r.alpha, 3);
  if (!r.note.empty()) out << " (" << r.note << ")";
  out << "\n";
}

inline void pipeline_table(std::ostream& out, const PipelineReport& report) {
  out << "=== " << device_name(report.device) << " / " << level_name(report.level) << " ===\n";
  spec_test_line(out, report.bp);
  if (report.hausman_result)
    spec_test_line(out, *report.hausman_result);
  else
    out << "  Hausman: not run (pooled model kept)\n";
  out << "  chosen model: " << model_name(report.chosen) << "\n";
  switch (report.chosen) {
    case ModelChoice::pooled:
      fit_table(out, "pooled regression", report.pooled_fit->coefficients[1],
                report.pooled_fit->ci_low[1], report.pooled_fit->ci_high[1],
                report.pooled_fit->p_values[1], report.pooled_fit->n_obs,
                report.pooled_fit->r_squared, report.pooled_fit->adj_r_squared);
      break;
    case ModelChoice::fixed_effects:
      fit_table(out, "fixed effects (within) regression", report.fe.delta, report.fe.ci_low,
                report.fe.ci_high, report.fe.p_value, report.fe.n_obs,
                report.fe.r_squared_within, report.fe.adj_r_squared);
      break;
    case ModelChoice::random_effects:
      fit_table(out, "random effects (GLS) regression", report.re_fit->delta,
                report.re_fit->ci_low, report.re_fit->ci_high, report.re_fit->p_value,
                report.re_fit->n_obs, report.fe.r_squared_within, report.fe.adj_r_squared);
      break;
  }
  if (report.agreement) {
    out << "  sign agreement vs category slopes: " << report.agreement->matches << " match, "
        << report.agreement->mismatches << " mismatch, " << report.agreement->degenerate
        << " degenerate\n";
  }
}

// Per-entity slope table across both devices, in the panel's entity order.
// Degenerate slopes print as 0 with a flag column, matching their meaning:
// no within-entity variation to estimate from.
inline void slopes_csv(std::ostream& out, const std::vector<EntitySlope>& mobile,
                       const std::vector<EntitySlope>& desktop) {
  out << "entity,mobile_slope,mobile_degenerate,desktop_slope,desktop_degenerate\n";
  for (std::size_t i = 0; i < mobile.size(); ++i) {
    out << detail::quote_csv_field(mobile[i].entity) << ','
        << detail::format_double(mobile[i].slope) << ',' << (mobile[i].degenerate ? 1 : 0)
        << ',' << detail::format_double(desktop[i].slope) << ','
        << (desktop[i].degenerate ? 1 : 0) << '\n';
  }
}

}  // namespace render

}  // namespace panelfx
