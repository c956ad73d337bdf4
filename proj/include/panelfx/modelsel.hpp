#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>

#include "errors.hpp"
#include "estimators.hpp"
#include "numstats.hpp"
#include "panel.hpp"

namespace panelfx {

enum class ModelChoice { pooled, fixed_effects, random_effects };

inline const char* model_name(ModelChoice m) {
  switch (m) {
    case ModelChoice::pooled: return "pooled";
    case ModelChoice::fixed_effects: return "fixed_effects";
    case ModelChoice::random_effects: return "random_effects";
  }
  return "?";
}

enum class SpecTest { breusch_pagan, hausman };

struct SpecTestResult {
  SpecTest test_name = SpecTest::breusch_pagan;
  double statistic = 0.0;
  std::size_t dof = 1;
  double p_value = 1.0;
  double alpha = 0.05;
  bool reject_null = false;
  std::string note;  // empty unless the statistic was forced to a safe fallback

  friend bool operator==(const SpecTestResult&, const SpecTestResult&) = default;
};

// Lagrange multiplier test of zero entity-effect variance, computed from the
// grouped residuals of the pooled regression. The unbalanced form scales the
// squared ratio A by (sum T_i)^2 / (2 sum T_i (T_i - 1)); groups of size one
// contribute nothing to the denominator sum.
inline SpecTestResult breusch_pagan(const PanelDataset& panel, const std::string& response,
                                    const std::string& regressor, double alpha = 0.05) {
  const auto sample = detail::paired_sample(panel, response, regressor);
  std::vector<double> d, y;
  std::vector<std::size_t> sizes;
  d.reserve(sample.n_obs);
  y.reserve(sample.n_obs);
  for (const auto& g : sample.groups) {
    if (g.empty()) continue;
    sizes.push_back(g.size());
    for (const auto& [dv, yv] : g) {
      d.push_back(dv);
      y.push_back(yv);
    }
  }
  if (y.size() < 3)
    raise(errc::too_few_observations,
          "pooled regression needs at least 3 complete rows, have " + std::to_string(y.size()));

  double sum_t = 0.0, sum_tt1 = 0.0;
  for (std::size_t t : sizes) {
    sum_t += static_cast<double>(t);
    sum_tt1 += static_cast<double>(t) * static_cast<double>(t - 1);
  }
  if (sum_tt1 == 0.0)
    raise(errc::all_singleton_entities,
          "test is undefined when every entity has a single row");

  const RegressionFit pooled = ols({d}, y, true);
  double ss_group = 0.0;  // sum over entities of (sum of residuals)^2
  double ss_total = 0.0;
  std::size_t pos = 0;
  for (std::size_t t : sizes) {
    double s = 0.0;
    for (std::size_t j = 0; j < t; ++j) {
      const double e = pooled.residuals[pos + j];
      s += e;
      ss_total += e * e;
    }
    ss_group += s * s;
    pos += t;
  }

  const double a = ss_group / ss_total - 1.0;
  SpecTestResult result;
  result.test_name = SpecTest::breusch_pagan;
  result.statistic = sum_t * sum_t / (2.0 * sum_tt1) * a * a;
  result.dof = 1;
  result.p_value = chi_square_sf(result.statistic, 1);
  result.alpha = alpha;
  result.reject_null = result.p_value < alpha;
  return result;
}

// Contrast of the within and GLS slopes. A non-positive variance difference
// makes the statistic undefined; that case is reported as a fail-to-reject
// with a note rather than an error, since it simply means the contrast
// carries no evidence against the GLS estimator.
inline SpecTestResult hausman(const FixedEffectsFit& fe, const RandomEffectsFit& re,
                              double alpha = 0.05) {
  if (fe.response != re.response || fe.regressor != re.regressor || fe.n_obs != re.n_obs)
    raise(errc::mismatched_fits,
          "within and GLS fits describe different samples or variables");

  SpecTestResult result;
  result.test_name = SpecTest::hausman;
  result.dof = 1;
  result.alpha = alpha;
  const double var_diff = fe.std_error * fe.std_error - re.std_error * re.std_error;
  if (var_diff <= 0.0) {
    result.statistic = 0.0;
    result.p_value = 1.0;
    result.reject_null = false;
    result.note = "non-positive variance difference; statistic set to 0";
    return result;
  }
  const double diff = fe.delta - re.delta;
  result.statistic = diff * diff / var_diff;
  result.p_value = chi_square_sf(result.statistic, 1);
  result.reject_null = result.p_value < alpha;
  return result;
}

struct ModelSelection {
  ModelChoice chosen = ModelChoice::pooled;
  SpecTestResult bp;
  std::optional<SpecTestResult> hausman_result;
  std::optional<FixedEffectsFit> fe;
  std::optional<RandomEffectsFit> re;
};

inline ModelChoice decide(const SpecTestResult& bp,
                          const std::optional<SpecTestResult>& hausman_result) {
  if (!bp.reject_null) return ModelChoice::pooled;
  if (hausman_result && hausman_result->reject_null) return ModelChoice::fixed_effects;
  return ModelChoice::random_effects;
}

// Two-stage selection: no entity-effect variance keeps the pooled model;
// otherwise the slope contrast decides between the within and GLS fits. The
// fits computed along the way are returned so callers need not redo them.
inline ModelSelection select_model(const PanelDataset& panel, const std::string& response,
                                   const std::string& regressor, double alpha = 0.05) {
  ModelSelection selection;
  selection.bp = breusch_pagan(panel, response, regressor, alpha);
  if (selection.bp.reject_null) {
    selection.fe = fixed_effects_within(panel, response, regressor);
    selection.re = random_effects_gls(panel, response, regressor);
    selection.hausman_result = hausman(*selection.fe, *selection.re, alpha);
  }
  selection.chosen = decide(selection.bp, selection.hausman_result);
  return selection;
}

}  // namespace panelfx
