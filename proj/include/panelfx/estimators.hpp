#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numstats.hpp"
#include "panel.hpp"

namespace panelfx {

namespace detail {

// Rows where both variables are present, grouped by entity in panel order.
// Entities contributing no complete row are recorded with an empty group so
// callers can still emit a per-entity result for them.
struct PairedSample {
  std::vector<std::string> entities;                              // all panel entities
  std::vector<std::vector<std::pair<double, double>>> groups;     // (regressor, response)
  std::size_t n_obs = 0;
};

inline PairedSample paired_sample(const PanelDataset& panel, const std::string& response,
                                  const std::string& regressor) {
  if (!panel.has_variable(response))
    raise(errc::unknown_variable, "no row carries variable '" + response + "'");
  if (!panel.has_variable(regressor))
    raise(errc::unknown_variable, "no row carries variable '" + regressor + "'");

  PairedSample sample;
  sample.entities = panel.entities;
  sample.groups.resize(panel.n_entities());
  for (std::size_t i = 0; i < panel.n_entities(); ++i) {
    for (std::size_t r : panel.group_index[i]) {
      const double* d = find_value(panel.rows[r], regressor);
      const double* y = find_value(panel.rows[r], response);
      if (d && y) {
        sample.groups[i].emplace_back(*d, *y);
        ++sample.n_obs;
      }
    }
  }
  return sample;
}

// A regressor is treated as constant within a group when its demeaned sum of
// squares is negligible against the group's own scale.
inline bool within_variance_negligible(double sxx, std::size_t t, double max_abs) {
  return sxx <= 1e-12 * static_cast<double>(t) * max_abs * max_abs;
}

struct WithinAccumulator {
  double sxx = 0.0, sxy = 0.0, rss = 0.0, tss = 0.0;
  std::vector<double> mean_d, mean_y;
  std::vector<double> group_sxx, group_sxy, group_max_abs;
  std::vector<std::size_t> group_n;
  std::size_t n_obs = 0;
  std::size_t n_used = 0;  // entities with at least one complete row
  double max_abs_d = 0.0;
};

inline WithinAccumulator within_moments(const PairedSample& sample) {
  WithinAccumulator acc;
  acc.n_obs = sample.n_obs;
  const std::size_t n = sample.groups.size();
  acc.mean_d.assign(n, 0.0);
  acc.mean_y.assign(n, 0.0);
  acc.group_sxx.assign(n, 0.0);
  acc.group_sxy.assign(n, 0.0);
  acc.group_max_abs.assign(n, 0.0);
  acc.group_n.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& g = sample.groups[i];
    acc.group_n[i] = g.size();
    if (g.empty()) continue;
    ++acc.n_used;
    double sd = 0.0, sy = 0.0;
    for (const auto& [d, y] : g) {
      sd += d;
      sy += y;
      acc.group_max_abs[i] = std::max(acc.group_max_abs[i], std::fabs(d));
    }
    acc.mean_d[i] = sd / static_cast<double>(g.size());
    acc.mean_y[i] = sy / static_cast<double>(g.size());
    acc.max_abs_d = std::max(acc.max_abs_d, acc.group_max_abs[i]);
    for (const auto& [d, y] : g) {
      const double dd = d - acc.mean_d[i];
      const double dy = y - acc.mean_y[i];
      acc.group_sxx[i] += dd * dd;
      acc.group_sxy[i] += dd * dy;
      acc.tss += dy * dy;
    }
    acc.sxx += acc.group_sxx[i];
    acc.sxy += acc.group_sxy[i];
  }
  return acc;
}

}  // namespace detail

struct EntitySlope {
  std::string entity;
  double slope = 0.0;
  bool degenerate = false;

  friend bool operator==(const EntitySlope&, const EntitySlope&) = default;
};

// Per-entity regression of demeaned response on demeaned regressor, one slope
// per panel entity in panel order. Groups with fewer than two complete rows
// or a within-constant regressor get slope 0 with the degenerate flag set.
inline std::vector<EntitySlope> entity_slopes(const PanelDataset& panel,
                                              const std::string& response,
                                              const std::string& regressor) {
  const auto sample = detail::paired_sample(panel, response, regressor);
  const auto acc = detail::within_moments(sample);
  std::vector<EntitySlope> slopes;
  slopes.reserve(sample.entities.size());
  for (std::size_t i = 0; i < sample.entities.size(); ++i) {
    EntitySlope s;
    s.entity = sample.entities[i];
    if (acc.group_n[i] < 2 ||
        detail::within_variance_negligible(acc.group_sxx[i], acc.group_n[i],
                                           acc.group_max_abs[i])) {
      s.degenerate = true;
    } else {
      s.slope = acc.group_sxy[i] / acc.group_sxx[i];
    }
    slopes.push_back(std::move(s));
  }
  return slopes;
}

// Plain OLS of response on regressor with an intercept, ignoring the panel
// grouping. Coefficient 0 is the intercept, coefficient 1 the slope.
inline RegressionFit pooled_ols(const PanelDataset& panel, const std::string& response,
                                const std::string& regressor) {
  const auto sample = detail::paired_sample(panel, response, regressor);
  std::vector<double> d, y;
  d.reserve(sample.n_obs);
  y.reserve(sample.n_obs);
  for (const auto& g : sample.groups) {
    for (const auto& [dv, yv] : g) {
      d.push_back(dv);
      y.push_back(yv);
    }
  }
  if (y.size() < 3)
    raise(errc::too_few_observations,
          "pooled regression needs at least 3 complete rows, have " + std::to_string(y.size()));
  return ols({d}, y, true);
}

struct FixedEffectsFit {
  std::string response;
  std::string regressor;
  double delta = 0.0;
  double std_error = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n_obs = 0;
  std::size_t n_entities = 0;
  std::size_t dof = 0;
  double sigma2 = 0.0;
  double r_squared_within = 0.0;
  double adj_r_squared = 0.0;
  std::map<std::string, double> entity_effects;
  std::vector<EntitySlope> slopes;
};

// Within estimator: slope of time-demeaned response on time-demeaned
// regressor across all complete rows, with entity effects recovered as
// mean(y_i) - delta * mean(d_i). Residual degrees of freedom charge one per
// entity plus one for the slope.
inline FixedEffectsFit fixed_effects_within(const PanelDataset& panel,
                                            const std::string& response,
                                            const std::string& regressor) {
  const auto sample = detail::paired_sample(panel, response, regressor);
  const auto acc = detail::within_moments(sample);
  if (acc.n_used < 2)
    raise(errc::too_few_observations, "within estimator needs at least 2 entities with data");
  if (acc.n_obs < acc.n_used + 2)
    raise(errc::too_few_observations,
          "within estimator needs n_obs - n_entities - 1 >= 1 residual degrees of freedom");
  if (detail::within_variance_negligible(acc.sxx, acc.n_obs, acc.max_abs_d))
    raise(errc::degenerate_regressor,
          "regressor '" + regressor + "' has no within-entity variation");

  FixedEffectsFit fit;
  fit.response = response;
  fit.regressor = regressor;
  fit.n_obs = acc.n_obs;
  fit.n_entities = acc.n_used;
  fit.dof = acc.n_obs - acc.n_used - 1;
  fit.delta = acc.sxy / acc.sxx;

  double rss = 0.0;
  for (std::size_t i = 0; i < sample.groups.size(); ++i) {
    for (const auto& [d, y] : sample.groups[i]) {
      const double e = (y - acc.mean_y[i]) - fit.delta * (d - acc.mean_d[i]);
      rss += e * e;
    }
  }
  fit.sigma2 = rss / static_cast<double>(fit.dof);
  fit.std_error = std::sqrt(fit.sigma2 / acc.sxx);
  if (fit.std_error > 0.0)
    fit.t_stat = fit.delta / fit.std_error;
  else
    fit.t_stat = fit.delta == 0.0
                     ? 0.0
                     : std::copysign(std::numeric_limits<double>::infinity(), fit.delta);
  fit.p_value = 2.0 * student_t_sf(std::fabs(fit.t_stat), fit.dof);
  const double tcrit = t_critical(0.95, fit.dof);
  fit.ci_low = fit.delta - tcrit * fit.std_error;
  fit.ci_high = fit.delta + tcrit * fit.std_error;
  fit.r_squared_within = acc.tss > 0.0 ? 1.0 - rss / acc.tss : (rss == 0.0 ? 1.0 : 0.0);
  fit.adj_r_squared = 1.0 - (1.0 - fit.r_squared_within) * static_cast<double>(fit.n_obs - 1) /
                                static_cast<double>(fit.dof);

  for (std::size_t i = 0; i < sample.entities.size(); ++i) {
    if (acc.group_n[i] == 0) continue;
    fit.entity_effects.emplace(sample.entities[i], acc.mean_y[i] - fit.delta * acc.mean_d[i]);
  }
  fit.slopes = entity_slopes(panel, response, regressor);
  return fit;
}

// Least squares dummy variables: the same model as the within estimator but
// fit directly, with one dummy column per entity and no common intercept.
// Kept as a cross-check; the dense design grows with the entity count, hence
// the hard cap.
inline RegressionFit lsdv(const PanelDataset& panel, const std::string& response,
                          const std::string& regressor) {
  const auto sample = detail::paired_sample(panel, response, regressor);
  std::vector<std::size_t> used;
  for (std::size_t i = 0; i < sample.groups.size(); ++i)
    if (!sample.groups[i].empty()) used.push_back(i);
  if (used.size() > 512)
    raise(errc::too_many_entities, "dummy-variable fit capped at 512 entities, have " +
                                       std::to_string(used.size()));
  if (used.size() < 2)
    raise(errc::too_few_observations, "dummy-variable fit needs at least 2 entities with data");

  std::vector<double> y;
  std::vector<std::vector<double>> columns(1 + used.size());
  y.reserve(sample.n_obs);
  for (auto& col : columns) col.reserve(sample.n_obs);
  for (std::size_t u = 0; u < used.size(); ++u) {
    for (const auto& [d, yv] : sample.groups[used[u]]) {
      columns[0].push_back(d);
      for (std::size_t w = 0; w < used.size(); ++w)
        columns[1 + w].push_back(w == u ? 1.0 : 0.0);
      y.push_back(yv);
    }
  }
  return ols(columns, y, false);
}

struct RandomEffectsFit {
  std::string response;
  std::string regressor;
  double delta = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;
  double p_value = 1.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n_obs = 0;
  std::size_t n_entities = 0;
  double sigma2_e = 0.0;
  double sigma2_u = 0.0;
  bool sigma2_u_clamped = false;
  std::map<std::string, double> theta;
};

// Two-step feasible GLS. The idiosyncratic variance comes from the within
// residuals, the entity variance from the between regression on group means
// (clamped at zero when the difference goes negative), and the final stage is
// OLS on quasi-demeaned data with a shrunken intercept column.
inline RandomEffectsFit random_effects_gls(const PanelDataset& panel,
                                           const std::string& response,
                                           const std::string& regressor) {
  const auto sample = detail::paired_sample(panel, response, regressor);
  const auto acc = detail::within_moments(sample);
  if (acc.n_used < 2)
    raise(errc::too_few_entities, "random effects needs at least 2 entities with data");
  if (acc.n_obs < acc.n_used + 2)
    raise(errc::too_few_observations,
          "random effects needs n_obs - n_entities - 1 >= 1 residual degrees of freedom");
  if (detail::within_variance_negligible(acc.sxx, acc.n_obs, acc.max_abs_d))
    raise(errc::degenerate_regressor,
          "regressor '" + regressor + "' has no within-entity variation");

  const double delta_w = acc.sxy / acc.sxx;
  double rss_w = 0.0;
  for (std::size_t i = 0; i < sample.groups.size(); ++i) {
    for (const auto& [d, y] : sample.groups[i]) {
      const double e = (y - acc.mean_y[i]) - delta_w * (d - acc.mean_d[i]);
      rss_w += e * e;
    }
  }
  // Guard against an exactly zero estimate so theta stays inside [0, 1).
  const double sigma2_e =
      std::max(rss_w / static_cast<double>(acc.n_obs - acc.n_used - 1),
               std::numeric_limits<double>::min());

  std::vector<double> bar_d, bar_y;
  bar_d.reserve(acc.n_used);
  bar_y.reserve(acc.n_used);
  for (std::size_t i = 0; i < sample.groups.size(); ++i) {
    if (acc.group_n[i] == 0) continue;
    bar_d.push_back(acc.mean_d[i]);
    bar_y.push_back(acc.mean_y[i]);
  }
  if (bar_d.size() < 3)
    raise(errc::degenerate_between_regression,
          "between regression needs at least 3 entities with data");
  double sigma2_between = 0.0;
  try {
    sigma2_between = ols({bar_d}, bar_y, true).sigma2;
  } catch (const error& e) {
    if (e.code() == errc::rank_deficient)
      raise(errc::degenerate_between_regression,
            "between regression is rank deficient: group means of '" + regressor +
                "' are constant");
    throw;
  }

  double inv_t_sum = 0.0;
  for (std::size_t i = 0; i < sample.groups.size(); ++i)
    if (acc.group_n[i] > 0) inv_t_sum += 1.0 / static_cast<double>(acc.group_n[i]);
  const double t_harmonic = static_cast<double>(acc.n_used) / inv_t_sum;

  RandomEffectsFit fit;
  fit.response = response;
  fit.regressor = regressor;
  fit.n_obs = acc.n_obs;
  fit.n_entities = acc.n_used;
  fit.sigma2_e = sigma2_e;
  const double sigma2_u_raw = sigma2_between - sigma2_e / t_harmonic;
  fit.sigma2_u_clamped = sigma2_u_raw < 0.0;
  fit.sigma2_u = std::max(0.0, sigma2_u_raw);

  std::vector<double> star_c, star_d, star_y;
  star_c.reserve(acc.n_obs);
  star_d.reserve(acc.n_obs);
  star_y.reserve(acc.n_obs);
  for (std::size_t i = 0; i < sample.groups.size(); ++i) {
    if (acc.group_n[i] == 0) continue;
    const double t_i = static_cast<double>(acc.group_n[i]);
    const double theta = 1.0 - std::sqrt(sigma2_e / (t_i * fit.sigma2_u + sigma2_e));
    fit.theta.emplace(sample.entities[i], theta);
    for (const auto& [d, y] : sample.groups[i]) {
      star_c.push_back(1.0 - theta);
      star_d.push_back(d - theta * acc.mean_d[i]);
      star_y.push_back(y - theta * acc.mean_y[i]);
    }
  }
  const RegressionFit gls = ols({star_c, star_d}, star_y, false);
  fit.intercept = gls.coefficients[0];
  fit.delta = gls.coefficients[1];

  // GLS covariance: scale the transformed design's inverse by the step-1
  // idiosyncratic variance, not the second-stage residual variance. The
  // transformed regressor carries the full within variation plus a shrunken
  // between component, so this slope variance never exceeds the within one.
  double sum_cc = 0.0, sum_cd = 0.0, sum_dd = 0.0;
  for (std::size_t k = 0; k < star_d.size(); ++k) {
    sum_cc += star_c[k] * star_c[k];
    sum_cd += star_c[k] * star_d[k];
    sum_dd += star_d[k] * star_d[k];
  }
  const double s_perp = sum_dd - sum_cd * sum_cd / sum_cc;
  fit.std_error = std::sqrt(sigma2_e / s_perp);
  const double t_stat = fit.delta / fit.std_error;
  fit.p_value = 2.0 * student_t_sf(std::fabs(t_stat), static_cast<double>(gls.dof));
  const double tcrit = t_critical(0.95, static_cast<double>(gls.dof));
  fit.ci_low = fit.delta - tcrit * fit.std_error;
  fit.ci_high = fit.delta + tcrit * fit.std_error;
  return fit;
}

}  // namespace panelfx
