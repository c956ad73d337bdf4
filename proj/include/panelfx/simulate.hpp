#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"
#include "estimators.hpp"
#include "modelsel.hpp"
#include "panel.hpp"

namespace panelfx {

namespace rng {

// splitmix64: 64-bit state advanced by the golden-ratio increment, output
// mixed through two xor-multiply rounds. Chosen over std::mt19937 so that the
// stream is bit-reproducible across platforms and trivially restartable.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log argument.
  double next_unit_pos() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller, cosine branch only: exactly two uniform
  // draws per variate, which keeps the stream layout independent of the
  // values drawn.
  double next_normal() {
    const double u1 = next_unit_pos();
    const double u2 = next_unit();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }
};

inline std::uint64_t mix64(std::uint64_t x) { return SplitMix64(x).next(); }

}  // namespace rng

struct SimConfig {
  std::size_t n_entities = 30;
  std::size_t periods = 4;
  double delta = 1.0;
  double sigma_u = 1.0;
  double sigma_e = 1.0;
  double rho = 0.0;  // correlation between entity effects and mean regressor
  double regressor_low = 0.0;
  double regressor_high = 100.0;
  std::uint64_t seed = 0;
  std::string regressor_name = "d";
  std::string response_name = "y";

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

inline void validate(const SimConfig& config) {
  if (config.n_entities < 1) raise(errc::invalid_config, "n_entities must be >= 1");
  if (config.periods < 1) raise(errc::invalid_config, "periods must be >= 1");
  if (!(config.sigma_u >= 0.0)) raise(errc::invalid_config, "sigma_u must be >= 0");
  if (!(config.sigma_e >= 0.0)) raise(errc::invalid_config, "sigma_e must be >= 0");
  if (!(config.rho >= -1.0 && config.rho <= 1.0))
    raise(errc::invalid_config, "rho must lie in [-1, 1]");
  if (!(config.regressor_low < config.regressor_high))
    raise(errc::invalid_config, "regressor_low must be below regressor_high");
  if (!std::isfinite(config.delta)) raise(errc::invalid_config, "delta must be finite");
}

inline std::string sim_entity_label(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "e%05zu", index + 1);
  return buf;
}

// Balanced panel drawn from y_it = delta * d_it + u_i + e_it. The draw order
// is fixed: all d_it entity-major, then one standard normal per entity for
// the u_i, then all e_it entity-major. Every draw happens regardless of the
// parameter values, so two configs differing only in, say, sigma_e consume
// identical streams. When rho is nonzero the entity effects tilt toward the
// standardized entity means of the regressor:
//   u_i = sigma_u * (rho * std_i + sqrt(1 - rho^2) * z_i).
inline PanelDataset generate_panel(const SimConfig& config) {
  validate(config);
  const std::size_t n = config.n_entities;
  const std::size_t t = config.periods;
  rng::SplitMix64 gen(config.seed);

  std::vector<double> d(n * t);
  for (double& v : d)
    v = config.regressor_low +
        gen.next_unit() * (config.regressor_high - config.regressor_low);
  std::vector<double> z(n);
  for (double& v : z) v = gen.next_normal();
  std::vector<double> eps(n * t);
  for (double& v : eps) v = gen.next_normal() * config.sigma_e;

  std::vector<double> mean_d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < t; ++s) mean_d[i] += d[i * t + s];
    mean_d[i] /= static_cast<double>(t);
  }
  double grand = 0.0;
  for (double v : mean_d) grand += v;
  grand /= static_cast<double>(n);
  double sd = 0.0;
  if (n >= 2) {
    for (double v : mean_d) sd += (v - grand) * (v - grand);
    sd = std::sqrt(sd / static_cast<double>(n - 1));
  }

  std::vector<Observation> records;
  records.reserve(n * t);
  for (std::size_t i = 0; i < n; ++i) {
    const double std_i = (n >= 2 && sd > 0.0) ? (mean_d[i] - grand) / sd : 0.0;
    const double u =
        config.sigma_u * (config.rho * std_i + std::sqrt(1.0 - config.rho * config.rho) * z[i]);
    for (std::size_t s = 0; s < t; ++s) {
      Observation row;
      row.entity_id = sim_entity_label(i);
      row.time_id = static_cast<std::int64_t>(s + 1);
      row.values[config.regressor_name] = d[i * t + s];
      row.values[config.response_name] =
          config.delta * d[i * t + s] + u + eps[i * t + s];
      records.push_back(std::move(row));
    }
  }
  return build_panel(std::move(records));
}

enum class Study { fe_slope, re_slope, pooled_slope, bp_test, hausman_test };

inline const char* study_name(Study s) {
  switch (s) {
    case Study::fe_slope: return "fe_slope";
    case Study::re_slope: return "re_slope";
    case Study::pooled_slope: return "pooled_slope";
    case Study::bp_test: return "bp_test";
    case Study::hausman_test: return "hausman_test";
  }
  return "?";
}

inline Study parse_study(const std::string& name) {
  if (name == "fe_slope") return Study::fe_slope;
  if (name == "re_slope") return Study::re_slope;
  if (name == "pooled_slope") return Study::pooled_slope;
  if (name == "bp_test") return Study::bp_test;
  if (name == "hausman_test") return Study::hausman_test;
  raise(errc::invalid_config, "unknown study '" + name + "'");
}

struct MonteCarloSummary {
  Study study = Study::fe_slope;
  std::size_t reps = 0;
  double mean_estimate = 0.0;  // mean slope, or mean test statistic
  double bias = 0.0;
  double rmse = 0.0;
  double ci_coverage = 0.0;    // share of reps whose 95% CI covers delta
  double rejection_rate = 0.0; // share of reps rejecting at alpha = 0.05

  friend bool operator==(const MonteCarloSummary&, const MonteCarloSummary&) = default;
};

// Runs `reps` independent replications. Replication r redraws with seed
// mix64(seed ^ r), so the summary is a pure function of (config, reps, study)
// and any replication can be regenerated in isolation.
inline MonteCarloSummary monte_carlo(const SimConfig& config, std::size_t reps, Study study) {
  validate(config);
  if (reps < 1) raise(errc::invalid_config, "reps must be >= 1");

  MonteCarloSummary out;
  out.study = study;
  out.reps = reps;
  double sum = 0.0, sum_sq_err = 0.0;
  std::size_t covered = 0, rejected = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    SimConfig rep_config = config;
    rep_config.seed = rng::mix64(config.seed ^ static_cast<std::uint64_t>(r));
    const PanelDataset panel = generate_panel(rep_config);
    const std::string& yv = config.response_name;
    const std::string& dv = config.regressor_name;

    double estimate = 0.0, lo = 0.0, hi = 0.0;
    bool is_slope = true;
    switch (study) {
      case Study::fe_slope: {
        const auto fit = fixed_effects_within(panel, yv, dv);
        estimate = fit.delta;
        lo = fit.ci_low;
        hi = fit.ci_high;
        break;
      }
      case Study::re_slope: {
        const auto fit = random_effects_gls(panel, yv, dv);
        estimate = fit.delta;
        lo = fit.ci_low;
        hi = fit.ci_high;
        break;
      }
      case Study::pooled_slope: {
        const auto fit = pooled_ols(panel, yv, dv);
        estimate = fit.coefficients[1];
        lo = fit.ci_low[1];
        hi = fit.ci_high[1];
        break;
      }
      case Study::bp_test: {
        const auto test = breusch_pagan(panel, yv, dv, 0.05);
        estimate = test.statistic;
        if (test.reject_null) ++rejected;
        is_slope = false;
        break;
      }
      case Study::hausman_test: {
        const auto fe = fixed_effects_within(panel, yv, dv);
        const auto re = random_effects_gls(panel, yv, dv);
        const auto test = hausman(fe, re, 0.05);
        estimate = test.statistic;
        if (test.reject_null) ++rejected;
        is_slope = false;
        break;
      }
    }
    sum += estimate;
    if (is_slope) {
      const double err = estimate - config.delta;
      sum_sq_err += err * err;
      if (lo <= config.delta && config.delta <= hi) ++covered;
    }
  }

  out.mean_estimate = sum / static_cast<double>(reps);
  if (study == Study::fe_slope || study == Study::re_slope || study == Study::pooled_slope) {
    out.bias = out.mean_estimate - config.delta;
    out.rmse = std::sqrt(sum_sq_err / static_cast<double>(reps));
    out.ci_coverage = static_cast<double>(covered) / static_cast<double>(reps);
  } else {
    out.rejection_rate = static_cast<double>(rejected) / static_cast<double>(reps);
  }
  return out;
}

}  // namespace panelfx
