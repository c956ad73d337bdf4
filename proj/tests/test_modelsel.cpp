#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "panelfx/modelsel.hpp"
#include "panelfx/simulate.hpp"

using namespace panelfx;

namespace {

Observation obs(std::string entity, std::int64_t time, double d, double y) {
  Observation row;
  row.entity_id = std::move(entity);
  row.time_id = time;
  row.values["d"] = d;
  row.values["y"] = y;
  return row;
}

}  // namespace

TEST_CASE("breusch_pagan on a hand-checkable panel") {
  // Pooled residuals come out exactly {1, 1} and {-1, -1}: the slope is 0 and
  // the intercept is 0, so the residuals equal y. Then
  //   A = (2^2 + (-2)^2) / 4 - 1 = 1, LM = 16 / (2 * 4) * 1 = 2.
  const PanelDataset panel = build_panel({
      obs("a", 1, 0.0, 1.0),
      obs("a", 2, 1.0, 1.0),
      obs("b", 1, 0.0, -1.0),
      obs("b", 2, 1.0, -1.0),
  });
  const SpecTestResult result = breusch_pagan(panel, "y", "d", 0.05);
  CHECK(result.statistic == Catch::Approx(2.0).margin(1e-12));
  CHECK(result.dof == 1);
  CHECK(result.p_value == Catch::Approx(0.15729920705).margin(1e-8));
  CHECK_FALSE(result.reject_null);
}

TEST_CASE("breusch_pagan is invariant to a constant response shift") {
  SimConfig config;
  config.n_entities = 20;
  config.periods = 4;
  config.delta = 1.0;
  config.sigma_u = 2.0;
  config.sigma_e = 1.0;
  config.seed = 3003;
  const PanelDataset panel = generate_panel(config);
  std::vector<Observation> shifted = panel.rows;
  for (auto& row : shifted) row.values["y"] += 500.0;
  const SpecTestResult base = breusch_pagan(panel, "y", "d");
  const SpecTestResult moved = breusch_pagan(build_panel(shifted), "y", "d");
  CHECK(moved.statistic == Catch::Approx(base.statistic).epsilon(1e-9));
  CHECK(moved.p_value == Catch::Approx(base.p_value).epsilon(1e-9));
}

TEST_CASE("breusch_pagan rejects singleton-only panels") {
  const PanelDataset panel = build_panel({
      obs("a", 1, 1.0, 1.0), obs("b", 1, 2.0, 2.5), obs("c", 1, 3.0, 2.9),
      obs("d", 1, 4.0, 4.4),
  });
  CHECK_THROWS_MATCHES(breusch_pagan(panel, "y", "d"), error,
                       Catch::Matchers::Predicate<error>([](const error& e) {
                         return e.code() == errc::all_singleton_entities;
                       }));
}

TEST_CASE("breusch_pagan mixes singleton and grouped entities") {
  // Singletons contribute to the numerator sums but not to T_i (T_i - 1).
  const PanelDataset panel = build_panel({
      obs("a", 1, 0.2, 1.0), obs("a", 2, 0.9, 1.4), obs("a", 3, 1.7, 2.4),
      obs("b", 1, 0.4, 3.0), obs("b", 2, 1.1, 3.3), obs("b", 3, 2.0, 4.6),
      obs("c", 1, 0.8, 0.4),
  });
  const SpecTestResult result = breusch_pagan(panel, "y", "d");
  CHECK(std::isfinite(result.statistic));
  CHECK(result.statistic >= 0.0);
  CHECK(result.p_value >= 0.0);
  CHECK(result.p_value <= 1.0);
}

TEST_CASE("hausman on hand values") {
  FixedEffectsFit fe;
  fe.response = "y";
  fe.regressor = "d";
  fe.n_obs = 100;
  fe.delta = 2.0;
  fe.std_error = 0.1;
  RandomEffectsFit re;
  re.response = "y";
  re.regressor = "d";
  re.n_obs = 100;
  re.delta = 1.8;
  re.std_error = 0.05;

  const SpecTestResult result = hausman(fe, re, 0.05);
  CHECK(result.statistic == Catch::Approx(0.04 / 0.0075).epsilon(1e-12));
  CHECK(result.p_value == Catch::Approx(0.0209).margin(5e-5));
  CHECK(result.reject_null);
  CHECK(result.note.empty());
}

TEST_CASE("hausman identical slopes give statistic zero") {
  FixedEffectsFit fe;
  fe.response = "y";
  fe.regressor = "d";
  fe.n_obs = 50;
  fe.delta = 1.5;
  fe.std_error = 0.2;
  RandomEffectsFit re;
  re.response = "y";
  re.regressor = "d";
  re.n_obs = 50;
  re.delta = 1.5;
  re.std_error = 0.1;
  const SpecTestResult result = hausman(fe, re);
  CHECK(result.statistic == 0.0);
  CHECK(result.p_value == 1.0);
  CHECK_FALSE(result.reject_null);
}

TEST_CASE("hausman flags a non-positive variance difference") {
  FixedEffectsFit fe;
  fe.response = "y";
  fe.regressor = "d";
  fe.n_obs = 50;
  fe.delta = 2.0;
  fe.std_error = 0.05;
  RandomEffectsFit re;
  re.response = "y";
  re.regressor = "d";
  re.n_obs = 50;
  re.delta = 1.9;
  re.std_error = 0.08;  // larger than the within error
  const SpecTestResult result = hausman(fe, re);
  CHECK(result.statistic == 0.0);
  CHECK(result.p_value == 1.0);
  CHECK_FALSE(result.reject_null);
  CHECK_FALSE(result.note.empty());
}

TEST_CASE("hausman refuses mismatched fits") {
  FixedEffectsFit fe;
  fe.response = "y";
  fe.regressor = "d";
  fe.n_obs = 50;
  RandomEffectsFit re;
  re.response = "y";
  re.regressor = "d";
  re.n_obs = 49;
  CHECK_THROWS_MATCHES(hausman(fe, re), error,
                       Catch::Matchers::Predicate<error>([](const error& e) {
                         return e.code() == errc::mismatched_fits;
                       }));
  re.n_obs = 50;
  re.regressor = "other";
  CHECK_THROWS(hausman(fe, re));
}

TEST_CASE("hausman is invariant to rescaling both variables") {
  SimConfig config;
  config.n_entities = 25;
  config.periods = 4;
  config.delta = 1.2;
  config.sigma_u = 3.0;
  config.sigma_e = 1.0;
  config.rho = 0.6;
  config.seed = 660;
  const PanelDataset panel = generate_panel(config);
  std::vector<Observation> scaled = panel.rows;
  for (auto& row : scaled) row.values["y"] *= 12.5;
  const PanelDataset panel_scaled = build_panel(scaled);

  const auto h1 = hausman(fixed_effects_within(panel, "y", "d"),
                          random_effects_gls(panel, "y", "d"));
  const auto h2 = hausman(fixed_effects_within(panel_scaled, "y", "d"),
                          random_effects_gls(panel_scaled, "y", "d"));
  CHECK(h2.statistic == Catch::Approx(h1.statistic).epsilon(1e-9));
}

TEST_CASE("decision rule composes the two tests") {
  SpecTestResult bp;
  bp.test_name = SpecTest::breusch_pagan;
  SpecTestResult h;
  h.test_name = SpecTest::hausman;

  SECTION("no entity variance keeps pooled") {
    bp.p_value = 0.4;
    bp.reject_null = false;
    CHECK(decide(bp, std::nullopt) == ModelChoice::pooled);
  }
  SECTION("entity variance plus correlated effects choose fixed effects") {
    bp.p_value = 0.006303;
    bp.reject_null = true;
    h.p_value = 0.006298;
    h.reject_null = true;
    CHECK(decide(bp, h) == ModelChoice::fixed_effects);
  }
  SECTION("entity variance with uncorrelated effects chooses random effects") {
    bp.p_value = 1e-10;
    bp.reject_null = true;
    h.p_value = 0.3;
    h.reject_null = false;
    CHECK(decide(bp, h) == ModelChoice::random_effects);
  }
}

TEST_CASE("select_model on simulated panels stays internally consistent") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    SimConfig config;
    config.n_entities = 24;
    config.periods = 4;
    config.delta = 1.0;
    config.sigma_u = (seed % 3 == 0) ? 0.0 : 3.0;
    config.sigma_e = 1.0;
    config.rho = (seed % 2 == 0) ? 0.7 : 0.0;
    config.seed = seed * 101;
    const PanelDataset panel = generate_panel(config);
    const ModelSelection selection = select_model(panel, "y", "d", 0.05);

    CHECK(selection.chosen == decide(selection.bp, selection.hausman_result));
    if (!selection.bp.reject_null) {
      CHECK(selection.chosen == ModelChoice::pooled);
      CHECK_FALSE(selection.hausman_result.has_value());
      CHECK_FALSE(selection.fe.has_value());
    } else {
      REQUIRE(selection.hausman_result.has_value());
      REQUIRE(selection.fe.has_value());
      REQUIRE(selection.re.has_value());
      if (selection.hausman_result->reject_null)
        CHECK(selection.chosen == ModelChoice::fixed_effects);
      else
        CHECK(selection.chosen == ModelChoice::random_effects);
    }
  }
}

TEST_CASE("alpha threshold feeds the rejection decision") {
  SimConfig config;
  config.n_entities = 30;
  config.periods = 4;
  config.delta = 1.0;
  config.sigma_u = 0.0;  // null holds, so the p-value is far from both extremes
  config.sigma_e = 1.0;
  config.seed = 512;
  const PanelDataset panel = generate_panel(config);
  const SpecTestResult strict = breusch_pagan(panel, "y", "d", 1e-12);
  const SpecTestResult lax = breusch_pagan(panel, "y", "d", 0.999999);
  CHECK(strict.alpha == 1e-12);
  CHECK_FALSE(strict.reject_null);
  CHECK(lax.reject_null);
}
