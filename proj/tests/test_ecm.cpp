#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ardl/dgp/generators.hpp"
#include "ardl/ecm/design.hpp"
#include "ardl/ecm/fit.hpp"
#include "ardl/ecm/lag_search.hpp"
#include "ardl/ecm/metrics.hpp"
#include "ardl/rng.hpp"

using namespace ardl;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;
using Catch::Matchers::WithinAbs;

namespace {

frame::AlignedSeriesSet make_entity(const std::vector<double>& y,
                                    const std::vector<double>& x,
                                    const std::string& label = "E1") {
  frame::AlignedSeriesSet s;
  s.entity = label;
  s.dependent_name = "Y";
  s.dependent = y;
  s.regressor_names = {"X"};
  s.regressors = {x};
  for (std::size_t t = 0; t < y.size(); ++t)
    s.years.push_back(2000 + static_cast<int>(t));
  return s;
}

frame::AlignedSeriesSet random_entity(std::uint64_t seed, std::size_t n,
                                      const std::string& label = "E1") {
  return make_entity(dgp::gen_random_walk(n, seed),
                     dgp::gen_random_walk(n, seed + 1000), label);
}

}  // namespace

TEST_CASE("error-correction design has the documented shape", "[ecm]") {
  std::vector<double> y(10), x(10);
  Rng rng(2);
  for (std::size_t t = 0; t < 10; ++t) {
    y[t] = static_cast<double>(t) + rng.gaussian();
    x[t] = 0.5 * static_cast<double>(t) + rng.gaussian();
  }
  ecm::ArdlSpec spec;
  spec.dependent = "Y";
  spec.regressors = {"X"};
  spec.p = 1;
  spec.q = 1;
  const auto d = ecm::build_ecm_design(make_entity(y, x), spec);

  REQUIRE(d.design.names == std::vector<std::string>{"const", "dY@-1", "dX@-1",
                                                     "Y@-1", "X@-1"});
  REQUIRE(d.design.X.rows() == 8);  // t0 = 1 + max(p, q) = 2
  REQUIRE(d.first_row == 2);
  REQUIRE(d.level_cols == std::vector<int>{3, 4});
  REQUIRE(d.dy_lag_cols == std::vector<int>{1});

  // First usable row is t = 2.
  CHECK_THAT(d.design.y(0), WithinAbs(y[2] - y[1], 1e-15));
  CHECK_THAT(d.design.X(0, 1), WithinAbs(y[1] - y[0], 1e-15));
  CHECK_THAT(d.design.X(0, 2), WithinAbs(x[1] - x[0], 1e-15));
  CHECK_THAT(d.design.X(0, 3), WithinAbs(y[1], 1e-15));
  CHECK_THAT(d.design.X(0, 4), WithinAbs(x[1], 1e-15));
}

TEST_CASE("contemporaneous flag inserts the current difference", "[ecm]") {
  const auto e = random_entity(3, 30);
  ecm::ArdlSpec spec;
  spec.dependent = "Y";
  spec.regressors = {"X"};
  spec.p = 1;
  spec.q = 1;
  spec.contemporaneous = true;
  const auto d = ecm::build_ecm_design(e, spec);
  REQUIRE(d.design.names == std::vector<std::string>{
                                "const", "dY@-1", "dX@0", "dX@-1", "Y@-1",
                                "X@-1"});
  CHECK_THAT(d.design.X(0, 2),
             WithinAbs(e.regressors[0][2] - e.regressors[0][1], 1e-15));
}

TEST_CASE("difference and levels parameterizations leave the same residuals",
          "[ecm]") {
  // The two designs span the same column space row for row, so OLS
  // projections coincide even though the coefficients differ.
  for (std::uint64_t seed : {11u, 12u, 13u, 14u}) {
    const auto e = random_entity(seed, 40);
    ecm::ArdlSpec spec;
    spec.dependent = "Y";
    spec.regressors = {"X"};
    spec.p = 2;
    spec.q = 1;
    const auto fit = ecm::fit_ardl_ecm(e, spec);
    const auto levels = estat::ols_fit(ecm::build_levels_design(e, spec));
    REQUIRE(fit.ols.residuals.size() == levels.residuals.size());
    for (Eigen::Index r = 0; r < levels.residuals.size(); ++r)
      REQUIRE_THAT(fit.ols.residuals(r),
                   WithinAbs(levels.residuals(r), 1e-9));
  }
}

TEST_CASE("long-run coefficients are the negated level ratio", "[ecm]") {
  const auto theta = ecm::long_run_coefficients({-0.5, 0.25});
  REQUIRE(theta.size() == 1);
  CHECK_THAT(theta[0], WithinAbs(0.5, 1e-15));

  const auto two = ecm::long_run_coefficients({-0.25, 0.125, -0.5});
  REQUIRE(two.size() == 2);
  CHECK_THAT(two[0], WithinAbs(0.5, 1e-15));
  CHECK_THAT(two[1], WithinAbs(-2.0, 1e-15));

  REQUIRE_THROWS_AS(ecm::long_run_coefficients({1e-11, 0.3}),
                    EstimationError);
  REQUIRE_THROWS_AS(ecm::long_run_coefficients({0.5}), std::invalid_argument);
}

TEST_CASE("estimation recovers the equilibrium slope of a cointegrated pair",
          "[ecm]") {
  const auto [x, y] = dgp::gen_cointegrated_pair(200, 0.5, 0.1, 21);
  ecm::ArdlSpec spec;
  spec.dependent = "Y";
  spec.regressors = {"X"};
  spec.p = 1;
  spec.q = 1;
  spec.contemporaneous = true;
  const auto fit = ecm::fit_ardl_ecm(make_entity(y, x), spec);
  REQUIRE(fit.long_run_defined);
  REQUIRE(fit.long_run_names == std::vector<std::string>{"X"});
  CHECK_THAT(fit.long_run[0], WithinAbs(0.5, 0.1));
  CHECK(fit.adjustment_speed < 0.0);  // pull back toward equilibrium
  CHECK(fit.lambda.size() == 2);
  CHECK(fit.lambda[0] == fit.adjustment_speed);
}

TEST_CASE("series below the minimum usable length are rejected", "[ecm]") {
  const auto e = random_entity(5, 6);  // need more than p+q+1+3 = 6 points
  ecm::ArdlSpec spec;
  spec.dependent = "Y";
  spec.regressors = {"X"};
  spec.p = 1;
  spec.q = 1;
  REQUIRE_THROWS_MATCHES(ecm::build_ecm_design(e, spec), DataError,
                         MessageMatches(ContainsSubstring("E1")));
}

TEST_CASE("constant level columns are rejected before estimation", "[ecm]") {
  std::vector<double> y(12, 4.0);
  const auto x = dgp::gen_random_walk(12, 9);
  ecm::ArdlSpec spec;
  spec.dependent = "Y";
  spec.regressors = {"X"};
  spec.p = 1;
  spec.q = 1;
  REQUIRE_THROWS_MATCHES(ecm::build_ecm_design(make_entity(y, x), spec),
                         EstimationError,
                         MessageMatches(ContainsSubstring("zero variance")));
}

TEST_CASE("first-row override must respect the lag depth", "[ecm]") {
  const auto e = random_entity(7, 30);
  ecm::ArdlSpec spec;
  spec.dependent = "Y";
  spec.regressors = {"X"};
  spec.p = 2;
  spec.q = 1;
  REQUIRE_THROWS_AS(ecm::build_ecm_design(e, spec, 2), std::invalid_argument);
  const auto d = ecm::build_ecm_design(e, spec, 5);
  REQUIRE(d.first_row == 5);
  REQUIRE(d.design.X.rows() == 25);
}

TEST_CASE("pooled designs append entity dummies", "[ecm]") {
  const auto a = random_entity(31, 25, "E1");
  const auto b = random_entity(32, 25, "E2");
  ecm::ArdlSpec spec;
  spec.dependent = "Y";
  spec.regressors = {"X"};
  spec.p = 1;
  spec.q = 1;
  spec.entity_dummies = true;
  const auto d = ecm::build_ecm_design({a, b}, spec);
  REQUIRE(d.design.names.back() == "entity:E2");
  REQUIRE(d.design.X.rows() == 2 * 23);
  REQUIRE(d.entity_rows == std::vector<std::size_t>{23, 23});
  // Dummy is 0 on the first entity's rows and 1 on the second's.
  const Eigen::Index last = d.design.X.cols() - 1;
  CHECK(d.design.X(0, last) == 0.0);
  CHECK(d.design.X(23, last) == 1.0);
}

TEST_CASE("naive one-step fitted values score exactly one", "[ecm][metrics]") {
  const auto y = dgp::gen_random_walk(40, 17);
  std::vector<double> fitted(y.size(), 0.0);
  fitted[0] = y[0];
  for (std::size_t t = 1; t < y.size(); ++t) fitted[t] = y[t - 1];
  const auto m = ecm::forecast_metrics(y, fitted);
  REQUIRE(m.defined);
  REQUIRE(m.mase == 1.0);
  REQUIRE(m.gmrae == 1.0);
}

TEST_CASE("forecast metrics guard their degenerate inputs", "[ecm][metrics]") {
  REQUIRE_THROWS_AS(ecm::forecast_metrics({1.0, 2.0}, {1.0, 2.0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(ecm::forecast_metrics({1.0, 2.0, 3.0}, {1.0, 2.0}),
                    std::invalid_argument);
  const auto m =
      ecm::forecast_metrics({2.0, 2.0, 2.0, 2.0}, {2.0, 1.0, 3.0, 2.0});
  REQUIRE_FALSE(m.defined);  // constant series has no naive scale
}

TEST_CASE("lag search covers the grid and selects the criterion minimum",
          "[ecm]") {
  const auto e = random_entity(41, 60);
  ecm::ArdlSpec base;
  base.dependent = "Y";
  base.regressors = {"X"};
  const auto result = ecm::select_lags(e, base, 2, 2, ecm::Criterion::kAic);

  REQUIRE(result.grid.size() == 6);  // p in {1,2} x q in {0,1,2}
  REQUIRE(result.common_first_row == 3);
  double best = std::numeric_limits<double>::infinity();
  int best_p = 0, best_q = 0;
  for (const auto& cell : result.grid) {
    REQUIRE(cell.estimable);
    REQUIRE(std::isfinite(cell.aic));
    REQUIRE(std::isfinite(cell.bic));
    REQUIRE(cell.metrics_defined);
    if (cell.aic < best) {
      best = cell.aic;
      best_p = cell.p;
      best_q = cell.q;
    }
  }
  REQUIRE(result.selected_p == best_p);
  REQUIRE(result.selected_q == best_q);

  // All cells share the evaluation sample, so their sample sizes agree.
  ecm::ArdlSpec probe = base;
  probe.p = 1;
  probe.q = 0;
  const auto trimmed =
      ecm::fit_ardl_ecm(e, probe, result.common_first_row);
  const auto full = ecm::fit_ardl_ecm(e, probe);
  REQUIRE(trimmed.ols.n == 57);
  REQUIRE(full.ols.n == 58);
}

TEST_CASE("lag search rejects invalid bounds and matches across threads",
          "[ecm]") {
  const auto e = random_entity(43, 50);
  ecm::ArdlSpec base;
  base.dependent = "Y";
  base.regressors = {"X"};
  REQUIRE_THROWS_AS(ecm::select_lags(e, base, 0, 1, ecm::Criterion::kAic),
                    ConfigError);
  REQUIRE_THROWS_AS(ecm::select_lags(e, base, 1, -1, ecm::Criterion::kAic),
                    ConfigError);
  const auto serial = ecm::select_lags(e, base, 3, 2, ecm::Criterion::kBic, 1);
  const auto parallel =
      ecm::select_lags(e, base, 3, 2, ecm::Criterion::kBic, 4);
  REQUIRE(serial.selected_p == parallel.selected_p);
  REQUIRE(serial.selected_q == parallel.selected_q);
  REQUIRE(serial.grid.size() == parallel.grid.size());
  for (std::size_t i = 0; i < serial.grid.size(); ++i) {
    REQUIRE(serial.grid[i].aic == parallel.grid[i].aic);
    REQUIRE(serial.grid[i].mase == parallel.grid[i].mase);
  }
}
