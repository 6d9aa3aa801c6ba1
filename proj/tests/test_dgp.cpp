#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ardl/dgp/generators.hpp"

using namespace ardl;
using Catch::Matchers::WithinAbs;

TEST_CASE("generators are deterministic in the seed", "[dgp]") {
  REQUIRE(dgp::gen_white_noise(64, 3) == dgp::gen_white_noise(64, 3));
  REQUIRE(dgp::gen_white_noise(64, 3) != dgp::gen_white_noise(64, 4));
  REQUIRE(dgp::gen_random_walk(64, 9) == dgp::gen_random_walk(64, 9));
  REQUIRE(dgp::gen_ar1(64, 0.5, 1) == dgp::gen_ar1(64, 0.5, 1));
}

TEST_CASE("random walk increments are the white noise of its seed", "[dgp]") {
  const auto w = dgp::gen_random_walk(200, 17);
  const auto e = dgp::gen_white_noise(200, 17);
  REQUIRE_THAT(w[0], WithinAbs(e[0], 1e-15));
  for (std::size_t t = 1; t < w.size(); ++t)
    REQUIRE_THAT(w[t] - w[t - 1], WithinAbs(e[t], 1e-12));
}

TEST_CASE("AR(1) variance approaches 1/(1-rho^2)", "[dgp]") {
  const double rho = 0.6;
  const auto x = dgp::gen_ar1(200000, rho, 5);
  const double mean =
      std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double var = 0.0;
  for (const double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  REQUIRE_THAT(var, WithinAbs(1.0 / (1.0 - rho * rho), 0.05));
}

TEST_CASE("cointegrated pair keeps y - theta x stationary and small",
          "[dgp]") {
  const auto [x, y] = dgp::gen_cointegrated_pair(500, 0.5, 0.1, 21);
  for (std::size_t t = 0; t < x.size(); ++t)
    REQUIRE(std::fabs(y[t] - 0.5 * x[t]) < 0.6);  // ~6 sigma
  // sigma = 0 collapses to an exact multiple.
  const auto [x0, y0] = dgp::gen_cointegrated_pair(100, 0.25, 0.0, 21);
  for (std::size_t t = 0; t < x0.size(); ++t)
    REQUIRE_THAT(y0[t], WithinAbs(0.25 * x0[t], 1e-12));
}

TEST_CASE("synthetic panel is complete and spans the standard keys",
          "[dgp]") {
  const auto panel = dgp::gen_synthetic_panel(5, 2007, 2023, 42);
  REQUIRE(panel.entities().size() == 5);
  REQUIRE(panel.entities().front() == "C01");
  REQUIRE(panel.years().front() == 2007);
  REQUIRE(panel.years().back() == 2023);
  REQUIRE(panel.missing_count() == 0);
  const auto& inds = panel.indicators();
  for (const char* key : {"LPI1", "LPI2", "LPI3", "LPI4", "LPI5", "LPI6",
                          "TRD", "TRF", "ECG", "ENS"}) {
    CAPTURE(key);
    REQUIRE(std::find(inds.begin(), inds.end(), key) != inds.end());
  }
}

TEST_CASE("synthetic panel is reproducible and seed-sensitive", "[dgp]") {
  const auto a = dgp::gen_synthetic_panel(3, 2000, 2015, 7);
  const auto b = dgp::gen_synthetic_panel(3, 2000, 2015, 7);
  const auto c = dgp::gen_synthetic_panel(3, 2000, 2015, 8);
  bool all_equal = true, any_differs = false;
  for (std::size_t e = 0; e < a.entities().size(); ++e) {
    for (std::size_t k = 0; k < a.indicators().size(); ++k) {
      for (std::size_t t = 0; t < a.years().size(); ++t) {
        if (a.value(e, k, t) != b.value(e, k, t)) all_equal = false;
        if (a.value(e, k, t) != c.value(e, k, t)) any_differs = true;
      }
    }
  }
  REQUIRE(all_equal);
  REQUIRE(any_differs);
}

TEST_CASE("generator preconditions reject degenerate requests", "[dgp]") {
  REQUIRE_THROWS(dgp::gen_white_noise(0, 1));
  REQUIRE_THROWS(dgp::gen_ar1(50, 1.0, 1));
  REQUIRE_THROWS(dgp::gen_cointegrated_pair(10, 0.5, 0.1, 1));
  REQUIRE_THROWS(dgp::gen_synthetic_panel(0, 2000, 2020, 1));
  REQUIRE_THROWS(dgp::gen_synthetic_panel(3, 2015, 2020, 1));  // < 10 years
}
