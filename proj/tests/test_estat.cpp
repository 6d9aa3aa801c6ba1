#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "ardl/estat/dist.hpp"
#include "ardl/estat/ols.hpp"
#include "ardl/rng.hpp"

using namespace ardl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

estat::DesignMatrix simple_design(const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& y) {
  estat::DesignMatrix d;
  d.X.resize(x.size(), 2);
  d.X.col(0).setOnes();
  d.X.col(1) = x;
  d.y = y;
  d.names = {"const", "x"};
  d.intercept_col = 0;
  return d;
}

}  // namespace

TEST_CASE("simple regression matches the closed-form line", "[estat]") {
  // x = 1..8 against a zig-zag y gives exact rational coefficients:
  // slope = 38/42 = 19/21, intercept = ybar - slope * xbar = 3/7.
  Eigen::VectorXd x(8), y(8);
  x << 1, 2, 3, 4, 5, 6, 7, 8;
  y << 2, 1, 4, 3, 6, 5, 8, 7;
  const auto fit = estat::ols_fit(simple_design(x, y));
  REQUIRE_THAT(fit.coef(0), WithinAbs(3.0 / 7.0, 1e-12));
  REQUIRE_THAT(fit.coef(1), WithinAbs(19.0 / 21.0, 1e-12));
  REQUIRE(fit.n == 8);
  REQUIRE(fit.k == 2);
  REQUIRE(fit.df_resid == 6);
  REQUIRE(fit.has_intercept);
}

TEST_CASE("fit matches a reference implementation on a frozen fixture",
          "[estat]") {
  // Reference values computed with an independent statistics package on
  // y = 1 + 2 x + e with the noise below.
  const double xv[] = {-0.847516, 0.068543,  -1.250926, -1.583637, 0.632458,
                       -0.469675, 1.186915,  0.374722,  -2.141918, -0.422016,
                       -1.109588, -0.362477, 0.089373,  0.794181,  -1.526651,
                       -1.281484, -0.520215, -1.231869, -1.031033, 0.379366,
                       -1.753145, -1.391379, 2.288083,  -1.886945};
  const double ev[] = {-1.223845, -0.025688, -0.856911, 0.311450,  -0.216420,
                       0.819476,  -0.225736, 1.070723,  -0.060134, -0.242372,
                       -0.444205, 0.060670,  0.548572,  -0.129881, 0.737952,
                       0.562638,  0.218757,  -0.195177, -0.993835, -1.068154,
                       0.772674,  1.190088,  -1.841031, 2.015262};
  Eigen::VectorXd x(24), y(24);
  for (int i = 0; i < 24; ++i) {
    x(i) = xv[i];
    y(i) = 1.0 + 2.0 * xv[i] + ev[i];
  }
  const auto fit = estat::ols_fit(simple_design(x, y));
  CHECK_THAT(fit.coef(0), WithinAbs(0.838930843789, 1e-10));
  CHECK_THAT(fit.coef(1), WithinAbs(1.642179541041, 1e-10));
  CHECK_THAT(fit.std_error(0), WithinAbs(0.181357157999, 1e-10));
  CHECK_THAT(fit.std_error(1), WithinAbs(0.151249269882, 1e-10));
  CHECK_THAT(fit.r2, WithinAbs(0.842726781023, 1e-10));
  CHECK_THAT(fit.adj_r2, WithinAbs(0.835577998342, 1e-10));
  CHECK_THAT(fit.f_stat, WithinAbs(117.883955724219, 1e-8));
  CHECK_THAT(fit.f_pvalue, WithinAbs(2.647494425935e-10, 1e-16));
  CHECK_THAT(fit.loglik, WithinAbs(-27.434702171936, 1e-9));
  // Information criteria count the error variance as a parameter.
  CHECK_THAT(fit.aic, WithinAbs(-2.0 * fit.loglik + 2.0 * 3, 1e-12));
  CHECK_THAT(fit.bic,
             WithinAbs(-2.0 * fit.loglik + std::log(24.0) * 3, 1e-12));
}

TEST_CASE("residuals are orthogonal to the design and leverage sums to k",
          "[estat]") {
  Rng rng(91);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 12 + static_cast<int>(rng.uniform_below(30));
    const int k = 2 + static_cast<int>(rng.uniform_below(4));
    estat::DesignMatrix d;
    d.X.resize(n, k);
    d.X.col(0).setOnes();
    for (int j = 1; j < k; ++j)
      for (int i = 0; i < n; ++i) d.X(i, j) = rng.gaussian();
    d.y.resize(n);
    for (int i = 0; i < n; ++i) d.y(i) = rng.gaussian();
    d.names.assign(static_cast<std::size_t>(k), "c");
    d.intercept_col = 0;
    const auto fit = estat::ols_fit(d);
    const Eigen::VectorXd xte = d.X.transpose() * fit.residuals;
    REQUIRE(xte.cwiseAbs().maxCoeff() < 1e-8);
    REQUIRE_THAT(fit.leverage.sum(), WithinAbs(static_cast<double>(k), 1e-9));
    REQUIRE((fit.fitted + fit.residuals - d.y).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("collinear columns raise an estimation error naming the column",
          "[estat]") {
  estat::DesignMatrix d;
  d.X.resize(10, 3);
  d.X.col(0).setOnes();
  for (int i = 0; i < 10; ++i) d.X(i, 1) = i;
  d.X.col(2) = 2.0 * d.X.col(1);  // exact duplicate direction
  d.y = Eigen::VectorXd::LinSpaced(10, 0.0, 1.0);
  d.names = {"const", "a", "twice_a"};
  d.intercept_col = 0;
  // Pivoting orders by remaining column norm, so the shorter of the two
  // proportional columns ('a') is the one reported as dependent.
  REQUIRE_THROWS_MATCHES(estat::ols_fit(d), EstimationError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring(
                                 "column 'a' is collinear")));
}

TEST_CASE("perfect fit is flagged instead of dividing by zero", "[estat]") {
  Eigen::VectorXd x(6), y(6);
  x << 1, 2, 3, 4, 5, 6;
  y = 2.0 * x.array() + 1.0;
  const auto fit = estat::ols_fit(simple_design(x, y));
  REQUIRE(fit.perfect_fit);
  REQUIRE_THAT(fit.r2, WithinAbs(1.0, 1e-12));
  REQUIRE(fit.f_pvalue == 0.0);
}

TEST_CASE("distribution functions agree with closed forms", "[estat]") {
  // Points where the CDF has an elementary expression.
  CHECK_THAT(dist::normal_cdf(0.0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(dist::normal_cdf(1.959963984540054),
             WithinAbs(0.975, 1e-12));
  CHECK_THAT(dist::t_cdf(0.0, 7.0), WithinAbs(0.5, 1e-15));
  // t with 1 df is Cauchy: CDF(1) = 1/2 + atan(1)/pi = 3/4.
  CHECK_THAT(dist::t_cdf(1.0, 1.0), WithinAbs(0.75, 1e-12));
  // t with 2 df: CDF(x) = 1/2 + x / (2 sqrt(2 + x^2)).
  CHECK_THAT(dist::t_cdf(1.0, 2.0),
             WithinAbs(0.5 + 1.0 / (2.0 * std::sqrt(3.0)), 1e-12));
  // chi-square with 2 df is exponential(1/2).
  CHECK_THAT(dist::chi2_cdf(2.0, 2.0),
             WithinAbs(1.0 - std::exp(-1.0), 1e-12));
  // 95th percentile of chi-square(1) = z_{0.975}^2.
  CHECK_THAT(dist::chi2_cdf(3.841458820694124, 1.0),
             WithinAbs(0.95, 1e-10));
  // F(1,1) at 1 covers half the mass; F(2,2) has CDF x/(1+x).
  CHECK_THAT(dist::f_cdf(1.0, 1.0, 1.0), WithinAbs(0.5, 1e-12));
  CHECK_THAT(dist::f_cdf(3.0, 2.0, 2.0), WithinAbs(0.75, 1e-12));
}

TEST_CASE("normal quantile inverts the CDF", "[estat]") {
  for (const double p : {0.001, 0.025, 0.2, 0.5, 0.8, 0.975, 0.999}) {
    const double x = dist::normal_quantile(p);
    REQUIRE_THAT(dist::normal_cdf(x), WithinAbs(p, 1e-12));
  }
}

TEST_CASE("upper tail matches one minus the CDF", "[estat]") {
  dist::DistSpec spec;
  spec.family = dist::Family::kChi2;
  spec.df1 = 3.0;
  for (const double x : {0.1, 1.0, 2.5, 7.81, 20.0}) {
    REQUIRE_THAT(dist::upper_tail(spec, x),
                 WithinAbs(1.0 - dist::cdf_eval(spec, x), 1e-13));
  }
}

TEST_CASE("restriction test recovers the direct F formula", "[estat]") {
  Rng rng(4242);
  Eigen::VectorXd x(40), z(40), y(40);
  for (int i = 0; i < 40; ++i) {
    x(i) = rng.gaussian();
    z(i) = rng.gaussian();
    y(i) = 1.0 + 0.5 * x(i) + rng.gaussian();
  }
  estat::DesignMatrix full;
  full.X.resize(40, 3);
  full.X.col(0).setOnes();
  full.X.col(1) = x;
  full.X.col(2) = z;
  full.y = y;
  full.names = {"const", "x", "z"};
  full.intercept_col = 0;
  const auto unrestricted = estat::ols_fit(full);
  const auto restricted = estat::ols_fit(simple_design(x, y));
  const auto w = estat::wald_f(unrestricted.rss, restricted.rss,
                               unrestricted.df_resid, 1,
                               unrestricted.tss_centered);
  const double direct = (restricted.rss - unrestricted.rss) /
                        (unrestricted.rss / unrestricted.df_resid);
  REQUIRE_THAT(w.f, WithinRel(direct, 1e-12));
  REQUIRE(w.df1 == 1.0);
  REQUIRE(w.df2 == static_cast<double>(unrestricted.df_resid));
}

TEST_CASE("generator substreams are reproducible and disjoint", "[estat]") {
  Rng a = Rng::stream(7, 3);
  Rng b = Rng::stream(7, 3);
  Rng c = Rng::stream(7, 4);
  bool streams_differ = false;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next_u64();
    REQUIRE(va == b.next_u64());
    if (va != c.next_u64()) streams_differ = true;
  }
  REQUIRE(streams_differ);
}

TEST_CASE("uniform_below stays in range and uniform01 avoids zero",
          "[estat]") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    REQUIRE(rng.uniform_below(7) < 7);
    const double u = rng.uniform01();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
  }
}

TEST_CASE("gaussian draws have unit-normal moments", "[estat]") {
  Rng rng(123);
  double sum = 0.0, sumsq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  REQUIRE_THAT(mean, WithinAbs(0.0, 0.01));
  REQUIRE_THAT(var, WithinAbs(1.0, 0.02));
}
