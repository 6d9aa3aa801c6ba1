#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ardl/estat/design.hpp"
#include "ardl/estat/dist.hpp"
#include "ardl/estat/ols.hpp"
#include "ardl/util/errors.hpp"

namespace ardl::diag {

/// One diagnostic outcome. `dist` names the reference distribution when the
/// p-value is tabulated; tests whose p-value comes from a transformed
/// statistic (Shapiro-Wilk) expose that transform in dist_statistic, and
/// bootstrap-calibrated statistics carry no DistSpec at all.
struct TestResult {
  std::string name;
  double statistic = 0.0;
  double p_value = 1.0;
  std::optional<dist::DistSpec> dist;
  std::optional<double> dist_statistic;  // value the p-value was read at
  bool degenerate = false;
  std::string detail;
  std::string error;  // non-empty when the test itself failed to run
};

/// Breusch-Godfrey LM test for residual autocorrelation up to lag p:
/// auxiliary regression of residuals on the original design plus residual
/// lags 1..p (zero-filled where unavailable); LM = n R^2, chi-square(p).
inline TestResult breusch_godfrey(const estat::OlsFit& fit,
                                  const estat::DesignMatrix& X, int p) {
  if (p < 1) throw ConfigError("breusch_godfrey: p >= 1");
  const Eigen::Index n = X.X.rows();
  if (n - X.X.cols() - p < 1)
    throw DataError("breusch_godfrey: sample too small for lag order " +
                    std::to_string(p));
  estat::DesignMatrix aux;
  aux.X.resize(n, X.X.cols() + p);
  aux.X.leftCols(X.X.cols()) = X.X;
  aux.names = X.names;
  aux.intercept_col = X.intercept_col;
  for (int lag = 1; lag <= p; ++lag) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(n);
    for (Eigen::Index t = lag; t < n; ++t)
      col(t) = fit.residuals(t - lag);
    aux.X.col(X.X.cols() + lag - 1) = col;
    aux.names.push_back("resid@-" + std::to_string(lag));
  }
  aux.y = fit.residuals;
  const auto aux_fit = estat::ols_fit(aux);
  TestResult out;
  out.name = "breusch_godfrey";
  const double r2 = std::max(0.0, aux_fit.r2);
  out.statistic = static_cast<double>(n) * r2;
  out.dist = dist::DistSpec{dist::Family::kChi2, static_cast<double>(p), 0.0};
  out.p_value = 1.0 - dist::chi2_cdf(out.statistic, static_cast<double>(p));
  out.detail = "lags=" + std::to_string(p);
  return out;
}

/// Ljung-Box Q up to lag h on a residual sequence, using the biased
/// (divide-by-n) autocovariance convention: Q = n(n+2) sum rho_k^2/(n-k),
/// chi-square(h).
inline TestResult ljung_box(const std::vector<double>& residuals, int h) {
  const auto n = static_cast<long>(residuals.size());
  if (h < 1) throw ConfigError("ljung_box: h >= 1");
  if (h >= n) throw DataError("ljung_box: h must be below the sample size");
  TestResult out;
  out.name = "ljung_box";
  out.detail = "lags=" + std::to_string(h);
  double mean = 0.0;
  for (const double e : residuals) mean += e;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (const double e : residuals) c0 += (e - mean) * (e - mean);
  c0 /= static_cast<double>(n);
  if (c0 <= 0.0) {
    out.degenerate = true;
    out.detail += " zero-variance";
    out.statistic = 0.0;
    out.p_value = 1.0;
    return out;
  }
  double q = 0.0;
  for (int k = 1; k <= h; ++k) {
    double ck = 0.0;
    for (long t = k; t < n; ++t)
      ck += (residuals[static_cast<std::size_t>(t)] - mean) *
            (residuals[static_cast<std::size_t>(t - k)] - mean);
    ck /= static_cast<double>(n);
    const double rho = ck / c0;
    q += rho * rho / static_cast<double>(n - k);
  }
  out.statistic = static_cast<double>(n) * static_cast<double>(n + 2) * q;
  out.dist = dist::DistSpec{dist::Family::kChi2, static_cast<double>(h), 0.0};
  out.p_value = 1.0 - dist::chi2_cdf(out.statistic, static_cast<double>(h));
  return out;
}

/// Breusch-Pagan heteroskedasticity test. Default is the Koenker
/// studentized form (squared residuals on X, LM = n R^2); the classic
/// Gaussian-scaled variant uses LM = ESS/2 of the regression of
/// e^2/mean(e^2) on X. Both are chi-square(k - 1).
inline TestResult breusch_pagan(const estat::OlsFit& fit,
                                const estat::DesignMatrix& X,
                                bool koenker = true) {
  const Eigen::Index n = X.X.rows();
  const Eigen::Index k = X.X.cols();
  TestResult out;
  out.name = "breusch_pagan";
  out.detail = koenker ? "koenker" : "classic";
  if (k < 2) {
    out.degenerate = true;
    out.detail += " intercept-only-design";
    return out;
  }
  if (n <= k + 1) throw DataError("breusch_pagan: n > k + 1 required");
  estat::DesignMatrix aux;
  aux.X = X.X;
  aux.names = X.names;
  aux.intercept_col = X.intercept_col;
  aux.y.resize(n);
  double mean_sq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    mean_sq += fit.residuals(i) * fit.residuals(i);
  mean_sq /= static_cast<double>(n);
  if (mean_sq <= 0.0) {
    out.degenerate = true;
    out.detail += " zero-residuals";
    return out;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e2 = fit.residuals(i) * fit.residuals(i);
    aux.y(i) = koenker ? e2 : e2 / mean_sq;
  }
  const auto aux_fit = estat::ols_fit(aux);
  const double df = static_cast<double>(k - 1);
  if (koenker) {
    out.statistic = static_cast<double>(n) * std::max(0.0, aux_fit.r2);
  } else {
    const double ess = std::max(0.0, aux_fit.tss_centered - aux_fit.rss);
    out.statistic = 0.5 * ess;
  }
  out.dist = dist::DistSpec{dist::Family::kChi2, df, 0.0};
  out.p_value = 1.0 - dist::chi2_cdf(out.statistic, df);
  return out;
}

namespace detail {

/// Royston (1995) AS R94 polynomial weights and p-value transform.
struct ShapiroWilk {
  double w = 0.0;
  double z = 0.0;
  double p = 1.0;
  bool exact_small_n = false;  // n == 3 uses the exact arcsine formula
};

inline ShapiroWilk shapiro_wilk_impl(std::vector<double> x) {
  const std::size_t n = x.size();
  std::sort(x.begin(), x.end());
  if (x.back() - x.front() <= 0.0)
    throw DataError("shapiro_wilk: zero-variance input");

  // Blom scores and their squared norm.
  std::vector<double> m(n);
  double summ2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = dist::normal_quantile(
        (static_cast<double>(i + 1) - 0.375) / (static_cast<double>(n) + 0.25));
    summ2 += m[i] * m[i];
  }
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(static_cast<double>(n));

  std::vector<double> a(n);
  if (n == 3) {
    a[0] = -std::sqrt(0.5);
    a[1] = 0.0;
    a[2] = std::sqrt(0.5);
  } else {
    const double a_n =
        -2.706056 * std::pow(rsn, 5) + 4.434685 * std::pow(rsn, 4) -
        2.071190 * std::pow(rsn, 3) - 0.147981 * rsn * rsn + 0.221157 * rsn +
        m[n - 1] / ssumm2;
    std::size_t i1;
    double phi;
    if (n > 5) {
      const double a_n1 =
          -3.582633 * std::pow(rsn, 5) + 5.682633 * std::pow(rsn, 4) -
          1.752461 * std::pow(rsn, 3) - 0.293762 * rsn * rsn + 0.042981 * rsn +
          m[n - 2] / ssumm2;
      i1 = 2;  // 0-based index of the first uncorrected weight
      phi = (summ2 - 2.0 * m[n - 1] * m[n - 1] - 2.0 * m[n - 2] * m[n - 2]) /
            (1.0 - 2.0 * a_n * a_n - 2.0 * a_n1 * a_n1);
      a[n - 1] = a_n;
      a[n - 2] = a_n1;
      a[0] = -a_n;
      a[1] = -a_n1;
    } else {
      i1 = 1;
      phi = (summ2 - 2.0 * m[n - 1] * m[n - 1]) / (1.0 - 2.0 * a_n * a_n);
      a[n - 1] = a_n;
      a[0] = -a_n;
    }
    const double sqrt_phi = std::sqrt(phi);
    for (std::size_t i = i1; i < n - i1; ++i) a[i] = m[i] / sqrt_phi;
  }

  double mean = 0.0;
  for (const double v : x) mean += v;
  mean /= static_cast<double>(n);
  double numerator = 0.0, denominator = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    numerator += a[i] * x[i];
    denominator += (x[i] - mean) * (x[i] - mean);
  }
  ShapiroWilk out;
  out.w = (numerator * numerator) / denominator;
  if (out.w > 1.0) out.w = 1.0;

  const double dn = static_cast<double>(n);
  if (n == 3) {
    out.exact_small_n = true;
    const double pi6 = 6.0 / 3.14159265358979323846;
    const double stqr = std::asin(std::sqrt(0.75));
    out.p = std::clamp(pi6 * (std::asin(std::sqrt(out.w)) - stqr), 0.0, 1.0);
    out.z = 0.0;
    return out;
  }
  double w_t, mu, sigma;
  if (n <= 11) {
    const double gamma = 0.459 * dn - 2.273;
    w_t = -std::log(gamma - std::log1p(-out.w));
    mu = 0.5440 - 0.39978 * dn + 0.025054 * dn * dn -
         0.0006714 * dn * dn * dn;
    sigma = std::exp(1.3822 - 0.77857 * dn + 0.062767 * dn * dn -
                     0.0020322 * dn * dn * dn);
  } else {
    const double ln_n = std::log(dn);
    w_t = std::log1p(-out.w);
    mu = -1.5861 - 0.31082 * ln_n - 0.083751 * ln_n * ln_n +
         0.0038915 * ln_n * ln_n * ln_n;
    sigma = std::exp(-0.4803 - 0.082676 * ln_n + 0.0030302 * ln_n * ln_n);
  }
  out.z = (w_t - mu) / sigma;
  out.p = 1.0 - dist::normal_cdf(out.z);
  return out;
}

}  // namespace detail

/// Shapiro-Wilk normality test (AS R94). The reported statistic is W; the
/// p-value is the upper normal tail of Royston's transformed statistic,
/// exposed in dist_statistic (n = 3 uses the exact arcsine formula).
inline TestResult shapiro_wilk(const std::vector<double>& sample) {
  if (sample.size() < 3 || sample.size() > 5000)
    throw DataError("shapiro_wilk: n must be in [3, 5000]");
  const auto sw = detail::shapiro_wilk_impl(sample);
  TestResult out;
  out.name = "shapiro_wilk";
  out.statistic = sw.w;
  out.p_value = sw.p;
  if (!sw.exact_small_n) {
    out.dist = dist::DistSpec{dist::Family::kNormal, 0.0, 0.0};
    out.dist_statistic = sw.z;
  } else {
    out.detail = "exact-n3";
  }
  return out;
}

/// Ramsey RESET: augment the design with powers 2..max_power of the
/// standardized fitted values and F-test the added terms.
inline TestResult ramsey_reset(const estat::OlsFit& fit,
                               const estat::DesignMatrix& X,
                               int max_power = 3) {
  if (max_power < 2) throw ConfigError("ramsey_reset: max_power >= 2");
  const Eigen::Index n = X.X.rows();
  const int n_powers = max_power - 1;
  if (n <= X.X.cols() + n_powers)
    throw DataError("ramsey_reset: n > k + #powers required");
  const double f_mean = fit.fitted.mean();
  const double f_var =
      (fit.fitted.array() - f_mean).square().sum() / static_cast<double>(n - 1);
  if (f_var <= 0.0)
    throw EstimationError("ramsey_reset: fitted values are constant");
  const Eigen::ArrayXd z = (fit.fitted.array() - f_mean) / std::sqrt(f_var);

  estat::DesignMatrix aug;
  aug.X.resize(n, X.X.cols() + n_powers);
  aug.X.leftCols(X.X.cols()) = X.X;
  aug.names = X.names;
  aug.intercept_col = X.intercept_col;
  for (int p = 2; p <= max_power; ++p) {
    aug.X.col(X.X.cols() + p - 2) = z.pow(p).matrix();
    aug.names.push_back("fitted^" + std::to_string(p));
  }
  aug.y = X.y;
  const auto aug_fit = estat::ols_fit(aug);
  const auto wald = estat::wald_f(aug_fit.rss, fit.rss, aug_fit.df_resid,
                                  n_powers, fit.tss_centered);
  TestResult out;
  out.name = "ramsey_reset";
  out.statistic = wald.f;
  out.p_value = wald.p_value;
  out.dist = dist::DistSpec{dist::Family::kFisherF, wald.df1, wald.df2};
  out.detail = "powers=2.." + std::to_string(max_power);
  if (aug_fit.perfect_fit && fit.perfect_fit) out.degenerate = true;
  return out;
}

/// Rainbow linearity test: refit on the central `fraction` of rows (time
/// order) and compare fits. F = ((RSS_full - RSS_sub)/(n - n_sub)) /
/// (RSS_sub/(n_sub - k)), F(n - n_sub, n_sub - k).
inline TestResult rainbow(const estat::DesignMatrix& X, double fraction = 0.5) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ConfigError("rainbow: fraction in (0,1]");
  const Eigen::Index n = X.X.rows();
  const Eigen::Index k = X.X.cols();
  const auto n_sub = static_cast<Eigen::Index>(
      std::round(fraction * static_cast<double>(n)));
  TestResult out;
  out.name = "rainbow";
  out.detail = "fraction=" + std::to_string(fraction);
  const auto full_fit = estat::ols_fit(X);
  if (n_sub >= n) {
    out.statistic = 0.0;
    out.p_value = 1.0;
    out.degenerate = true;
    out.detail += " sub=full";
    return out;
  }
  if (n_sub <= k)
    throw DataError("rainbow: central subsample must exceed column count");
  const Eigen::Index start = (n - n_sub) / 2;
  estat::DesignMatrix sub;
  sub.X = X.X.middleRows(start, n_sub);
  sub.y = X.y.segment(start, n_sub);
  sub.names = X.names;
  sub.intercept_col = X.intercept_col;
  const auto sub_fit = estat::ols_fit(sub);

  const double df1 = static_cast<double>(n - n_sub);
  const double df2 = static_cast<double>(n_sub - k);
  const double scale = (full_fit.tss_centered > 0.0) ? full_fit.tss_centered : 1.0;
  if (full_fit.rss < 1e-12 * scale && sub_fit.rss < 1e-12 * scale) {
    out.statistic = 0.0;
    out.p_value = 1.0;
    out.degenerate = true;
    out.detail += " perfect-fit";
    out.dist = dist::DistSpec{dist::Family::kFisherF, df1, df2};
    return out;
  }
  double num = (full_fit.rss - sub_fit.rss) / df1;
  if (num < 0.0) num = 0.0;
  out.statistic = num / (sub_fit.rss / df2);
  out.dist = dist::DistSpec{dist::Family::kFisherF, df1, df2};
  out.p_value = 1.0 - dist::f_cdf(out.statistic, df1, df2);
  return out;
}

}  // namespace ardl::diag
