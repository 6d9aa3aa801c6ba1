#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "ardl/ecm/design.hpp"
#include "ardl/ecm/fit.hpp"
#include "ardl/estat/ols.hpp"
#include "ardl/rng.hpp"
#include "ardl/util/errors.hpp"
#include "ardl/util/parallel.hpp"

namespace ardl::bounds {

struct BootstrapParams {
  int replications = 2000;
  std::uint64_t seed = 0;
  std::vector<double> levels = {0.90, 0.95, 0.99};
  unsigned threads = 1;

  void validate() const {
    if (replications < 99)
      throw ConfigError("bounds: B >= 99 replications required");
    if (levels.empty()) throw ConfigError("bounds: need quantile levels");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (!(levels[i] > 0.0 && levels[i] < 1.0))
        throw ConfigError("bounds: quantile levels must lie in (0,1)");
      if (i > 0 && levels[i] <= levels[i - 1])
        throw ConfigError("bounds: quantile levels must strictly increase");
    }
  }
};

struct PssStat {
  double f = 0.0;
  double p_asymptotic = 1.0;  // F(m, df) tail; bootstrap p is the decision basis
  int m = 0;                  // restriction count
  estat::OlsFit unrestricted;
  estat::OlsFit restricted;
};

struct BoundsResult {
  double f_stat = 0.0;
  int m = 0;
  std::vector<double> levels;
  std::vector<double> critical_values;
  std::vector<bool> reject;     // per level: f_stat > cv(level)
  double p_value = 1.0;         // bootstrap proportion >= f_stat
  int replications = 0;
  std::uint64_t seed = 0;
  bool summed_form = false;
  std::string narrative;
};

namespace detail {

/// Design with the given columns removed (and optionally extra named
/// columns appended), preserving order.
inline estat::DesignMatrix drop_columns(const estat::DesignMatrix& full,
                                        const std::vector<int>& drop) {
  estat::DesignMatrix out;
  out.y = full.y;
  std::vector<int> keep;
  for (int c = 0; c < static_cast<int>(full.X.cols()); ++c)
    if (std::find(drop.begin(), drop.end(), c) == drop.end()) keep.push_back(c);
  out.X.resize(full.X.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.X.col(static_cast<Eigen::Index>(i)) = full.X.col(keep[i]);
    out.names.push_back(full.names[static_cast<std::size_t>(keep[i])]);
  }
  if (full.intercept_col) {
    for (std::size_t i = 0; i < keep.size(); ++i)
      if (keep[i] == *full.intercept_col)
        out.intercept_col = static_cast<int>(i);
  }
  return out;
}

/// Restricted design under the summed-form null: the dependent's level
/// column is folded away by reparameterizing each regressor level as
/// (X_{t-1} - Y_{t-1}); the span of the remaining columns equals the full
/// span intersected with {sum of level coefficients = 0}.
inline estat::DesignMatrix summed_restricted(const ecm::EcmDesign& d) {
  const int y_col = d.level_cols.front();
  estat::DesignMatrix out = drop_columns(d.design, {y_col});
  // Locate the regressor level columns in the reduced design: they shifted
  // left by one position when the Y level column was removed.
  for (std::size_t j = 1; j < d.level_cols.size(); ++j) {
    const int old_col = d.level_cols[j];
    const int new_col = old_col - 1;
    out.X.col(new_col) =
        d.design.X.col(old_col) - d.design.X.col(y_col);
    out.names[static_cast<std::size_t>(new_col)] += "-lev";
  }
  return out;
}

}  // namespace detail

/// PSS cointegration F: the joint Wald test that every level coefficient is
/// zero (m = 1 + #regressors). With summed_form, instead the single
/// restriction that the level coefficients sum to zero (m = 1), which
/// cannot detect cancelling levels and is provided for comparison only.
inline PssStat pss_f_statistic(const std::vector<frame::AlignedSeriesSet>& data,
                               const ecm::ArdlSpec& spec,
                               bool summed_form = false,
                               int first_row_override = -1) {
  const ecm::EcmDesign full = ecm::build_ecm_design(data, spec, first_row_override);
  PssStat out;
  out.unrestricted = estat::ols_fit(full.design);
  estat::DesignMatrix restricted_design =
      summed_form ? detail::summed_restricted(full)
                  : detail::drop_columns(full.design, full.level_cols);
  out.restricted = estat::ols_fit(restricted_design);
  out.m = summed_form ? 1 : static_cast<int>(full.level_cols.size());
  const auto wald = estat::wald_f(out.unrestricted.rss, out.restricted.rss,
                                  out.unrestricted.df_resid, out.m,
                                  out.unrestricted.tss_centered);
  out.f = wald.f;
  out.p_asymptotic = wald.p_value;
  return out;
}

inline PssStat pss_f_statistic(const frame::AlignedSeriesSet& data,
                               const ecm::ArdlSpec& spec,
                               bool summed_form = false,
                               int first_row_override = -1) {
  return pss_f_statistic(std::vector<frame::AlignedSeriesSet>{data}, spec,
                         summed_form, first_row_override);
}

struct BootstrapSample {
  std::vector<double> f_values;          // one per replication, slot order
  std::vector<double> critical_values;   // per requested level, nearest rank
};

namespace detail {

/// Coefficient layout of the no-levels restricted ECM, read off positionally
/// from the shared column order.
struct RestrictedCoefs {
  double intercept = 0.0;
  std::vector<double> dy_lags;                    // lags 1..p
  std::vector<std::vector<double>> dx;            // per regressor, design order
  std::vector<double> dummies;                    // entities 2..E
  bool has_intercept = true;
  bool contemporaneous = false;
  int q = 0;
};

inline RestrictedCoefs read_restricted(const ecm::EcmDesign& full,
                                       const estat::OlsFit& restricted,
                                       std::size_t n_entities) {
  RestrictedCoefs rc;
  rc.has_intercept = full.intercept;
  rc.contemporaneous = full.contemporaneous;
  rc.q = full.q;
  std::size_t c = 0;
  if (full.intercept) rc.intercept = restricted.coef(static_cast<Eigen::Index>(c++));
  for (int i = 0; i < full.p; ++i)
    rc.dy_lags.push_back(restricted.coef(static_cast<Eigen::Index>(c++)));
  const std::size_t n_reg = full.regressor_names.size();
  const int per_reg = full.q + (full.contemporaneous ? 1 : 0);
  for (std::size_t j = 0; j < n_reg; ++j) {
    std::vector<double> b;
    for (int i = 0; i < per_reg; ++i)
      b.push_back(restricted.coef(static_cast<Eigen::Index>(c++)));
    rc.dx.push_back(std::move(b));
  }
  for (std::size_t e = 1; e < n_entities; ++e)
    rc.dummies.push_back(restricted.coef(static_cast<Eigen::Index>(c++)));
  return rc;
}

/// Rebuild one entity's dependent series under the restricted (no level
/// terms) model: differences follow the fitted short-run dynamics plus the
/// supplied innovations, levels cumulate from the observed pre-sample.
inline std::vector<double> rebuild_dependent(
    const frame::AlignedSeriesSet& d, const RestrictedCoefs& rc, int t0,
    int p, std::size_t entity_index, const double* innovations) {
  const std::size_t n = d.length();
  std::vector<double> dy(n, 0.0);   // dy[t] = Y_t - Y_{t-1}, defined for t >= 1
  std::vector<double> y(n, 0.0);
  for (std::size_t t = 0; t < static_cast<std::size_t>(t0); ++t)
    y[t] = d.dependent[t];
  for (std::size_t t = 1; t < static_cast<std::size_t>(t0); ++t)
    dy[t] = d.dependent[t] - d.dependent[t - 1];
  for (std::size_t t = static_cast<std::size_t>(t0); t < n; ++t) {
    double mean = rc.intercept;
    for (int i = 1; i <= p; ++i)
      mean += rc.dy_lags[static_cast<std::size_t>(i - 1)] *
              dy[t - static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < d.regressors.size(); ++j) {
      const auto& Xj = d.regressors[j];
      std::size_t slot = 0;
      if (rc.contemporaneous)
        mean += rc.dx[j][slot++] * (Xj[t] - Xj[t - 1]);
      for (int i = 1; i <= rc.q; ++i)
        mean += rc.dx[j][slot++] * (Xj[t - static_cast<std::size_t>(i)] -
                                    Xj[t - static_cast<std::size_t>(i) - 1]);
    }
    if (entity_index >= 1 && !rc.dummies.empty())
      mean += rc.dummies[entity_index - 1];
    const double innovation = innovations[t - static_cast<std::size_t>(t0)];
    dy[t] = mean + innovation;
    y[t] = y[t - 1] + dy[t];
  }
  return y;
}

}  // namespace detail

/// Residual bootstrap of the PSS F distribution under the no-cointegration
/// null. The restricted (no level terms) ECM is fit once; its centered
/// residuals form the innovation pool. Replication b draws innovations iid
/// from stream (seed, b), rebuilds the dependent recursively holding the
/// observed regressor paths fixed, and recomputes the F statistic on the
/// rebuilt data. Critical values are nearest-rank ceil(level*B) empirical
/// quantiles. Slot-indexed streams make the sample independent of thread
/// count and schedule.
///
/// When the fitted short-run dynamics are explosive (possible when the data
/// are strongly cointegrated, so the no-levels model is badly misspecified),
/// a rebuilt series can overflow estimation. Such a replication contributes
/// F = +infinity: it can only raise critical values and the p-value, never
/// manufacture a rejection.
inline BootstrapSample bootstrap_critical_values(
    const std::vector<frame::AlignedSeriesSet>& data, const ecm::ArdlSpec& spec,
    const BootstrapParams& params, bool summed_form = false) {
  params.validate();
  const ecm::EcmDesign full = ecm::build_ecm_design(data, spec);
  const estat::DesignMatrix restricted_design =
      detail::drop_columns(full.design, full.level_cols);
  const estat::OlsFit restricted = estat::ols_fit(restricted_design);
  const auto rc = detail::read_restricted(full, restricted, data.size());

  // Centered residual pool shared across entities.
  const Eigen::Index n_rows = restricted.residuals.size();
  std::vector<double> pool(static_cast<std::size_t>(n_rows));
  const double r_mean = restricted.residuals.mean();
  for (Eigen::Index i = 0; i < n_rows; ++i)
    pool[static_cast<std::size_t>(i)] = restricted.residuals(i) - r_mean;

  const int t0 = full.first_row;
  BootstrapSample out;
  out.f_values.assign(static_cast<std::size_t>(params.replications), 0.0);
  parallel_for(out.f_values.size(), params.threads, [&](std::size_t b) {
    Rng rng = Rng::stream(params.seed, b);
    std::vector<double> innovations(pool.size());
    for (auto& v : innovations) v = pool[rng.uniform_below(pool.size())];
    std::vector<frame::AlignedSeriesSet> rebuilt = data;
    std::size_t offset = 0;
    for (std::size_t e = 0; e < data.size(); ++e) {
      rebuilt[e].dependent = detail::rebuild_dependent(
          data[e], rc, t0, full.p, e, innovations.data() + offset);
      offset += full.entity_rows[e];
    }
    try {
      const auto stat = pss_f_statistic(rebuilt, spec, summed_form);
      out.f_values[b] = stat.f;
    } catch (const std::exception&) {
      out.f_values[b] = std::numeric_limits<double>::infinity();
    }
  });

  std::vector<double> sorted = out.f_values;
  std::sort(sorted.begin(), sorted.end());
  for (const double level : params.levels) {
    const auto rank = static_cast<std::size_t>(
        std::ceil(level * static_cast<double>(params.replications)));
    out.critical_values.push_back(sorted[std::min(rank, sorted.size()) - 1]);
  }
  return out;
}

/// Full decision object: statistic, bootstrap critical values, bootstrap
/// p-value (1 + #{F_b >= f}) / (B + 1), and per-level decisions.
inline BoundsResult bounds_test(const std::vector<frame::AlignedSeriesSet>& data,
                                const ecm::ArdlSpec& spec,
                                const BootstrapParams& params,
                                bool summed_form = false,
                                std::vector<double>* f_sample_out = nullptr) {
  const PssStat stat = pss_f_statistic(data, spec, summed_form);
  const BootstrapSample boot =
      bootstrap_critical_values(data, spec, params, summed_form);

  BoundsResult result;
  result.f_stat = stat.f;
  result.m = stat.m;
  result.levels = params.levels;
  result.critical_values = boot.critical_values;
  result.replications = params.replications;
  result.seed = params.seed;
  result.summed_form = summed_form;
  std::size_t n_ge = 0;
  for (const double fb : boot.f_values)
    if (fb >= stat.f) ++n_ge;
  result.p_value = static_cast<double>(1 + n_ge) /
                   static_cast<double>(params.replications + 1);
  for (std::size_t i = 0; i < params.levels.size(); ++i) {
    const bool reject = stat.f > boot.critical_values[i];
    result.reject.push_back(reject);
    char line[160];
    std::snprintf(line, sizeof(line),
                  "at the %.0f%% level: %s the null of no cointegration "
                  "(F=%.4f vs cv=%.4f)\n",
                  100.0 * (1.0 - params.levels[i]),
                  reject ? "reject" : "fail to reject", stat.f,
                  boot.critical_values[i]);
    result.narrative += line;
  }
  if (f_sample_out) *f_sample_out = boot.f_values;
  return result;
}

inline BoundsResult bounds_test(const frame::AlignedSeriesSet& data,
                                const ecm::ArdlSpec& spec,
                                const BootstrapParams& params,
                                bool summed_form = false,
                                std::vector<double>* f_sample_out = nullptr) {
  return bounds_test(std::vector<frame::AlignedSeriesSet>{data}, spec, params,
                     summed_form, f_sample_out);
}

}  // namespace ardl::bounds
