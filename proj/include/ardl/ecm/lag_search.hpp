#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ardl/ecm/design.hpp"
#include "ardl/ecm/fit.hpp"
#include "ardl/ecm/metrics.hpp"
#include "ardl/util/errors.hpp"
#include "ardl/util/parallel.hpp"

namespace ardl::ecm {

enum class Criterion { kAic, kBic };

inline const char* criterion_name(Criterion c) {
  return c == Criterion::kAic ? "aic" : "bic";
}

struct LagGridCell {
  int p = 0;
  int q = 0;
  double aic = 0.0;
  double bic = 0.0;
  double mase = 0.0;
  double gmrae = 0.0;
  bool metrics_defined = false;
  bool estimable = false;
  std::string error;
};

struct LagSearchResult {
  std::vector<LagGridCell> grid;  // row-major over p = 1..p_max, q = 0..q_max
  int selected_p = 0;
  int selected_q = 0;
  Criterion criterion = Criterion::kAic;
  int common_first_row = 0;  // shared evaluation sample start
};

namespace detail {

/// Level-forecast vectors for metric computation: actuals are the Y levels
/// from one step before the estimation sample onward, fitted values are
/// Y_{t-1} plus the predicted difference. The pre-sample anchor makes every
/// estimation row contribute one error term.
inline void metrics_for_fit(const std::vector<frame::AlignedSeriesSet>& data,
                            const ArdlFit& fit, LagGridCell& cell) {
  const int t0 = fit.ecm.first_row;
  std::size_t row = 0;
  // Metrics per entity share one accumulator via concatenated vectors with
  // per-entity anchors, never differencing across an entity boundary.
  std::vector<double> actual, fitted;
  for (std::size_t e = 0; e < data.size(); ++e) {
    const auto& Y = data[e].dependent;
    actual.push_back(Y[static_cast<std::size_t>(t0) - 1]);
    fitted.push_back(Y[static_cast<std::size_t>(t0) - 1]);
    for (std::size_t t = static_cast<std::size_t>(t0); t < Y.size(); ++t) {
      actual.push_back(Y[t]);
      fitted.push_back(Y[t - 1] + fit.ols.fitted(static_cast<Eigen::Index>(row)));
      ++row;
    }
  }
  if (data.size() == 1) {
    const auto m = forecast_metrics(actual, fitted);
    cell.mase = m.mase;
    cell.gmrae = m.gmrae;
    cell.metrics_defined = m.defined;
    return;
  }
  // Pooled: accumulate the per-entity sums so anchors never cross entities.
  double abs_err = 0.0, abs_naive = 0.0, log_sum = 0.0;
  std::size_t log_terms = 0, offset = 0;
  bool defined = true;
  for (std::size_t e = 0; e < data.size(); ++e) {
    const std::size_t len =
        data[e].dependent.size() - static_cast<std::size_t>(t0) + 1;
    std::vector<double> a(actual.begin() + static_cast<long>(offset),
                          actual.begin() + static_cast<long>(offset + len));
    std::vector<double> f(fitted.begin() + static_cast<long>(offset),
                          fitted.begin() + static_cast<long>(offset + len));
    offset += len;
    double y_scale = 0.0;
    for (const double y : a) y_scale = std::max(y_scale, std::fabs(y));
    const double eps = 1e-12 * std::max(1.0, y_scale);
    for (std::size_t t = 1; t < a.size(); ++t) {
      const double err = a[t] - f[t];
      const double d = a[t] - a[t - 1];
      abs_err += std::fabs(err);
      abs_naive += std::fabs(d);
      if (std::fabs(d) < eps) continue;
      log_sum += std::log(std::fabs(err) / std::fabs(d));
      ++log_terms;
    }
  }
  if (abs_naive <= 0.0 || log_terms == 0) {
    defined = false;
  } else {
    cell.mase = abs_err / abs_naive;
    cell.gmrae = std::exp(log_sum / static_cast<double>(log_terms));
  }
  cell.metrics_defined = defined;
}

}  // namespace detail

/// Evaluate the full (p, q) grid on a common sample (all cells trimmed to
/// the deepest lag, so information criteria are comparable), then select the
/// criterion minimum with ties broken toward smaller p, then smaller q.
inline LagSearchResult select_lags(
    const std::vector<frame::AlignedSeriesSet>& data, const ArdlSpec& base,
    int p_max, int q_max, Criterion criterion, unsigned threads = 1) {
  if (p_max < 1) throw ConfigError("select_lags: p_max >= 1");
  if (q_max < 0) throw ConfigError("select_lags: q_max >= 0");
  LagSearchResult result;
  result.criterion = criterion;
  ArdlSpec probe = base;
  probe.p = p_max;
  probe.q = q_max;
  result.common_first_row = probe.first_row();

  std::vector<std::pair<int, int>> cells;
  for (int p = 1; p <= p_max; ++p)
    for (int q = 0; q <= q_max; ++q) cells.emplace_back(p, q);
  result.grid.resize(cells.size());

  parallel_for(cells.size(), threads, [&](std::size_t i) {
    LagGridCell& cell = result.grid[i];
    cell.p = cells[i].first;
    cell.q = cells[i].second;
    try {
      ArdlSpec spec = base;
      spec.p = cell.p;
      spec.q = cell.q;
      const ArdlFit fit =
          fit_ardl_ecm(data, spec, result.common_first_row);
      cell.aic = fit.ols.aic;
      cell.bic = fit.ols.bic;
      detail::metrics_for_fit(data, fit, cell);
      cell.estimable = true;
    } catch (const std::exception& ex) {
      cell.estimable = false;
      cell.error = ex.what();
    }
  });

  double best = std::numeric_limits<double>::infinity();
  int best_p = 0, best_q = 0;
  for (const auto& cell : result.grid) {
    if (!cell.estimable) continue;
    const double value = (criterion == Criterion::kAic) ? cell.aic : cell.bic;
    const bool better =
        value < best ||
        (value == best && (cell.p < best_p ||
                           (cell.p == best_p && cell.q < best_q)));
    if (best_p == 0 || better) {
      best = value;
      best_p = cell.p;
      best_q = cell.q;
    }
  }
  if (best_p == 0)
    throw EstimationError("select_lags: no grid cell was estimable");
  result.selected_p = best_p;
  result.selected_q = best_q;
  return result;
}

inline LagSearchResult select_lags(const frame::AlignedSeriesSet& data,
                                   const ArdlSpec& base, int p_max, int q_max,
                                   Criterion criterion, unsigned threads = 1) {
  return select_lags(std::vector<frame::AlignedSeriesSet>{data}, base, p_max,
                     q_max, criterion, threads);
}

}  // namespace ardl::ecm
