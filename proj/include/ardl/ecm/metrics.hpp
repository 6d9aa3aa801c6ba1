#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ardl::ecm {

/// Scaled in-sample forecast accuracy. Both metrics compare model errors to
/// the one-step naive forecast y_hat_t = y_{t-1} over t >= 2 (1-based), the
/// shared index set that makes the naive forecast score exactly 1.
struct ForecastMetrics {
  double mase = 0.0;
  double gmrae = 0.0;
  bool defined = false;         // false when the naive scale degenerates
  std::size_t gmrae_excluded = 0;  // terms dropped by the epsilon guard
};

/// MASE = mean|e_t| / mean|y_t - y_{t-1}|; GMRAE = exp(mean log ratio of the
/// same terms). GMRAE terms whose naive error falls below 1e-12 * max|y| are
/// excluded and counted (log of ~0/0 is noise, not signal). A naive scale of
/// zero (constant series) leaves both metrics undefined.
inline ForecastMetrics forecast_metrics(const std::vector<double>& actual,
                                        const std::vector<double>& fitted) {
  if (actual.size() != fitted.size())
    throw std::invalid_argument("forecast_metrics: length mismatch");
  const std::size_t n = actual.size();
  if (n < 3) throw std::invalid_argument("forecast_metrics: need length >= 3");

  double y_scale = 0.0;
  for (const double y : actual) y_scale = std::max(y_scale, std::fabs(y));
  const double eps = 1e-12 * std::max(1.0, y_scale);

  ForecastMetrics out;
  double abs_err_sum = 0.0;
  double abs_naive_sum = 0.0;
  double log_ratio_sum = 0.0;
  std::size_t log_terms = 0;
  for (std::size_t t = 1; t < n; ++t) {
    const double e = actual[t] - fitted[t];
    const double d = actual[t] - actual[t - 1];
    abs_err_sum += std::fabs(e);
    abs_naive_sum += std::fabs(d);
    if (std::fabs(d) < eps) {
      ++out.gmrae_excluded;
      continue;
    }
    log_ratio_sum += std::log(std::fabs(e) / std::fabs(d));
    ++log_terms;
  }
  if (abs_naive_sum <= 0.0 || log_terms == 0) {
    out.defined = false;
    return out;
  }
  out.mase = abs_err_sum / abs_naive_sum;
  out.gmrae = std::exp(log_ratio_sum / static_cast<double>(log_terms));
  out.defined = true;
  return out;
}

}  // namespace ardl::ecm
