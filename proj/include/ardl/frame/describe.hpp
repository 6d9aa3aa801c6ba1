#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ardl/frame/panel.hpp"
#include "ardl/util/errors.hpp"

namespace ardl::frame {

struct SummaryStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::size_t n_observed = 0;
  std::size_t n_missing = 0;
};

/// Quantile by linear interpolation between closest ranks on sorted data:
/// position h = (n-1)p, value = x[floor(h)] + (h - floor(h))(x[floor(h)+1] -
/// x[floor(h)]).
inline double quantile_type7(std::vector<double> sorted_values, double p) {
  if (sorted_values.empty())
    throw std::invalid_argument("quantile: empty input");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p in [0,1]");
  const std::size_t n = sorted_values.size();
  if (n == 1) return sorted_values[0];
  const double h = static_cast<double>(n - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - std::floor(h);
  return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo]);
}

inline SummaryStats summarize_values(std::vector<double> values) {
  if (values.empty())
    throw DataError("summarize: no observed values");
  std::sort(values.begin(), values.end());
  SummaryStats s;
  s.n_observed = values.size();
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile_type7(values, 0.25);
  s.median = quantile_type7(values, 0.50);
  s.q3 = quantile_type7(values, 0.75);
  double sum = 0.0;
  for (const double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  return s;
}

/// Per-indicator summary over all entities and years, missing cells
/// excluded. Indicators with no observed values are absent from the result.
inline std::map<std::string, SummaryStats> describe(const PanelTable& panel) {
  std::map<std::string, SummaryStats> out;
  for (std::size_t k = 0; k < panel.indicators().size(); ++k) {
    std::vector<double> values;
    std::size_t missing = 0;
    for (std::size_t e = 0; e < panel.entities().size(); ++e) {
      for (std::size_t t = 0; t < panel.years().size(); ++t) {
        if (panel.is_missing(e, k, t)) {
          ++missing;
        } else {
          values.push_back(panel.value(e, k, t));
        }
      }
    }
    if (values.empty()) continue;
    auto s = summarize_values(std::move(values));
    s.n_missing = missing;
    out[panel.indicators()[k]] = s;
  }
  return out;
}

}  // namespace ardl::frame
