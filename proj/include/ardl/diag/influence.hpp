#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ardl/estat/ols.hpp"
#include "ardl/util/errors.hpp"

namespace ardl::diag {

/// Flagging thresholds, expressed as multiples of the conventional cutoffs:
/// Cook's distance is flagged above cooks_multiple/n and leverage above
/// leverage_multiple*k/n.
struct InfluenceThresholds {
  double cooks_multiple = 4.0;
  double leverage_multiple = 2.0;
};

struct InfluenceReport {
  std::vector<double> leverage;
  std::vector<double> cooks;
  std::vector<std::size_t> flagged_cooks;
  std::vector<std::size_t> flagged_leverage;
  std::vector<std::size_t> infinite;  // h_ii = 1 (within rounding): D_i undefined
  double cooks_threshold = 0.0;
  double leverage_threshold = 0.0;
};

/// Per-observation leverage and Cook's distance
/// D_i = e_i^2 h_ii / (k s^2 (1 - h_ii)^2).
inline InfluenceReport influence_measures(const estat::OlsFit& fit,
                                          const InfluenceThresholds& thr = {}) {
  const auto n = static_cast<std::size_t>(fit.n);
  const auto k = static_cast<double>(fit.k);
  if (fit.n <= fit.k) throw DataError("influence_measures: n > k required");
  if (fit.sigma2 <= 0.0)
    throw EstimationError("influence_measures: zero residual variance");
  InfluenceReport out;
  out.leverage.resize(n);
  out.cooks.resize(n);
  out.cooks_threshold = thr.cooks_multiple / static_cast<double>(n);
  out.leverage_threshold = thr.leverage_multiple * k / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = fit.leverage(static_cast<Eigen::Index>(i));
    const double e = fit.residuals(static_cast<Eigen::Index>(i));
    out.leverage[i] = h;
    // At unit leverage the deletion formula degenerates to 0/0; rounding in
    // the QR can leave such a row a few ulp below 1, so absorb that band.
    if (h >= 1.0 - 1e-8) {
      out.cooks[i] = std::numeric_limits<double>::infinity();
      out.infinite.push_back(i);
    } else {
      const double one_minus = 1.0 - h;
      out.cooks[i] = e * e * h / (k * fit.sigma2 * one_minus * one_minus);
    }
    if (out.cooks[i] > out.cooks_threshold) out.flagged_cooks.push_back(i);
    if (h > out.leverage_threshold) out.flagged_leverage.push_back(i);
  }
  return out;
}

}  // namespace ardl::diag
