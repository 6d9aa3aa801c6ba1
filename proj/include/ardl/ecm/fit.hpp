#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ardl/ecm/design.hpp"
#include "ardl/estat/ols.hpp"
#include "ardl/util/errors.hpp"

namespace ardl::ecm {

/// ECM estimation result: the regression itself plus the level-term block
/// (lambda, with the dependent's level coefficient first) and the long-run
/// coefficients recovered from it.
struct ArdlFit {
  estat::OlsFit ols;
  EcmDesign ecm;                     // design bookkeeping (matrix included)
  std::vector<double> lambda;        // level coefficients, lambda1 first
  double adjustment_speed = 0.0;     // lambda1
  double adjustment_t = 0.0;         // its t statistic
  bool long_run_defined = false;     // |lambda1| > 1e-10
  std::vector<std::string> long_run_names;
  std::vector<double> long_run;      // theta_j = -lambda_{j+1} / lambda1
};

/// theta_j = -lambda_{j+1} / lambda1, named by regressor. Requires
/// |lambda1| > 1e-10; smaller magnitudes signal no error correction and the
/// ratio is undefined rather than an error.
inline std::vector<double> long_run_coefficients(
    const std::vector<double>& lambda) {
  if (lambda.size() < 2)
    throw std::invalid_argument("long_run: need the Y level plus >= 1 regressor level");
  if (std::fabs(lambda[0]) <= 1e-10)
    throw EstimationError("long_run: lambda1 is numerically zero");
  std::vector<double> theta;
  theta.reserve(lambda.size() - 1);
  for (std::size_t j = 1; j < lambda.size(); ++j)
    theta.push_back(-lambda[j] / lambda[0]);
  return theta;
}

inline ArdlFit fit_ardl_ecm(const std::vector<frame::AlignedSeriesSet>& data,
                            const ArdlSpec& spec,
                            int first_row_override = -1) {
  ArdlFit fit;
  fit.ecm = build_ecm_design(data, spec, first_row_override);
  fit.ols = estat::ols_fit(fit.ecm.design);
  for (const int c : fit.ecm.level_cols)
    fit.lambda.push_back(fit.ols.coef(c));
  fit.adjustment_speed = fit.lambda[0];
  fit.adjustment_t = fit.ols.t_values(fit.ecm.level_cols[0]);
  fit.long_run_defined = std::fabs(fit.lambda[0]) > 1e-10;
  fit.long_run_names = fit.ecm.regressor_names;
  if (fit.long_run_defined) fit.long_run = long_run_coefficients(fit.lambda);
  return fit;
}

inline ArdlFit fit_ardl_ecm(const frame::AlignedSeriesSet& data,
                            const ArdlSpec& spec,
                            int first_row_override = -1) {
  return fit_ardl_ecm(std::vector<frame::AlignedSeriesSet>{data}, spec,
                      first_row_override);
}

}  // namespace ardl::ecm
