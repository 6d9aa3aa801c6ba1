#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ardl/bounds/bounds.hpp"
#include "ardl/diag/tests.hpp"
#include "ardl/ecm/fit.hpp"
#include "ardl/frame/transform.hpp"

namespace ardl::diag {

/// Knobs for the six-test battery. The bootstrap bounds test is the only
/// randomized entry and takes its own seed through `bounds`.
struct BatteryOptions {
  int bg_lags = 1;
  int lb_lags = 0;  // 0: auto, min(10, n/5)
  bool koenker = true;
  int reset_max_power = 3;
  bounds::BootstrapParams bounds;
  // When the caller already ran the bounds test (the pipeline does), pass
  // the result here to avoid a second bootstrap.
  std::optional<bounds::BoundsResult> precomputed_bounds;
};

/// Battery output: six TestResult entries in fixed order
/// (Breusch-Godfrey, Ljung-Box, Breusch-Pagan, Shapiro-Wilk, bounds F,
/// RESET), plus the fit context they were computed on.
struct DiagnosticsReport {
  std::vector<TestResult> tests;
  int p = 0;
  int q = 0;
  long n = 0;
  std::size_t entities = 0;
};

namespace detail {

template <typename Fn>
TestResult guarded(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& ex) {
    TestResult out;
    out.name = name;
    out.statistic = std::numeric_limits<double>::quiet_NaN();
    out.p_value = std::numeric_limits<double>::quiet_NaN();
    out.degenerate = true;
    out.error = ex.what();
    return out;
  }
}

}  // namespace detail

/// Run the full battery on an ARDL-ECM fit of `spec` over `data`.
/// Individual test failures are recorded in the corresponding slot and
/// never abort the remaining tests.
inline DiagnosticsReport run_battery(
    const std::vector<frame::AlignedSeriesSet>& data, const ecm::ArdlSpec& spec,
    const BatteryOptions& opt = {}) {
  const auto fit = ecm::fit_ardl_ecm(data, spec);
  const auto& design = fit.ecm.design;

  DiagnosticsReport report;
  report.p = spec.p;
  report.q = spec.q;
  report.n = fit.ols.n;
  report.entities = data.size();

  std::vector<double> resid(static_cast<std::size_t>(fit.ols.n));
  for (Eigen::Index i = 0; i < fit.ols.residuals.size(); ++i)
    resid[static_cast<std::size_t>(i)] = fit.ols.residuals(i);

  report.tests.push_back(detail::guarded("breusch_godfrey", [&] {
    return breusch_godfrey(fit.ols, design, opt.bg_lags);
  }));
  report.tests.push_back(detail::guarded("ljung_box", [&] {
    int h = opt.lb_lags;
    if (h <= 0)
      h = static_cast<int>(std::max<long>(
          1, std::min<long>(10, static_cast<long>(resid.size()) / 5)));
    return ljung_box(resid, h);
  }));
  report.tests.push_back(detail::guarded("breusch_pagan", [&] {
    return breusch_pagan(fit.ols, design, opt.koenker);
  }));
  report.tests.push_back(detail::guarded(
      "shapiro_wilk", [&] { return shapiro_wilk(resid); }));
  report.tests.push_back(detail::guarded("bounds_f", [&] {
    bounds::BoundsResult br = opt.precomputed_bounds
                                  ? *opt.precomputed_bounds
                                  : bounds::bounds_test(data, spec, opt.bounds);
    TestResult out;
    out.name = "bounds_f";
    out.statistic = br.f_stat;
    out.p_value = br.p_value;
    out.detail = "bootstrap B=" + std::to_string(br.replications) +
                 (br.summed_form ? " summed" : " joint");
    return out;
  }));
  report.tests.push_back(detail::guarded("ramsey_reset", [&] {
    return ramsey_reset(fit.ols, design, opt.reset_max_power);
  }));
  return report;
}

}  // namespace ardl::diag
