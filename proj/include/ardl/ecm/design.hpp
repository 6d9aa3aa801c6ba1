#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <string>
#include <vector>

#include "ardl/estat/design.hpp"
#include "ardl/frame/transform.hpp"
#include "ardl/util/errors.hpp"

namespace ardl::ecm {

struct ArdlSpec {
  std::string dependent;
  std::vector<std::string> regressors;
  int p = 1;  // lagged-difference count for the dependent
  int q = 1;  // lagged-difference count per regressor (0 = none)
  bool intercept = true;
  bool contemporaneous = false;  // add each regressor's current difference
  bool entity_dummies = false;   // pooled designs only

  void validate() const {
    if (p < 1) throw ConfigError("ardl: p >= 1 required");
    if (q < 0) throw ConfigError("ardl: q >= 0 required");
    if (regressors.empty()) throw ConfigError("ardl: at least one regressor");
  }

  /// First usable time index within a series (0-based): every difference
  /// lag must itself be a valid difference.
  [[nodiscard]] int first_row() const { return 1 + std::max(p, q); }
};

/// ECM design plus the bookkeeping estimation and the bootstrap need:
/// which columns are levels, which are lagged differences of the response,
/// and how rows map back to entities and time.
struct EcmDesign {
  estat::DesignMatrix design;  // response = stacked delta-Y
  int p = 0;
  int q = 0;
  bool contemporaneous = false;
  bool intercept = true;
  int first_row = 0;                       // per-entity start index t0
  std::vector<int> dy_lag_cols;            // delta-Y lag columns, lag 1..p
  std::vector<int> level_cols;             // Y level first, then each X level
  std::vector<std::string> regressor_names;
  std::vector<std::size_t> entity_rows;    // row count contributed per entity
  std::vector<std::string> entity_labels;
};

namespace detail {

inline void check_level_variance(const Eigen::VectorXd& col,
                                 const std::string& name) {
  const double mean = col.mean();
  const double var = (col.array() - mean).square().sum();
  if (var <= 1e-12 * std::max(1.0, col.squaredNorm()))
    throw EstimationError("ecm: level column '" + name +
                          "' has zero variance");
}

}  // namespace detail

/// Build the error-correction design over one or more entities.
///
/// Per entity with series length n, usable rows are t = t0 .. n-1 where
/// t0 = 1 + max(p, q) (or an override >= that, used by lag search to pin a
/// common evaluation sample). Column order: intercept, delta-Y lags 1..p,
/// per regressor [current difference if contemporaneous, then] difference
/// lags 1..q, then the Y level at t-1 and each X level at t-1, then entity
/// dummies (entities 2..E) when pooled with dummies.
inline EcmDesign build_ecm_design(
    const std::vector<frame::AlignedSeriesSet>& data, const ArdlSpec& spec,
    int first_row_override = -1) {
  spec.validate();
  if (data.empty()) throw DataError("ecm: no entities");
  const int t0 =
      (first_row_override >= 0) ? first_row_override : spec.first_row();
  if (t0 < spec.first_row())
    throw std::invalid_argument("ecm: first_row override below lag depth");
  const std::size_t n_reg = data.front().regressors.size();
  for (const auto& d : data) {
    if (d.regressors.size() != n_reg)
      throw DataError("ecm: entities disagree on regressor count");
  }

  std::vector<std::size_t> entity_rows;
  std::size_t total_rows = 0;
  for (const auto& d : data) {
    const long n = static_cast<long>(d.length());
    const long rows = n - t0;
    const long min_needed =
        spec.p + spec.q + static_cast<long>(n_reg) + 1 + 2;
    if (n <= min_needed)
      throw DataError("ecm: entity '" + d.entity + "' has " +
                      std::to_string(n) + " usable points, need more than " +
                      std::to_string(min_needed));
    if (rows < 1)
      throw DataError("ecm: entity '" + d.entity +
                      "' too short for the requested lags");
    entity_rows.push_back(static_cast<std::size_t>(rows));
    total_rows += static_cast<std::size_t>(rows);
  }

  EcmDesign out;
  out.p = spec.p;
  out.q = spec.q;
  out.contemporaneous = spec.contemporaneous;
  out.intercept = spec.intercept;
  out.first_row = t0;
  out.entity_rows = entity_rows;
  for (const auto& d : data) out.entity_labels.push_back(d.entity);
  out.regressor_names = data.front().regressor_names;

  // Column map.
  std::vector<std::string> names;
  if (spec.intercept) names.push_back("const");
  for (int i = 1; i <= spec.p; ++i)
    names.push_back("d" + data.front().dependent_name + "@-" +
                    std::to_string(i));
  for (std::size_t j = 0; j < n_reg; ++j) {
    const std::string& rname = out.regressor_names[j];
    if (spec.contemporaneous) names.push_back("d" + rname + "@0");
    for (int i = 1; i <= spec.q; ++i)
      names.push_back("d" + rname + "@-" + std::to_string(i));
  }
  const int y_level_col = static_cast<int>(names.size());
  names.push_back(data.front().dependent_name + "@-1");
  out.level_cols.push_back(y_level_col);
  for (std::size_t j = 0; j < n_reg; ++j) {
    out.level_cols.push_back(static_cast<int>(names.size()));
    names.push_back(out.regressor_names[j] + "@-1");
  }
  const std::size_t dummy_start = names.size();
  if (spec.entity_dummies && data.size() > 1) {
    for (std::size_t e = 1; e < data.size(); ++e)
      names.push_back("entity:" + data[e].entity);
  }

  const std::size_t n_cols = names.size();
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(total_rows), static_cast<Eigen::Index>(n_cols));
  Eigen::VectorXd y(static_cast<Eigen::Index>(total_rows));

  std::size_t row0 = 0;
  for (std::size_t e = 0; e < data.size(); ++e) {
    const auto& d = data[e];
    const auto& Y = d.dependent;
    const std::size_t n = d.length();
    for (std::size_t t = static_cast<std::size_t>(t0); t < n; ++t) {
      const Eigen::Index r =
          static_cast<Eigen::Index>(row0 + t - static_cast<std::size_t>(t0));
      y(r) = Y[t] - Y[t - 1];
      std::size_t c = 0;
      if (spec.intercept) X(r, static_cast<Eigen::Index>(c++)) = 1.0;
      for (int i = 1; i <= spec.p; ++i)
        X(r, static_cast<Eigen::Index>(c++)) =
            Y[t - static_cast<std::size_t>(i)] -
            Y[t - static_cast<std::size_t>(i) - 1];
      for (std::size_t j = 0; j < n_reg; ++j) {
        const auto& Xj = d.regressors[j];
        if (spec.contemporaneous)
          X(r, static_cast<Eigen::Index>(c++)) = Xj[t] - Xj[t - 1];
        for (int i = 1; i <= spec.q; ++i)
          X(r, static_cast<Eigen::Index>(c++)) =
              Xj[t - static_cast<std::size_t>(i)] -
              Xj[t - static_cast<std::size_t>(i) - 1];
      }
      X(r, static_cast<Eigen::Index>(c++)) = Y[t - 1];
      for (std::size_t j = 0; j < n_reg; ++j)
        X(r, static_cast<Eigen::Index>(c++)) = d.regressors[j][t - 1];
      if (spec.entity_dummies && data.size() > 1 && e >= 1)
        X(r, static_cast<Eigen::Index>(dummy_start + e - 1)) = 1.0;
    }
    row0 += entity_rows[e];
  }

  for (const int lc : out.level_cols)
    detail::check_level_variance(X.col(lc), names[static_cast<std::size_t>(lc)]);
  for (int i = 0; i < spec.p; ++i)
    out.dy_lag_cols.push_back((spec.intercept ? 1 : 0) + i);

  out.design.X = std::move(X);
  out.design.y = std::move(y);
  out.design.names = std::move(names);
  if (spec.intercept) out.design.intercept_col = 0;
  out.design.validate();
  return out;
}

inline EcmDesign build_ecm_design(const frame::AlignedSeriesSet& data,
                                  const ArdlSpec& spec,
                                  int first_row_override = -1) {
  return build_ecm_design(std::vector<frame::AlignedSeriesSet>{data}, spec,
                          first_row_override);
}

/// The same regression parameterized in levels: Y_t on its own levels at
/// lags 1..p+1 and each regressor's levels at lags 1..q+1 (plus the current
/// level under the contemporaneous flag). Spans the same column space as
/// the ECM design on identical rows, so residuals coincide.
inline estat::DesignMatrix build_levels_design(
    const frame::AlignedSeriesSet& data, const ArdlSpec& spec,
    int first_row_override = -1) {
  spec.validate();
  const int t0 =
      (first_row_override >= 0) ? first_row_override : spec.first_row();
  if (t0 < spec.first_row())
    throw std::invalid_argument("ecm: first_row override below lag depth");
  const std::size_t n = data.length();
  if (n <= static_cast<std::size_t>(t0))
    throw DataError("ecm: series too short for the requested lags");
  const std::size_t rows = n - static_cast<std::size_t>(t0);
  const std::size_t n_reg = data.regressors.size();

  std::vector<std::string> names;
  if (spec.intercept) names.push_back("const");
  for (int i = 1; i <= spec.p + 1; ++i)
    names.push_back(data.dependent_name + "@-" + std::to_string(i));
  for (std::size_t j = 0; j < n_reg; ++j) {
    if (spec.contemporaneous)
      names.push_back(data.regressor_names[j] + "@0");
    for (int i = 1; i <= spec.q + 1; ++i)
      names.push_back(data.regressor_names[j] + "@-" + std::to_string(i));
  }

  estat::DesignMatrix out;
  out.X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                static_cast<Eigen::Index>(names.size()));
  out.y.resize(static_cast<Eigen::Index>(rows));
  for (std::size_t t = static_cast<std::size_t>(t0); t < n; ++t) {
    const Eigen::Index r =
        static_cast<Eigen::Index>(t - static_cast<std::size_t>(t0));
    out.y(r) = data.dependent[t];
    std::size_t c = 0;
    if (spec.intercept) out.X(r, static_cast<Eigen::Index>(c++)) = 1.0;
    for (int i = 1; i <= spec.p + 1; ++i)
      out.X(r, static_cast<Eigen::Index>(c++)) =
          data.dependent[t - static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < n_reg; ++j) {
      if (spec.contemporaneous)
        out.X(r, static_cast<Eigen::Index>(c++)) = data.regressors[j][t];
      for (int i = 1; i <= spec.q + 1; ++i)
        out.X(r, static_cast<Eigen::Index>(c++)) =
            data.regressors[j][t - static_cast<std::size_t>(i)];
    }
  }
  out.names = std::move(names);
  if (spec.intercept) out.intercept_col = 0;
  out.validate();
  return out;
}

}  // namespace ardl::ecm
