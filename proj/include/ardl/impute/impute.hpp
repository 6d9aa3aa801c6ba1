#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ardl/frame/panel.hpp"
#include "ardl/impute/forest.hpp"
#include "ardl/rng.hpp"
#include "ardl/util/errors.hpp"

namespace ardl::impute {

struct ImputeOptions {
  ForestParams forest;
  bool cross_entity = false;  // pool all entities into one training frame
  unsigned threads = 1;
};

struct ImputationReport {
  std::map<std::string, std::size_t> imputed_per_indicator;
  std::vector<std::pair<std::string, std::string>> excluded;  // (entity, indicator)
  int rounds = 0;
  double final_change = 0.0;
  bool cross_entity = false;
  std::size_t total_missing = 0;
  std::size_t total_imputed = 0;

  [[nodiscard]] std::size_t imputed_count() const { return total_imputed; }
};

namespace detail {

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Working frame for one imputation scope: a (row x indicator) value matrix
/// where rows are (entity, year) cells of the panel slice being imputed.
struct Frame {
  std::vector<std::size_t> entity_of_row;  // panel entity index per row
  std::vector<std::size_t> year_of_row;    // panel year index per row
  std::vector<double> tau_of_row;          // normalized year in [0, 1]
  std::vector<std::vector<double>> values; // [row][indicator]
  std::vector<std::vector<bool>> observed; // [row][indicator]
};

}  // namespace detail

/// missForest-style iterative random-forest imputation.
///
/// Missing cells start at the median of their indicator's observed values
/// within the imputation scope. Each round re-trains, per target indicator,
/// a forest on the rows where the target is observed (features: every other
/// indicator's current working value plus the normalized year) and
/// re-predicts the missing cells. Rounds stop when the relative change
/// sqrt(sum (new-old)^2 / sum new^2) over imputed cells drops below tol, or
/// at max_rounds.
///
/// Scope is per entity by default; cross_entity pools all entities into one
/// frame. An (entity, indicator) series with fewer than 3 observed values in
/// per-entity scope is excluded: its missing cells stay missing and the pair
/// is reported. An indicator observed nowhere in scope is an error.
///
/// RNG streams are keyed (seed, scope, round, indicator, tree), so results
/// do not depend on scheduling. Observed cells pass through bit-identical.
inline std::pair<frame::PanelTable, ImputationReport> impute_panel(
    const frame::PanelTable& panel, const ImputeOptions& opt = {}) {
  opt.forest.validate();
  frame::PanelTable out = panel;
  ImputationReport report;
  report.cross_entity = opt.cross_entity;
  report.total_missing = panel.missing_count();
  for (const auto& key : panel.indicators())
    report.imputed_per_indicator[key] = 0;

  const std::size_t n_entities = panel.entities().size();
  const std::size_t n_indicators = panel.indicators().size();
  const std::size_t n_years = panel.years().size();
  const double year_span =
      (n_years > 1) ? static_cast<double>(n_years - 1) : 1.0;

  // Guard: an indicator with no observed value anywhere cannot be imputed.
  for (std::size_t k = 0; k < n_indicators; ++k) {
    bool any = false;
    for (std::size_t e = 0; e < n_entities && !any; ++e)
      for (std::size_t t = 0; t < n_years && !any; ++t)
        if (!panel.is_missing(e, k, t)) any = true;
    if (!any)
      throw DataError("impute: indicator '" + panel.indicators()[k] +
                      "' has no observed values");
  }

  const std::size_t n_scopes = opt.cross_entity ? 1 : n_entities;
  int max_rounds_used = 0;
  double last_change = 0.0;

  for (std::size_t scope = 0; scope < n_scopes; ++scope) {
    detail::Frame fr;
    const std::size_t e_lo = opt.cross_entity ? 0 : scope;
    const std::size_t e_hi = opt.cross_entity ? n_entities : scope + 1;
    for (std::size_t e = e_lo; e < e_hi; ++e) {
      for (std::size_t t = 0; t < n_years; ++t) {
        fr.entity_of_row.push_back(e);
        fr.year_of_row.push_back(t);
        fr.tau_of_row.push_back(static_cast<double>(t) / year_span);
      }
    }
    const std::size_t n_rows = fr.entity_of_row.size();
    fr.values.assign(n_rows, std::vector<double>(n_indicators, 0.0));
    fr.observed.assign(n_rows, std::vector<bool>(n_indicators, false));

    // Eligibility: a target needs >= 3 observed values in scope; a feature
    // only needs >= 1 (enough for a median start value). Excluded targets
    // keep their missing cells missing and are reported.
    std::vector<bool> eligible(n_indicators, false);
    std::vector<bool> usable_feature(n_indicators, false);
    for (std::size_t k = 0; k < n_indicators; ++k) {
      std::vector<double> observed_values;
      for (std::size_t r = 0; r < n_rows; ++r) {
        const std::size_t e = fr.entity_of_row[r];
        const std::size_t t = fr.year_of_row[r];
        if (!panel.is_missing(e, k, t)) {
          fr.values[r][k] = panel.value(e, k, t);
          fr.observed[r][k] = true;
          observed_values.push_back(fr.values[r][k]);
        }
      }
      eligible[k] = observed_values.size() >= 3;
      usable_feature[k] = !observed_values.empty();
      if (!eligible[k] && observed_values.size() < n_rows) {
        report.excluded.emplace_back(
            opt.cross_entity ? "*" : panel.entities()[scope],
            panel.indicators()[k]);
      }
      if (!observed_values.empty()) {
        const double med = detail::median_of(observed_values);
        for (std::size_t r = 0; r < n_rows; ++r)
          if (!fr.observed[r][k]) fr.values[r][k] = med;
      }
    }

    // Anything to do in this scope?
    bool any_missing = false;
    for (std::size_t r = 0; r < n_rows && !any_missing; ++r)
      for (std::size_t k = 0; k < n_indicators && !any_missing; ++k)
        if (!fr.observed[r][k] && eligible[k]) any_missing = true;
    if (!any_missing) continue;

    const std::uint64_t scope_seed = substream_seed(opt.forest.seed, scope);
    double change = 0.0;
    int round = 0;
    for (round = 1; round <= opt.forest.max_rounds; ++round) {
      const std::uint64_t round_seed =
          substream_seed(scope_seed, static_cast<std::uint64_t>(round));
      double delta_sq = 0.0, new_sq = 0.0;
      for (std::size_t k = 0; k < n_indicators; ++k) {
        if (!eligible[k]) continue;
        std::vector<std::vector<double>> train_rows, predict_rows;
        std::vector<double> train_targets;
        std::vector<std::size_t> predict_idx;
        for (std::size_t r = 0; r < n_rows; ++r) {
          std::vector<double> feat;
          feat.reserve(n_indicators);
          for (std::size_t j = 0; j < n_indicators; ++j)
            if (j != k && usable_feature[j]) feat.push_back(fr.values[r][j]);
          feat.push_back(fr.tau_of_row[r]);
          if (fr.observed[r][k]) {
            train_rows.push_back(std::move(feat));
            train_targets.push_back(fr.values[r][k]);
          } else {
            predict_rows.push_back(std::move(feat));
            predict_idx.push_back(r);
          }
        }
        if (predict_idx.empty()) continue;
        ForestParams params = opt.forest;
        params.seed = substream_seed(round_seed, k);
        const auto forest =
            train_forest(train_rows, train_targets, params, opt.threads);
        for (std::size_t i = 0; i < predict_idx.size(); ++i) {
          const std::size_t r = predict_idx[i];
          const double old_v = fr.values[r][k];
          const double new_v = forest_predict(forest, predict_rows[i]);
          fr.values[r][k] = new_v;
          delta_sq += (new_v - old_v) * (new_v - old_v);
          new_sq += new_v * new_v;
        }
      }
      change = (new_sq > 0.0) ? std::sqrt(delta_sq / new_sq)
                              : std::sqrt(delta_sq);
      if (change < opt.forest.tol) break;
    }
    last_change = change;
    max_rounds_used = std::max(max_rounds_used,
                               std::min(round, opt.forest.max_rounds));

    for (std::size_t r = 0; r < n_rows; ++r) {
      for (std::size_t k = 0; k < n_indicators; ++k) {
        if (!fr.observed[r][k] && eligible[k]) {
          out.set_value(fr.entity_of_row[r], k, fr.year_of_row[r],
                        fr.values[r][k]);
          report.imputed_per_indicator[panel.indicators()[k]] += 1;
          report.total_imputed += 1;
        }
      }
    }
  }

  report.rounds = max_rounds_used;
  report.final_change = last_change;
  return {std::move(out), report};
}

}  // namespace ardl::impute
