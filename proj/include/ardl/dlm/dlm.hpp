#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <string>
#include <vector>

#include "ardl/estat/design.hpp"
#include "ardl/estat/ols.hpp"
#include "ardl/frame/transform.hpp"
#include "ardl/util/errors.hpp"

namespace ardl::dlm {

struct DlmSpec {
  std::string dependent;
  std::vector<std::string> regressors;
  int q = 1;                    // uniform lag order: terms at lags 0..q
  bool intercept = true;
  bool entity_dummies = false;  // pooled designs only

  void validate() const {
    if (q < 0) throw ConfigError("dlm: q >= 0 required");
    if (regressors.empty()) throw ConfigError("dlm: at least one regressor");
  }
};

/// One regression term: regressor j at lag i, labeled "name@lag".
struct DlmTerm {
  int regressor = 0;
  int lag = 0;
};

inline std::string term_label(const std::string& name, int lag) {
  return name + "@" + std::to_string(lag);
}

struct DlmFit {
  estat::OlsFit ols;
  DlmSpec spec;
  std::vector<DlmTerm> terms;           // active terms, design column order
  std::vector<std::string> term_labels; // parallel to terms
  bool reduced = false;
  bool intercept_only = false;
  std::vector<std::string> dropped;     // reduction order
};

namespace detail {

inline estat::DesignMatrix build_dlm_design(
    const std::vector<frame::AlignedSeriesSet>& data, const DlmSpec& spec,
    const std::vector<DlmTerm>& terms) {
  const int t0 = spec.q;
  std::size_t total_rows = 0;
  for (const auto& d : data) {
    if (d.length() <= static_cast<std::size_t>(t0))
      throw DataError("dlm: entity '" + d.entity +
                      "' too short for lag order " + std::to_string(spec.q));
    total_rows += d.length() - static_cast<std::size_t>(t0);
  }
  std::vector<std::string> names;
  if (spec.intercept) names.push_back("const");
  for (const auto& term : terms)
    names.push_back(term_label(
        data.front().regressor_names[static_cast<std::size_t>(term.regressor)],
        term.lag));
  const std::size_t dummy_start = names.size();
  if (spec.entity_dummies && data.size() > 1)
    for (std::size_t e = 1; e < data.size(); ++e)
      names.push_back("entity:" + data[e].entity);

  estat::DesignMatrix out;
  out.X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(total_rows),
                                static_cast<Eigen::Index>(names.size()));
  out.y.resize(static_cast<Eigen::Index>(total_rows));
  std::size_t row0 = 0;
  for (std::size_t e = 0; e < data.size(); ++e) {
    const auto& d = data[e];
    for (std::size_t t = static_cast<std::size_t>(t0); t < d.length(); ++t) {
      const Eigen::Index r =
          static_cast<Eigen::Index>(row0 + t - static_cast<std::size_t>(t0));
      out.y(r) = d.dependent[t];
      std::size_t c = 0;
      if (spec.intercept) out.X(r, static_cast<Eigen::Index>(c++)) = 1.0;
      for (const auto& term : terms)
        out.X(r, static_cast<Eigen::Index>(c++)) =
            d.regressors[static_cast<std::size_t>(term.regressor)]
                        [t - static_cast<std::size_t>(term.lag)];
      if (spec.entity_dummies && data.size() > 1 && e >= 1)
        out.X(r, static_cast<Eigen::Index>(dummy_start + e - 1)) = 1.0;
    }
    row0 += d.length() - static_cast<std::size_t>(t0);
  }
  out.names = std::move(names);
  if (spec.intercept) out.intercept_col = 0;
  out.validate();
  return out;
}

inline DlmFit fit_terms(const std::vector<frame::AlignedSeriesSet>& data,
                        const DlmSpec& spec,
                        const std::vector<DlmTerm>& terms) {
  DlmFit fit;
  fit.spec = spec;
  fit.terms = terms;
  for (const auto& term : terms)
    fit.term_labels.push_back(term_label(
        data.front().regressor_names[static_cast<std::size_t>(term.regressor)],
        term.lag));
  fit.intercept_only = terms.empty();
  fit.ols = estat::ols_fit(build_dlm_design(data, spec, terms));
  return fit;
}

}  // namespace detail

/// Distributed-lag regression of Y_t on every regressor at lags 0..q, over
/// the overlapping sample (rows t = q .. n-1 per entity).
inline DlmFit fit_dlm(const std::vector<frame::AlignedSeriesSet>& data,
                      const DlmSpec& spec) {
  spec.validate();
  if (data.empty()) throw DataError("dlm: no entities");
  const std::size_t n_reg = data.front().regressors.size();
  for (const auto& d : data)
    if (d.regressors.size() != n_reg)
      throw DataError("dlm: entities disagree on regressor count");
  std::vector<DlmTerm> terms;
  for (std::size_t j = 0; j < n_reg; ++j)
    for (int i = 0; i <= spec.q; ++i)
      terms.push_back({static_cast<int>(j), i});
  return detail::fit_terms(data, spec, terms);
}

inline DlmFit fit_dlm(const frame::AlignedSeriesSet& data,
                      const DlmSpec& spec) {
  return fit_dlm(std::vector<frame::AlignedSeriesSet>{data}, spec);
}

/// Backward elimination. Per refit, drop the single term with the largest
/// p-value above alpha (exact ties drop the lexicographically larger label)
/// until every remaining term is significant or only the intercept is left.
///
/// With whole_series, candidates are entire regressors all of whose terms
/// have p > alpha; the candidate whose most significant term is weakest
/// (largest minimum p) is dropped per refit, ties by regressor name.
inline DlmFit reduce_model(const std::vector<frame::AlignedSeriesSet>& data,
                           const DlmFit& full, double alpha,
                           bool whole_series = false) {
  if (alpha < 0.0 || alpha > 1.0)
    throw ConfigError("reduce_model: alpha in [0,1]");
  if (full.terms.empty())
    throw std::invalid_argument("reduce_model: no non-intercept terms");
  DlmFit current = full;
  current.reduced = true;
  for (;;) {
    // Collect p-values per active term (dummy columns are never dropped).
    const std::size_t offset = current.spec.intercept ? 1 : 0;
    if (!whole_series) {
      int worst = -1;
      double worst_p = alpha;
      std::string worst_label;
      for (std::size_t i = 0; i < current.terms.size(); ++i) {
        const double p = current.ols.p_values(
            static_cast<Eigen::Index>(offset + i));
        const std::string& label = current.term_labels[i];
        if (p > worst_p ||
            (worst >= 0 && p == worst_p && label > worst_label)) {
          worst = static_cast<int>(i);
          worst_p = p;
          worst_label = label;
        }
      }
      if (worst < 0) break;
      current.dropped.push_back(current.term_labels[static_cast<std::size_t>(worst)]);
      std::vector<DlmTerm> next = current.terms;
      next.erase(next.begin() + worst);
      if (next.empty()) {
        auto reduced = detail::fit_terms(data, current.spec, next);
        reduced.reduced = true;
        reduced.dropped = current.dropped;
        return reduced;
      }
      auto refit = detail::fit_terms(data, current.spec, next);
      refit.reduced = true;
      refit.dropped = current.dropped;
      current = std::move(refit);
      continue;
    }
    // Whole-series mode.
    const std::size_t n_reg = data.front().regressors.size();
    std::vector<double> min_p(n_reg, 2.0);
    std::vector<bool> has_terms(n_reg, false);
    for (std::size_t i = 0; i < current.terms.size(); ++i) {
      const auto j = static_cast<std::size_t>(current.terms[i].regressor);
      has_terms[j] = true;
      min_p[j] = std::min(min_p[j],
                          current.ols.p_values(
                              static_cast<Eigen::Index>(offset + i)));
    }
    int drop_reg = -1;
    for (std::size_t j = 0; j < n_reg; ++j) {
      if (!has_terms[j] || min_p[j] <= alpha) continue;
      if (drop_reg < 0 || min_p[j] > min_p[static_cast<std::size_t>(drop_reg)] ||
          (min_p[j] == min_p[static_cast<std::size_t>(drop_reg)] &&
           data.front().regressor_names[j] >
               data.front().regressor_names[static_cast<std::size_t>(drop_reg)]))
        drop_reg = static_cast<int>(j);
    }
    if (drop_reg < 0) break;
    std::vector<DlmTerm> next;
    for (const auto& term : current.terms)
      if (term.regressor != drop_reg) next.push_back(term);
    current.dropped.push_back(
        data.front().regressor_names[static_cast<std::size_t>(drop_reg)] +
        "@*");
    auto refit = detail::fit_terms(data, current.spec, next);
    refit.reduced = true;
    refit.dropped = current.dropped;
    current = std::move(refit);
    if (next.empty()) break;
  }
  return current;
}

inline DlmFit reduce_model(const frame::AlignedSeriesSet& data,
                           const DlmFit& full, double alpha,
                           bool whole_series = false) {
  return reduce_model(std::vector<frame::AlignedSeriesSet>{data}, full, alpha,
                      whole_series);
}

}  // namespace ardl::dlm
