#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ardl/frame/panel.hpp"
#include "ardl/util/errors.hpp"

namespace ardl::frame {

/// Value vector with an explicit availability mask. Lagging marks leading
/// slots unavailable instead of inventing values.
struct MaskedSeries {
  std::vector<double> values;
  std::vector<bool> present;

  [[nodiscard]] std::size_t size() const { return values.size(); }

  static MaskedSeries complete(std::vector<double> v) {
    MaskedSeries s;
    s.present.assign(v.size(), true);
    s.values = std::move(v);
    return s;
  }
};

/// Shift a series back by k: element t holds input element t-k, with the
/// first k slots unavailable. lag(s, 0) is the identity.
inline MaskedSeries lag(const MaskedSeries& s, std::size_t k) {
  if (k >= s.size())
    throw std::invalid_argument("lag: k=" + std::to_string(k) +
                                " not below length " + std::to_string(s.size()));
  MaskedSeries out;
  out.values.assign(s.size(), 0.0);
  out.present.assign(s.size(), false);
  for (std::size_t t = k; t < s.size(); ++t) {
    out.values[t] = s.values[t - k];
    out.present[t] = s.present[t - k];
  }
  return out;
}

inline MaskedSeries lag(const std::vector<double>& v, std::size_t k) {
  return lag(MaskedSeries::complete(v), k);
}

/// k-th difference s_t - s_{t-k}. By default the output shrinks by k;
/// with shrink=false the length is preserved and the first k slots are
/// unavailable.
inline MaskedSeries diff(const MaskedSeries& s, std::size_t k = 1,
                         bool shrink = true) {
  if (k == 0) throw std::invalid_argument("diff: k must be positive");
  if (s.size() <= k)
    throw std::invalid_argument("diff: length " + std::to_string(s.size()) +
                                " not above k=" + std::to_string(k));
  MaskedSeries out;
  if (shrink) {
    out.values.reserve(s.size() - k);
    out.present.reserve(s.size() - k);
    for (std::size_t t = k; t < s.size(); ++t) {
      out.values.push_back(s.values[t] - s.values[t - k]);
      out.present.push_back(s.present[t] && s.present[t - k]);
    }
  } else {
    out.values.assign(s.size(), 0.0);
    out.present.assign(s.size(), false);
    for (std::size_t t = k; t < s.size(); ++t) {
      out.values[t] = s.values[t] - s.values[t - k];
      out.present[t] = s.present[t] && s.present[t - k];
    }
  }
  return out;
}

inline MaskedSeries diff(const std::vector<double>& v, std::size_t k = 1,
                         bool shrink = true) {
  return diff(MaskedSeries::complete(v), k, shrink);
}

/// One entity's estimation slice: dependent and regressors over a shared
/// contiguous year index with no missing values.
struct AlignedSeriesSet {
  std::string entity;
  std::vector<int> years;
  std::vector<double> dependent;
  std::string dependent_name;
  std::vector<std::string> regressor_names;  // request order
  std::vector<std::vector<double>> regressors;

  [[nodiscard]] std::size_t length() const { return dependent.size(); }
};

/// Extract the maximal common span where every requested indicator is
/// observed at both ends; interior holes inside that span are an error
/// listing every (indicator, year) pair. Regressor order follows the request.
inline AlignedSeriesSet align_panel(const PanelTable& panel,
                                    const std::string& entity,
                                    const std::string& dependent,
                                    const std::vector<std::string>& regressors) {
  const std::size_t e = panel.entity_index(entity);
  std::vector<std::string> keys;
  keys.push_back(dependent);
  keys.insert(keys.end(), regressors.begin(), regressors.end());
  for (std::size_t a = 0; a < keys.size(); ++a)
    for (std::size_t b = a + 1; b < keys.size(); ++b)
      if (keys[a] == keys[b])
        throw DataError("align: indicator '" + keys[a] + "' requested twice");

  const auto& years = panel.years();
  const std::size_t n_years = years.size();
  std::size_t first = 0, last = n_years;  // [first, last)
  for (const auto& key : keys) {
    const std::size_t k = panel.indicator_index(key);
    std::size_t lo = 0;
    while (lo < n_years && panel.is_missing(e, k, lo)) ++lo;
    if (lo == n_years)
      throw DataError("align: indicator '" + key + "' has no observed values "
                      "for entity '" + entity + "'");
    std::size_t hi = n_years;
    while (hi > lo && panel.is_missing(e, k, hi - 1)) --hi;
    first = std::max(first, lo);
    last = std::min(last, hi);
  }
  if (first >= last || last - first < 3)
    throw DataError("align: common span for entity '" + entity +
                    "' is shorter than 3 years");

  std::string holes;
  for (const auto& key : keys) {
    const std::size_t k = panel.indicator_index(key);
    for (std::size_t t = first; t < last; ++t) {
      if (panel.is_missing(e, k, t)) {
        if (!holes.empty()) holes += ", ";
        holes += "(" + key + ", " + std::to_string(years[t]) + ")";
      }
    }
  }
  if (!holes.empty())
    throw DataError("align: missing cells inside common span: " + holes);

  AlignedSeriesSet out;
  out.entity = entity;
  out.dependent_name = dependent;
  out.regressor_names = regressors;
  out.years.assign(years.begin() + static_cast<long>(first),
                   years.begin() + static_cast<long>(last));
  const std::size_t dep_idx = panel.indicator_index(dependent);
  for (std::size_t t = first; t < last; ++t)
    out.dependent.push_back(panel.value(e, dep_idx, t));
  for (const auto& key : regressors) {
    const std::size_t k = panel.indicator_index(key);
    std::vector<double> col;
    col.reserve(last - first);
    for (std::size_t t = first; t < last; ++t)
      col.push_back(panel.value(e, k, t));
    out.regressors.push_back(std::move(col));
  }
  return out;
}

}  // namespace ardl::frame
