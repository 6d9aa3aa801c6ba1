#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ardl/frame/transform.hpp"
#include "ardl/rng.hpp"
#include "ardl/util/errors.hpp"
#include "ardl/util/parallel.hpp"

namespace ardl::rollcorr {

/// Rolling correlations with per-window degeneracy flags. A window is
/// degenerate exactly when one of its inputs is constant (min == max), the
/// only way a Pearson denominator can vanish.
struct RollCorrSequence {
  std::vector<double> corr;       // NaN where degenerate
  std::vector<char> degenerate;   // parallel to corr
  std::size_t n_degenerate = 0;
};

/// Pearson correlation over each contiguous window of width w. Width-2
/// windows are computed by sign comparison, so their values are exactly
/// -1.0 or +1.0.
inline RollCorrSequence rolling_correlation(const std::vector<double>& x,
                                            const std::vector<double>& y,
                                            std::size_t w) {
  if (x.size() != y.size())
    throw DataError("rolling_correlation: length mismatch");
  if (w < 2) throw ConfigError("rolling_correlation: width >= 2");
  if (x.size() < w)
    throw DataError("rolling_correlation: series shorter than window");
  const std::size_t n_windows = x.size() - w + 1;
  RollCorrSequence out;
  out.corr.assign(n_windows, std::numeric_limits<double>::quiet_NaN());
  out.degenerate.assign(n_windows, 0);
  for (std::size_t s = 0; s < n_windows; ++s) {
    const auto [x_min, x_max] = std::minmax_element(x.begin() + s, x.begin() + s + w);
    const auto [y_min, y_max] = std::minmax_element(y.begin() + s, y.begin() + s + w);
    if (*x_min == *x_max || *y_min == *y_max) {
      out.degenerate[s] = 1;
      ++out.n_degenerate;
      continue;
    }
    if (w == 2) {
      const bool same_direction = (x[s + 1] > x[s]) == (y[s + 1] > y[s]);
      out.corr[s] = same_direction ? 1.0 : -1.0;
      continue;
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = s; i < s + w; ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= static_cast<double>(w);
    my /= static_cast<double>(w);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = s; i < s + w; ++i) {
      const double dx = x[i] - mx;
      const double dy = y[i] - my;
      sxy += dx * dy;
      sxx += dx * dx;
      syy += dy * dy;
    }
    double r = sxy / std::sqrt(sxx * syy);
    out.corr[s] = std::clamp(r, -1.0, 1.0);
  }
  return out;
}

/// Sample standard deviation (divide by m - 1) over the non-degenerate
/// entries. Requires at least two of them.
inline double sd_rolcor(const RollCorrSequence& seq) {
  std::size_t m = 0;
  double mean = 0.0;
  for (std::size_t i = 0; i < seq.corr.size(); ++i) {
    if (seq.degenerate[i]) continue;
    mean += seq.corr[i];
    ++m;
  }
  if (m < 2) throw DataError("sd_rolcor: fewer than 2 usable correlations");
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (std::size_t i = 0; i < seq.corr.size(); ++i) {
    if (seq.degenerate[i]) continue;
    ss += (seq.corr[i] - mean) * (seq.corr[i] - mean);
  }
  return std::sqrt(ss / static_cast<double>(m - 1));
}

struct Band {
  double band_95 = 0.0;
  double band_05 = 0.0;
};

/// Reference null for the band: fresh Gaussian white noise (default), or a
/// per-replication random permutation of the observed pair.
enum class BandNull { kGaussian, kPermutation };

/// SDrolCor null distribution's empirical 95%/5% quantiles (nearest rank)
/// over B replications. Each replication b draws from stream (seed, b):
/// Gaussian mode draws x then y afresh; permutation mode shuffles copies of
/// the supplied pair. Requires n >= w + 1 so every replication has at least
/// two windows.
inline Band whitenoise_band(std::size_t n, std::size_t w, int replications,
                            std::uint64_t seed, int threads = 1,
                            BandNull null_kind = BandNull::kGaussian,
                            const std::vector<double>* source_x = nullptr,
                            const std::vector<double>* source_y = nullptr) {
  if (replications < 100) throw ConfigError("whitenoise_band: B >= 100");
  if (w < 2) throw ConfigError("whitenoise_band: width >= 2");
  if (n < w + 1) throw DataError("whitenoise_band: n >= w + 1 required");
  if (null_kind == BandNull::kPermutation) {
    if (source_x == nullptr || source_y == nullptr)
      throw ConfigError("whitenoise_band: permutation null needs source data");
    if (source_x->size() != n || source_y->size() != n)
      throw DataError("whitenoise_band: source length mismatch");
  }
  std::vector<double> sds(static_cast<std::size_t>(replications), 0.0);
  parallel_for(sds.size(), threads, [&](std::size_t b) {
    Rng rng = Rng::stream(seed, b);
    std::vector<double> x, y;
    if (null_kind == BandNull::kGaussian) {
      x.resize(n);
      y.resize(n);
      for (auto& v : x) v = rng.gaussian();
      for (auto& v : y) v = rng.gaussian();
    } else {
      x = *source_x;
      y = *source_y;
      for (std::size_t i = n - 1; i > 0; --i)
        std::swap(x[i], x[rng.uniform_below(i + 1)]);
      for (std::size_t i = n - 1; i > 0; --i)
        std::swap(y[i], y[rng.uniform_below(i + 1)]);
    }
    sds[b] = sd_rolcor(rolling_correlation(x, y, w));
  });
  std::sort(sds.begin(), sds.end());
  const auto rank = [&](double level) {
    const auto r = static_cast<std::size_t>(
        std::ceil(level * static_cast<double>(replications)));
    return sds[std::min(r, sds.size()) - 1];
  };
  return Band{rank(0.95), rank(0.05)};
}

/// One screening row: a (dependent, regressor) pair at one window width.
struct RollCorrResult {
  std::string dependent;
  std::string regressor;
  std::size_t width = 0;
  RollCorrSequence sequence;
  double sd = std::numeric_limits<double>::quiet_NaN();
  bool sd_defined = false;
  double band_95 = 0.0;
  double band_05 = 0.0;
  bool inside_band = false;  // band_05 <= sd <= band_95
};

/// Screen every (dependent, regressor) pair of an aligned slice at each
/// width. Bands depend only on (n, w, B, seed), so one band per width is
/// computed from stream substream_seed(seed, w) and shared across pairs.
/// Rows are pair-major: all widths for the first regressor, then the next.
inline std::vector<RollCorrResult> screen_pairs(
    const frame::AlignedSeriesSet& data,
    const std::vector<std::size_t>& widths, int replications,
    std::uint64_t seed, int threads = 1) {
  if (widths.empty()) throw ConfigError("screen_pairs: no widths");
  std::vector<Band> bands(widths.size());
  for (std::size_t wi = 0; wi < widths.size(); ++wi)
    bands[wi] = whitenoise_band(data.length(), widths[wi], replications,
                                substream_seed(seed, widths[wi]), threads);
  std::vector<RollCorrResult> rows;
  rows.reserve(data.regressors.size() * widths.size());
  for (std::size_t j = 0; j < data.regressors.size(); ++j) {
    for (std::size_t wi = 0; wi < widths.size(); ++wi) {
      RollCorrResult row;
      row.dependent = data.dependent_name;
      row.regressor = data.regressor_names[j];
      row.width = widths[wi];
      row.sequence =
          rolling_correlation(data.regressors[j], data.dependent, widths[wi]);
      try {
        row.sd = sd_rolcor(row.sequence);
        row.sd_defined = true;
      } catch (const DataError&) {
        row.sd_defined = false;
      }
      row.band_95 = bands[wi].band_95;
      row.band_05 = bands[wi].band_05;
      row.inside_band = row.sd_defined && row.band_05 <= row.sd &&
                        row.sd <= row.band_95;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace ardl::rollcorr
