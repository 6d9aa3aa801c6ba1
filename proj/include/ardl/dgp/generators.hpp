#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iterator>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ardl/frame/panel.hpp"
#include "ardl/rng.hpp"

namespace ardl::dgp {

/// iid standard Gaussian draws from the documented generator, one stream
/// per seed.
inline std::vector<double> gen_white_noise(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_white_noise: n >= 1");
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = rng.gaussian();
  return out;
}

/// Random walk started at 0: w_t = w_{t-1} + eps_t, so the first element is
/// the first noise draw.
inline std::vector<double> gen_random_walk(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_random_walk: n >= 2");
  Rng rng(seed);
  std::vector<double> out(n);
  double level = 0.0;
  for (auto& v : out) {
    level += rng.gaussian();
    v = level;
  }
  return out;
}

/// Stationary AR(1) started at its mean 0: x_t = rho x_{t-1} + eps_t.
inline std::vector<double> gen_ar1(std::size_t n, double rho,
                                   std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_ar1: n >= 2");
  if (!(std::fabs(rho) < 1.0))
    throw std::invalid_argument("gen_ar1: |rho| must be below 1");
  Rng rng(seed);
  std::vector<double> out(n);
  double level = 0.0;
  for (auto& v : out) {
    level = rho * level + rng.gaussian();
    v = level;
  }
  return out;
}

/// Cointegrated pair: x is a random walk (substream 0), y_t = theta x_t +
/// sigma eps_t (substream 1). sigma = 0 gives y = theta x exactly.
inline std::pair<std::vector<double>, std::vector<double>> gen_cointegrated_pair(
    std::size_t n, double theta, double sigma, std::uint64_t seed) {
  if (n < 20) throw std::invalid_argument("gen_cointegrated_pair: n >= 20");
  if (sigma < 0.0)
    throw std::invalid_argument("gen_cointegrated_pair: sigma >= 0");
  std::vector<double> x = gen_random_walk(n, substream_seed(seed, 0));
  Rng noise = Rng::stream(seed, 1);
  std::vector<double> y(n);
  for (std::size_t t = 0; t < n; ++t)
    y[t] = theta * x[t] + sigma * noise.gaussian();
  return {std::move(x), std::move(y)};
}

/// Complete synthetic tutorial panel over the standard indicator keys.
/// Each entity carries two slow latent factors (logistics, macro); every
/// indicator is base + loadings on the factors + a linear trend + noise, so
/// indicators within an entity are informative about each other and levels
/// land in plausible ranges. Entities are labeled C01, C02, ...
inline frame::PanelTable gen_synthetic_panel(std::size_t n_entities,
                                             int first_year, int last_year,
                                             std::uint64_t seed) {
  if (n_entities < 1 || n_entities > 99)
    throw std::invalid_argument("gen_synthetic_panel: 1..99 entities");
  if (last_year - first_year + 1 < 10)
    throw std::invalid_argument("gen_synthetic_panel: need >= 10 years");
  const std::size_t n_years = static_cast<std::size_t>(last_year - first_year + 1);

  struct IndicatorModel {
    const char* key;
    double base;
    double logistics_load;
    double macro_load;
    double trend;
    double noise_sd;
  };
  // Scales loosely follow World Bank magnitudes for each indicator family.
  const IndicatorModel models[] = {
      {"LPI1", 3.00, 0.50, 0.00, 0.30, 0.05},
      {"LPI2", 2.80, 0.45, 0.00, 0.25, 0.05},
      {"LPI3", 2.90, 0.55, 0.05, 0.35, 0.05},
      {"LPI4", 3.05, 0.50, 0.00, 0.28, 0.05},
      {"LPI5", 3.10, 0.45, 0.00, 0.26, 0.05},
      {"LPI6", 3.40, 0.40, 0.00, 0.22, 0.05},
      {"CPT", 2.0e6, 3.0e5, 5.0e5, 8.0e5, 4.0e4},
      {"ATF", 5.0e3, 4.0e2, 1.2e3, 2.0e3, 1.0e2},
      {"TRP", 9.0, 1.0, 2.0, 1.5, 0.3},
      {"TRD", 55.0, 9.0, 5.0, 6.0, 1.2},
      {"TRF", 8.0, -2.0, -0.8, -2.5, 0.25},
      {"ECG", 2.0e4, 3.0e3, 8.0e3, 9.0e3, 4.0e2},
      {"ENS", 3.5e5, 2.0e4, 1.1e5, 6.0e4, 6.0e3},
  };

  std::vector<frame::Observation> obs;
  obs.reserve(n_entities * std::size(models) * n_years);
  for (std::size_t e = 0; e < n_entities; ++e) {
    const std::uint64_t entity_seed = substream_seed(seed, e);
    Rng factor_rng = Rng::stream(entity_seed, 0);
    std::vector<double> logistics(n_years), macro(n_years);
    double f = 0.0, g = 0.0;
    for (std::size_t t = 0; t < n_years; ++t) {
      f += 0.15 * factor_rng.gaussian();
      g += 0.15 * factor_rng.gaussian();
      logistics[t] = f;
      macro[t] = g;
    }
    char label[4];
    std::snprintf(label, sizeof(label), "C%02zu", e + 1);
    for (std::size_t k = 0; k < std::size(models); ++k) {
      const auto& m = models[k];
      Rng noise = Rng::stream(entity_seed, 1 + k);
      for (std::size_t t = 0; t < n_years; ++t) {
        const double tau =
            static_cast<double>(t) / static_cast<double>(n_years - 1);
        frame::Observation o;
        o.country = label;
        o.indicator = m.key;
        o.year = first_year + static_cast<int>(t);
        o.value = m.base + m.logistics_load * logistics[t] +
                  m.macro_load * macro[t] + m.trend * tau +
                  m.noise_sd * noise.gaussian();
        o.missing = false;
        obs.push_back(std::move(o));
      }
    }
  }
  return frame::PanelTable::from_observations(obs, {}, "synthetic");
}

}  // namespace ardl::dgp
