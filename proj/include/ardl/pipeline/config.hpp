#pragma once

#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ardl/bounds/bounds.hpp"
#include "ardl/impute/forest.hpp"
#include "ardl/pipeline/presets.hpp"
#include "ardl/util/errors.hpp"

namespace ardl::pipeline {

inline constexpr int kConfigSchema = 1;

/// Complete run configuration. Every field has a default, so `{}` is a
/// valid config (synthetic data, RQ1, seed 1). The environment variable
/// ARDLLAB_SEED, when set, overrides the configured seed.
struct RunConfig {
  std::string input;   // empty: simulate a synthetic panel instead
  std::string preset;  // RQ1..RQ4; empty when dependent/regressors given
  std::string dependent;
  std::vector<std::string> regressors;
  std::string entity;  // empty: pool all entities (with entity dummies)
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out = "run_out";

  // simulate block (used when input is empty)
  std::size_t sim_entities = 5;
  int sim_first_year = 2007;
  int sim_last_year = 2023;

  // impute block
  impute::ForestParams forest;
  bool impute_cross_entity = false;

  // ardl block
  int p = 0;  // 0: select over the grid below
  int q = 0;
  int p_max = 4;
  int q_max = 2;
  std::string criterion = "aic";
  bool contemporaneous = false;

  // dlm block
  int dlm_q = 1;
  double dlm_alpha = 0.05;
  bool dlm_whole_series = false;

  // bounds block
  int bounds_replications = 2000;
  std::vector<double> bounds_levels = {0.90, 0.95, 0.99};
  bool bounds_summed_form = false;

  // rollcorr block
  std::vector<std::size_t> widths = {2, 3, 4};
  int band_replications = 1000;

  /// Model variables after preset resolution.
  std::string resolved_dependent() const {
    return preset.empty() ? dependent : find_preset(preset).dependent;
  }
  std::vector<std::string> resolved_regressors() const {
    return preset.empty() ? regressors : find_preset(preset).regressors;
  }
  std::string rq_label() const { return preset.empty() ? "custom" : preset; }

  void validate() const {
    if (preset.empty()) {
      if (dependent.empty() || regressors.empty())
        throw ConfigError("config: give a preset or dependent + regressors");
    } else {
      find_preset(preset);  // throws on unknown name
      if (!dependent.empty() || !regressors.empty())
        throw ConfigError("config: preset and explicit variables conflict");
    }
    if (threads < 1) throw ConfigError("config: threads >= 1");
    if (out.empty()) throw ConfigError("config: output directory required");
    if (criterion != "aic" && criterion != "bic")
      throw ConfigError("config: criterion must be 'aic' or 'bic'");
    if (p < 0 || q < 0 || p_max < 1 || q_max < 0)
      throw ConfigError("config: invalid lag orders");
    if (dlm_q < 0) throw ConfigError("config: dlm q >= 0");
    if (!(dlm_alpha > 0.0 && dlm_alpha < 1.0))
      throw ConfigError("config: dlm alpha in (0,1)");
    forest.validate();
    bounds::BootstrapParams bp;
    bp.replications = bounds_replications;
    bp.levels = bounds_levels;
    bp.seed = seed;
    bp.validate();
    if (widths.empty()) throw ConfigError("config: rollcorr widths empty");
    for (const auto w : widths)
      if (w < 2) throw ConfigError("config: rollcorr widths >= 2");
    if (band_replications < 100)
      throw ConfigError("config: rollcorr replications >= 100");
    if (!input.empty()) {
      std::ifstream probe(input);
      if (!probe.good())
        throw ConfigError("config: input file not found: " + input);
    }
    if (sim_entities < 1 || sim_entities > 99)
      throw ConfigError("config: simulate entities in 1..99");
    if (sim_last_year - sim_first_year + 1 < 10)
      throw ConfigError("config: simulate span >= 10 years");
  }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj,
                                std::initializer_list<const char*> known,
                                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
  }
}

template <typename T>
void read_into(const nlohmann::json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  detail::reject_unknown_keys(
      j,
      {"schema", "input", "preset", "dependent", "regressors", "entity",
       "seed", "threads", "out", "simulate", "impute", "ardl", "dlm", "bounds",
       "rollcorr"},
      "top level");
  RunConfig c;
  int schema = kConfigSchema;
  detail::read_into(j, "schema", schema);
  if (schema != kConfigSchema)
    throw ConfigError("config: unsupported schema version");
  detail::read_into(j, "input", c.input);
  detail::read_into(j, "preset", c.preset);
  detail::read_into(j, "dependent", c.dependent);
  detail::read_into(j, "regressors", c.regressors);
  detail::read_into(j, "entity", c.entity);
  detail::read_into(j, "seed", c.seed);
  detail::read_into(j, "threads", c.threads);
  detail::read_into(j, "out", c.out);
  if (j.contains("simulate")) {
    const auto& s = j.at("simulate");
    detail::reject_unknown_keys(s, {"entities", "first_year", "last_year"},
                                "simulate");
    detail::read_into(s, "entities", c.sim_entities);
    detail::read_into(s, "first_year", c.sim_first_year);
    detail::read_into(s, "last_year", c.sim_last_year);
  }
  if (j.contains("impute")) {
    const auto& s = j.at("impute");
    detail::reject_unknown_keys(
        s, {"trees", "min_leaf", "max_rounds", "tol", "cross_entity"},
        "impute");
    detail::read_into(s, "trees", c.forest.trees);
    detail::read_into(s, "min_leaf", c.forest.min_leaf);
    detail::read_into(s, "max_rounds", c.forest.max_rounds);
    detail::read_into(s, "tol", c.forest.tol);
    detail::read_into(s, "cross_entity", c.impute_cross_entity);
  }
  if (j.contains("ardl")) {
    const auto& s = j.at("ardl");
    detail::reject_unknown_keys(
        s, {"p", "q", "p_max", "q_max", "criterion", "contemporaneous"},
        "ardl");
    detail::read_into(s, "p", c.p);
    detail::read_into(s, "q", c.q);
    detail::read_into(s, "p_max", c.p_max);
    detail::read_into(s, "q_max", c.q_max);
    detail::read_into(s, "criterion", c.criterion);
    detail::read_into(s, "contemporaneous", c.contemporaneous);
  }
  if (j.contains("dlm")) {
    const auto& s = j.at("dlm");
    detail::reject_unknown_keys(s, {"q", "alpha", "whole_series"}, "dlm");
    detail::read_into(s, "q", c.dlm_q);
    detail::read_into(s, "alpha", c.dlm_alpha);
    detail::read_into(s, "whole_series", c.dlm_whole_series);
  }
  if (j.contains("bounds")) {
    const auto& s = j.at("bounds");
    detail::reject_unknown_keys(s, {"replications", "levels", "summed_form"},
                                "bounds");
    detail::read_into(s, "replications", c.bounds_replications);
    detail::read_into(s, "levels", c.bounds_levels);
    detail::read_into(s, "summed_form", c.bounds_summed_form);
  }
  if (j.contains("rollcorr")) {
    const auto& s = j.at("rollcorr");
    detail::reject_unknown_keys(s, {"widths", "replications"}, "rollcorr");
    detail::read_into(s, "widths", c.widths);
    detail::read_into(s, "replications", c.band_replications);
  }
  if (c.preset.empty() && c.dependent.empty() && c.regressors.empty())
    c.preset = "RQ1";
  if (const char* env = std::getenv("ARDLLAB_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw ConfigError("ARDLLAB_SEED is not an unsigned integer");
    c.seed = static_cast<std::uint64_t>(v);
  }
  c.validate();
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw ConfigError("config file not found: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("config parse error: " + std::string(ex.what()));
  }
  return parse_config(j);
}

/// Fully resolved config as canonical JSON (defaults filled in, seed after
/// any environment override). Hashing this fixes the run identity. Fields
/// that only describe execution resources (threads, output directory) are
/// deliberately excluded so reruns elsewhere or at other thread counts
/// produce byte-identical manifests.
inline nlohmann::json config_canonical_json(const RunConfig& c) {
  nlohmann::json j;
  j["schema"] = kConfigSchema;
  j["input"] = c.input;
  j["preset"] = c.preset;
  j["dependent"] = c.dependent;
  j["regressors"] = c.regressors;
  j["entity"] = c.entity;
  j["seed"] = c.seed;
  j["simulate"] = {{"entities", c.sim_entities},
                   {"first_year", c.sim_first_year},
                   {"last_year", c.sim_last_year}};
  j["impute"] = {{"trees", c.forest.trees},
                 {"min_leaf", c.forest.min_leaf},
                 {"max_rounds", c.forest.max_rounds},
                 {"tol", c.forest.tol},
                 {"cross_entity", c.impute_cross_entity}};
  j["ardl"] = {{"p", c.p},
               {"q", c.q},
               {"p_max", c.p_max},
               {"q_max", c.q_max},
               {"criterion", c.criterion},
               {"contemporaneous", c.contemporaneous}};
  j["dlm"] = {{"q", c.dlm_q},
              {"alpha", c.dlm_alpha},
              {"whole_series", c.dlm_whole_series}};
  j["bounds"] = {{"replications", c.bounds_replications},
                 {"levels", c.bounds_levels},
                 {"summed_form", c.bounds_summed_form}};
  j["rollcorr"] = {{"widths", c.widths},
                   {"replications", c.band_replications}};
  return j;
}

}  // namespace ardl::pipeline
