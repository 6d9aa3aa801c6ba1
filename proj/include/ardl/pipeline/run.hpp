#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ardl/bounds/bounds.hpp"
#include "ardl/dgp/generators.hpp"
#include "ardl/diag/battery.hpp"
#include "ardl/diag/influence.hpp"
#include "ardl/dlm/dlm.hpp"
#include "ardl/ecm/fit.hpp"
#include "ardl/ecm/lag_search.hpp"
#include "ardl/frame/panel.hpp"
#include "ardl/frame/transform.hpp"
#include "ardl/impute/impute.hpp"
#include "ardl/pipeline/config.hpp"
#include "ardl/pipeline/presets.hpp"
#include "ardl/rollcorr/rollcorr.hpp"
#include "ardl/util/csv.hpp"
#include "ardl/util/hash.hpp"
#include "ardl/version.hpp"

namespace ardl::pipeline {

inline constexpr std::size_t kStageCount = 7;
inline constexpr const char* kStageNames[kStageCount] = {
    "ingest", "impute", "screen", "dlm", "ardl", "bounds", "diagnostics"};

/// Module seed for stage i. One global seed reproduces the whole run.
inline std::uint64_t stage_seed(std::uint64_t global_seed, std::size_t stage) {
  return substream_seed(global_seed, stage);
}

namespace detail {

namespace fs = std::filesystem;

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw DataError("write failed: " + path.string());
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Collects one stage's artifacts. Every file is first written with a
/// .partial suffix; commit() renames them to their final names, so a stage
/// failure leaves only .partial files behind.
class StageWriter {
 public:
  StageWriter(fs::path dir, std::string stage_name, std::uint64_t seed)
      : dir_(std::move(dir)), name_(std::move(stage_name)), seed_(seed) {}

  void add(const std::string& file, const std::string& content) {
    const fs::path partial = dir_ / (file + ".partial");
    write_file(partial, content);
    pending_.push_back(file);
    hashes_.push_back(hex64(fnv1a64(content)));
  }

  /// For artifacts produced by writers that take a path: call with the
  /// .partial path already written.
  fs::path partial_path(const std::string& file) const {
    return dir_ / (file + ".partial");
  }
  void add_written(const std::string& file) {
    pending_.push_back(file);
    hashes_.push_back(hex64(fnv1a64(read_file(partial_path(file)))));
  }

  nlohmann::json commit() {
    nlohmann::json artifacts = nlohmann::json::array();
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      fs::rename(dir_ / (pending_[i] + ".partial"), dir_ / pending_[i]);
      artifacts.push_back(
          {{"file", pending_[i]}, {"fnv1a64", hashes_[i]}});
    }
    return nlohmann::json{
        {"name", name_}, {"seed", seed_}, {"artifacts", artifacts}};
  }

  std::uint64_t seed() const { return seed_; }

 private:
  fs::path dir_;
  std::string name_;
  std::uint64_t seed_ = 0;
  std::vector<std::string> pending_;
  std::vector<std::string> hashes_;
};

/// JSON value for a double: non-finite becomes null (mirrors the CSV NA).
inline nlohmann::json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline nlohmann::json ols_summary(const estat::OlsFit& fit) {
  nlohmann::json coef = nlohmann::json::array();
  for (Eigen::Index i = 0; i < fit.coef.size(); ++i) {
    coef.push_back({{"term", fit.names[static_cast<std::size_t>(i)]},
                    {"coef", num(fit.coef(i))},
                    {"stderr", num(fit.std_error(i))},
                    {"t", num(fit.t_values(i))},
                    {"p", num(fit.p_values(i))}});
  }
  return nlohmann::json{{"n", fit.n},
                        {"k", fit.k},
                        {"f", num(fit.f_stat)},
                        {"p", num(fit.f_pvalue)},
                        {"r2", num(fit.r2)},
                        {"adj_r2", num(fit.adj_r2)},
                        {"aic", num(fit.aic)},
                        {"bic", num(fit.bic)},
                        {"loglik", num(fit.loglik)},
                        {"coefficients", coef}};
}

inline nlohmann::json test_json(const diag::TestResult& t) {
  nlohmann::json j{{"name", t.name},
                   {"statistic", num(t.statistic)},
                   {"p_value", num(t.p_value)},
                   {"degenerate", t.degenerate}};
  if (!t.detail.empty()) j["detail"] = t.detail;
  if (!t.error.empty()) j["error"] = t.error;
  if (t.dist) {
    j["dist"] = {{"family", dist::family_name(t.dist->family)},
                 {"df1", t.dist->df1},
                 {"df2", t.dist->df2}};
  }
  if (t.dist_statistic) j["dist_statistic"] = num(*t.dist_statistic);
  return j;
}

/// Slice copies keeping only the named regressors (used for the reduced
/// ARDL refit).
inline std::vector<frame::AlignedSeriesSet> subset_regressors(
    const std::vector<frame::AlignedSeriesSet>& data,
    const std::vector<std::string>& keep) {
  std::vector<frame::AlignedSeriesSet> out;
  out.reserve(data.size());
  for (const auto& d : data) {
    frame::AlignedSeriesSet s;
    s.entity = d.entity;
    s.years = d.years;
    s.dependent = d.dependent;
    s.dependent_name = d.dependent_name;
    for (const auto& name : keep) {
      const auto it = std::find(d.regressor_names.begin(),
                                d.regressor_names.end(), name);
      if (it == d.regressor_names.end())
        throw DataError("subset: regressor '" + name + "' not in slice");
      const auto idx =
          static_cast<std::size_t>(it - d.regressor_names.begin());
      s.regressor_names.push_back(name);
      s.regressors.push_back(d.regressors[idx]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Reduced ARDL-ECM by whole-regressor elimination: a regressor is a drop
/// candidate when every one of its columns (difference lags and level) has
/// p > alpha; the candidate with the largest minimum p is dropped and the
/// model refit, repeating while at least two regressors remain.
struct ArdlReduced {
  ecm::ArdlFit fit;
  std::vector<std::string> kept;
  std::vector<std::string> dropped;
};

inline ArdlReduced reduce_ardl(const std::vector<frame::AlignedSeriesSet>& data,
                               ecm::ArdlSpec spec, double alpha) {
  ArdlReduced out{ecm::fit_ardl_ecm(data, spec), spec.regressors, {}};
  while (out.kept.size() > 1) {
    const auto& fit = out.fit.ols;
    std::string worst;
    double worst_min_p = alpha;
    for (const auto& reg : out.kept) {
      double min_p = std::numeric_limits<double>::infinity();
      const std::string diff_prefix = "d" + reg + "@";
      const std::string level = reg + "@-1";
      for (std::size_t i = 0; i < fit.names.size(); ++i) {
        const auto& nm = fit.names[i];
        if (nm == level || nm.rfind(diff_prefix, 0) == 0)
          min_p = std::min(min_p,
                           fit.p_values(static_cast<Eigen::Index>(i)));
      }
      if (min_p > worst_min_p ||
          (min_p == worst_min_p && !worst.empty() && reg > worst)) {
        worst = reg;
        worst_min_p = min_p;
      }
    }
    if (worst.empty()) break;
    out.kept.erase(std::find(out.kept.begin(), out.kept.end(), worst));
    out.dropped.push_back(worst);
    spec.regressors = out.kept;
    out.fit = ecm::fit_ardl_ecm(subset_regressors(data, out.kept), spec);
  }
  return out;
}

}  // namespace detail

/// Everything a finished run leaves in memory; all of it is also on disk
/// under out_dir.
struct RunOutputs {
  std::string out_dir;
  nlohmann::json manifest;
  std::string rq;
  int p = 0;
  int q = 0;
};

/// Execute the seven pipeline stages under cfg.out and write manifest.json.
/// Reruns with an identical canonical config are byte-identical, including
/// across thread counts. A stage failure rethrows after writing
/// manifest.json.partial with the stage name and error; completed artifacts
/// of the failed stage keep their .partial suffix.
inline RunOutputs run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out);
  fs::create_directories(dir);

  const std::string dep = cfg.resolved_dependent();
  const std::vector<std::string> regs = cfg.resolved_regressors();
  const std::string rq = cfg.rq_label();

  nlohmann::json stages = nlohmann::json::array();
  const nlohmann::json canonical = config_canonical_json(cfg);
  const std::string canonical_text = canonical.dump();

  std::size_t stage_index = 0;
  try {
    // Stage 1: ingest.
    detail::StageWriter ingest(dir, kStageNames[0], stage_seed(cfg.seed, 0));
    frame::PanelTable panel = [&] {
      if (cfg.input.empty())
        return dgp::gen_synthetic_panel(cfg.sim_entities, cfg.sim_first_year,
                                        cfg.sim_last_year, ingest.seed());
      return frame::load_panel_csv(cfg.input);
    }();
    frame::write_long_csv(panel, ingest.partial_path("panel.csv").string());
    ingest.add_written("panel.csv");
    {
      nlohmann::json j{
          {"schema", kArtifactSchemaVersion},
          {"rq", rq},
          {"source", cfg.input.empty() ? std::string("synthetic") : cfg.input},
          {"entities", panel.entities()},
          {"indicators", panel.indicators()},
          {"year_min", panel.years().front()},
          {"year_max", panel.years().back()},
          {"missing_cells", panel.missing_count()}};
      ingest.add("ingest.json", j.dump(2) + "\n");
    }
    stages.push_back(ingest.commit());
    ++stage_index;

    // Stage 2: impute.
    detail::StageWriter imputer(dir, kStageNames[1], stage_seed(cfg.seed, 1));
    frame::PanelTable imputed = panel;
    nlohmann::json impute_json{{"schema", kArtifactSchemaVersion}, {"rq", rq}};
    if (panel.missing_count() == 0) {
      impute_json["skipped"] = "no missing cells";
      impute_json["total_missing"] = 0;
      impute_json["total_imputed"] = 0;
    } else {
      impute::ImputeOptions opt;
      opt.forest = cfg.forest;
      opt.forest.seed = imputer.seed();
      opt.cross_entity = cfg.impute_cross_entity;
      opt.threads = cfg.threads;
      auto [result_panel, report] = impute::impute_panel(panel, opt);
      imputed = std::move(result_panel);
      nlohmann::json per = nlohmann::json::object();
      for (const auto& [key, count] : report.imputed_per_indicator)
        per[key] = count;
      nlohmann::json excluded = nlohmann::json::array();
      for (const auto& [entity, indicator] : report.excluded)
        excluded.push_back({{"entity", entity}, {"indicator", indicator}});
      impute_json["rounds"] = report.rounds;
      impute_json["final_change"] = detail::num(report.final_change);
      impute_json["cross_entity"] = report.cross_entity;
      impute_json["total_missing"] = report.total_missing;
      impute_json["total_imputed"] = report.total_imputed;
      impute_json["imputed_per_indicator"] = per;
      impute_json["excluded"] = excluded;
    }
    frame::write_long_csv(imputed,
                          imputer.partial_path("panel_imputed.csv").string());
    imputer.add_written("panel_imputed.csv");
    imputer.add("impute.json", impute_json.dump(2) + "\n");
    stages.push_back(imputer.commit());
    ++stage_index;

    // Aligned slices shared by the model stages.
    std::vector<frame::AlignedSeriesSet> slices;
    nlohmann::json skipped_entities = nlohmann::json::array();
    if (!cfg.entity.empty()) {
      slices.push_back(frame::align_panel(imputed, cfg.entity, dep, regs));
    } else {
      for (const auto& entity : imputed.entities()) {
        try {
          slices.push_back(frame::align_panel(imputed, entity, dep, regs));
        } catch (const std::exception& ex) {
          skipped_entities.push_back(
              {{"entity", entity}, {"error", ex.what()}});
        }
      }
      if (slices.empty())
        throw DataError("no entity has a usable aligned sample");
    }
    const std::string pooling =
        cfg.entity.empty() ? "pooled" : "entity:" + cfg.entity;

    // Stage 3: screen (rolling correlations).
    detail::StageWriter screen(dir, kStageNames[2], stage_seed(cfg.seed, 2));
    frame::AlignedSeriesSet screen_slice;
    if (slices.size() == 1) {
      screen_slice = slices.front();
    } else {
      // Pooled screening stacks the per-entity series in entity order; the
      // windows that span adjacent entities are part of that convention.
      screen_slice.entity = "pooled";
      screen_slice.dependent_name = dep;
      screen_slice.regressor_names = regs;
      screen_slice.regressors.resize(regs.size());
      for (const auto& s : slices) {
        screen_slice.dependent.insert(screen_slice.dependent.end(),
                                      s.dependent.begin(), s.dependent.end());
        screen_slice.years.insert(screen_slice.years.end(), s.years.begin(),
                                  s.years.end());
        for (std::size_t j = 0; j < regs.size(); ++j)
          screen_slice.regressors[j].insert(screen_slice.regressors[j].end(),
                                            s.regressors[j].begin(),
                                            s.regressors[j].end());
      }
    }
    const auto screen_rows =
        rollcorr::screen_pairs(screen_slice, cfg.widths,
                               cfg.band_replications, screen.seed(),
                               cfg.threads);
    {
      std::ostringstream csv_out;
      csv_out << "variables,width,sdrolcor,band95,band05\n";
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : screen_rows) {
        const std::string label = r.dependent + " vs " + r.regressor;
        csv_out << label << ',' << r.width << ','
                << csv::format_cell(r.sd_defined
                                        ? r.sd
                                        : std::numeric_limits<double>::quiet_NaN())
                << ',' << csv::format_cell(r.band_95) << ','
                << csv::format_cell(r.band_05) << "\n";
        rows.push_back({{"variables", label},
                        {"width", r.width},
                        {"sdrolcor", detail::num(
                                         r.sd_defined
                                             ? r.sd
                                             : std::numeric_limits<
                                                   double>::quiet_NaN())},
                        {"band95", detail::num(r.band_95)},
                        {"band05", detail::num(r.band_05)},
                        {"inside_band", r.inside_band},
                        {"degenerate_windows", r.sequence.n_degenerate}});
      }
      nlohmann::json j{{"schema", kArtifactSchemaVersion},
                       {"rq", rq},
                       {"pooling", pooling},
                       {"series_length", screen_slice.length()},
                       {"replications", cfg.band_replications},
                       {"pair_order",
                        "pairs follow the preset regressor order"},
                       {"rows", rows}};
      if (slices.size() > 1)
        j["stacking_note"] =
            "pooled series are stacked in entity order; windows may span "
            "adjacent entities";
      screen.add("rollcorr.csv", csv_out.str());
      screen.add("rollcorr.json", j.dump(2) + "\n");
    }
    stages.push_back(screen.commit());
    ++stage_index;

    // Stage 4: DLM.
    detail::StageWriter dlm_stage(dir, kStageNames[3], stage_seed(cfg.seed, 3));
    dlm::DlmSpec dlm_spec;
    dlm_spec.dependent = dep;
    dlm_spec.regressors = regs;
    dlm_spec.q = cfg.dlm_q;
    dlm_spec.entity_dummies = slices.size() > 1;
    const auto dlm_full = dlm::fit_dlm(slices, dlm_spec);
    const auto dlm_reduced = dlm::reduce_model(slices, dlm_full, cfg.dlm_alpha,
                                               cfg.dlm_whole_series);
    {
      nlohmann::json j{{"schema", kArtifactSchemaVersion},
                       {"rq", rq},
                       {"pooling", pooling},
                       {"q", cfg.dlm_q},
                       {"alpha", cfg.dlm_alpha},
                       {"reduction",
                        cfg.dlm_whole_series ? "whole-series" : "per-term"},
                       {"full", detail::ols_summary(dlm_full.ols)},
                       {"reduced", detail::ols_summary(dlm_reduced.ols)},
                       {"dropped", dlm_reduced.dropped},
                       {"intercept_only", dlm_reduced.intercept_only}};
      if (!skipped_entities.empty()) j["skipped_entities"] = skipped_entities;
      dlm_stage.add("dlm.json", j.dump(2) + "\n");
    }
    stages.push_back(dlm_stage.commit());
    ++stage_index;

    // Stage 5: ARDL (lag selection + final fit + whole-regressor reduction).
    detail::StageWriter ardl_stage(dir, kStageNames[4], stage_seed(cfg.seed, 4));
    ecm::ArdlSpec ardl_spec;
    ardl_spec.dependent = dep;
    ardl_spec.regressors = regs;
    ardl_spec.contemporaneous = cfg.contemporaneous;
    ardl_spec.entity_dummies = slices.size() > 1;
    nlohmann::json grid_json = nlohmann::json::array();
    std::string selection = "fixed";
    if (cfg.p > 0) {
      ardl_spec.p = cfg.p;
      ardl_spec.q = cfg.q;
    } else {
      const auto criterion = cfg.criterion == "bic" ? ecm::Criterion::kBic
                                                    : ecm::Criterion::kAic;
      const auto search = ecm::select_lags(slices, ardl_spec, cfg.p_max,
                                           cfg.q_max, criterion, cfg.threads);
      ardl_spec.p = search.selected_p;
      ardl_spec.q = search.selected_q;
      selection = cfg.criterion;
      for (const auto& cell : search.grid) {
        nlohmann::json c{{"p", cell.p},
                         {"q", cell.q},
                         {"estimable", cell.estimable}};
        if (cell.estimable) {
          c["aic"] = detail::num(cell.aic);
          c["bic"] = detail::num(cell.bic);
          if (cell.metrics_defined) {
            c["mase"] = detail::num(cell.mase);
            c["gmrae"] = detail::num(cell.gmrae);
          }
        } else {
          c["error"] = cell.error;
        }
        grid_json.push_back(c);
      }
    }
    const auto ardl_fit = ecm::fit_ardl_ecm(slices, ardl_spec);
    ecm::LagGridCell final_cell;
    ecm::detail::metrics_for_fit(slices, ardl_fit, final_cell);
    const auto ardl_reduced =
        detail::reduce_ardl(slices, ardl_spec, cfg.dlm_alpha);
    {
      nlohmann::json long_run = nlohmann::json::object();
      if (ardl_fit.long_run_defined) {
        for (std::size_t i = 0; i < ardl_fit.long_run_names.size(); ++i)
          long_run[ardl_fit.long_run_names[i]] =
              detail::num(ardl_fit.long_run[i]);
      }
      nlohmann::json j{
          {"schema", kArtifactSchemaVersion},
          {"rq", rq},
          {"pooling", pooling},
          {"selection", selection},
          {"p", ardl_spec.p},
          {"q", ardl_spec.q},
          {"contemporaneous", cfg.contemporaneous},
          {"aic", detail::num(ardl_fit.ols.aic)},
          {"bic", detail::num(ardl_fit.ols.bic)},
          {"mase", final_cell.metrics_defined ? detail::num(final_cell.mase)
                                              : nlohmann::json(nullptr)},
          {"gmrae", final_cell.metrics_defined ? detail::num(final_cell.gmrae)
                                               : nlohmann::json(nullptr)},
          {"adjustment_speed", detail::num(ardl_fit.adjustment_speed)},
          {"adjustment_t", detail::num(ardl_fit.adjustment_t)},
          {"long_run_defined", ardl_fit.long_run_defined},
          {"long_run", long_run},
          {"full", detail::ols_summary(ardl_fit.ols)},
          {"reduced", detail::ols_summary(ardl_reduced.fit.ols)},
          {"reduced_dropped", ardl_reduced.dropped},
          {"reduction", "whole-regressor, alpha=" +
                            std::to_string(cfg.dlm_alpha)}};
      if (!grid_json.empty()) j["grid"] = grid_json;
      ardl_stage.add("ardl.json", j.dump(2) + "\n");
    }
    stages.push_back(ardl_stage.commit());
    ++stage_index;

    // Stage 6: bounds.
    detail::StageWriter bounds_stage(dir, kStageNames[5],
                                     stage_seed(cfg.seed, 5));
    bounds::BootstrapParams bp;
    bp.replications = cfg.bounds_replications;
    bp.levels = cfg.bounds_levels;
    bp.seed = bounds_stage.seed();
    bp.threads = cfg.threads;
    const auto bounds_result =
        bounds::bounds_test(slices, ardl_spec, bp, cfg.bounds_summed_form);
    {
      nlohmann::json levels = nlohmann::json::array();
      for (std::size_t i = 0; i < bounds_result.levels.size(); ++i) {
        levels.push_back(
            {{"level", bounds_result.levels[i]},
             {"critical_value", detail::num(bounds_result.critical_values[i])},
             {"reject", static_cast<bool>(bounds_result.reject[i])}});
      }
      nlohmann::json j{{"schema", kArtifactSchemaVersion},
                       {"rq", rq},
                       {"f_stat", detail::num(bounds_result.f_stat)},
                       {"m", bounds_result.m},
                       {"p_value", detail::num(bounds_result.p_value)},
                       {"replications", bounds_result.replications},
                       {"seed", bounds_result.seed},
                       {"summed_form", bounds_result.summed_form},
                       {"levels", levels},
                       {"narrative", bounds_result.narrative}};
      bounds_stage.add("bounds.json", j.dump(2) + "\n");
    }
    stages.push_back(bounds_stage.commit());
    ++stage_index;

    // Stage 7: diagnostics.
    detail::StageWriter diag_stage(dir, kStageNames[6],
                                   stage_seed(cfg.seed, 6));
    diag::BatteryOptions battery_opt;
    battery_opt.bounds = bp;
    battery_opt.precomputed_bounds = bounds_result;
    const auto battery = diag::run_battery(slices, ardl_spec, battery_opt);
    {
      nlohmann::json tests = nlohmann::json::array();
      for (const auto& t : battery.tests) tests.push_back(detail::test_json(t));
      nlohmann::json j{{"schema", kArtifactSchemaVersion},
                       {"rq", rq},
                       {"p", battery.p},
                       {"q", battery.q},
                       {"n", battery.n},
                       {"entities", battery.entities},
                       {"tests", tests}};
      try {
        const auto infl = diag::influence_measures(ardl_fit.ols);
        j["influence"] = {
            {"cooks_threshold", detail::num(infl.cooks_threshold)},
            {"leverage_threshold", detail::num(infl.leverage_threshold)},
            {"flagged_cooks", infl.flagged_cooks},
            {"flagged_leverage", infl.flagged_leverage},
            {"infinite", infl.infinite}};
      } catch (const std::exception& ex) {
        j["influence"] = {{"error", ex.what()}};
      }
      diag_stage.add("diagnostics.json", j.dump(2) + "\n");
    }
    stages.push_back(diag_stage.commit());
    ++stage_index;
  } catch (const std::exception& ex) {
    nlohmann::json failed{{"schema", kArtifactSchemaVersion},
                          {"tool", "ardl-lab"},
                          {"version", kVersion},
                          {"config", canonical},
                          {"config_hash", hex64(fnv1a64(canonical_text))},
                          {"failed_stage", kStageNames[stage_index]},
                          {"error", ex.what()},
                          {"stages", stages}};
    detail::write_file(dir / "manifest.json.partial", failed.dump(2) + "\n");
    throw;
  }

  nlohmann::json manifest{
      {"schema", kArtifactSchemaVersion},
      {"tool", "ardl-lab"},
      {"version", kVersion},
      {"config", canonical},
      {"config_hash", hex64(fnv1a64(canonical_text))},
      {"global_seed", cfg.seed},
      {"seed_derivation", "stage seed i = substream_seed(global_seed, i)"},
      {"pooling", cfg.entity.empty() ? "pooled" : "entity:" + cfg.entity},
      {"stages", stages}};
  if (!cfg.preset.empty()) manifest["preset_note"] = preset_discrepancy_note();
  detail::write_file(dir / "manifest.json.partial", manifest.dump(2) + "\n");
  std::filesystem::rename(dir / "manifest.json.partial", dir / "manifest.json");

  RunOutputs out;
  out.out_dir = dir.string();
  out.manifest = manifest;
  out.rq = rq;
  return out;
}

namespace detail {

inline nlohmann::json load_stage_json(const fs::path& dir,
                                      const std::string& file,
                                      std::vector<std::string>& missing) {
  const fs::path p = dir / file;
  if (!fs::exists(p)) {
    missing.push_back(file);
    return nullptr;
  }
  return nlohmann::json::parse(read_file(p));
}

inline std::string cell_of(const nlohmann::json& v) {
  if (v.is_null()) return "NA";
  if (v.is_number()) return csv::format_cell(v.get<double>());
  return v.get<std::string>();
}

}  // namespace detail

/// Consolidate a completed run directory into the report tables:
/// table2.csv (heteroskedasticity p/statistic), table7.csv (full vs reduced
/// fits), table8.csv (lag orders, criteria, forecast metrics), table9.csv
/// (the six-test battery), plus report.json embedding every stage output.
/// The rolling-correlation table is already in rollcorr.csv.
inline nlohmann::json emit_report(const std::string& run_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(run_dir);
  std::vector<std::string> missing;
  const auto manifest = detail::load_stage_json(dir, "manifest.json", missing);
  const auto ingest = detail::load_stage_json(dir, "ingest.json", missing);
  const auto impute = detail::load_stage_json(dir, "impute.json", missing);
  const auto screen = detail::load_stage_json(dir, "rollcorr.json", missing);
  const auto dlm = detail::load_stage_json(dir, "dlm.json", missing);
  const auto ardl = detail::load_stage_json(dir, "ardl.json", missing);
  const auto bounds = detail::load_stage_json(dir, "bounds.json", missing);
  const auto diagnostics =
      detail::load_stage_json(dir, "diagnostics.json", missing);
  if (!missing.empty()) {
    std::string what = "incomplete run; missing:";
    for (const auto& m : missing) what += " " + m;
    throw DataError(what);
  }
  const std::string rq = ardl.at("rq").get<std::string>();

  // Table 2: the heteroskedasticity test row (battery slot 3).
  {
    const auto& bp = diagnostics.at("tests").at(2);
    std::ostringstream out;
    out << "rq,p_value,statistic\n";
    out << rq << ',' << detail::cell_of(bp.at("p_value")) << ','
        << detail::cell_of(bp.at("statistic")) << "\n";
    detail::write_file(dir / "table2.csv", out.str());
  }
  // Table 7: full/reduced summary for DLM and ARDL-ECM.
  {
    std::ostringstream out;
    out << "rq,test,full_f,full_p,full_adj_r2,"
           "reduced_f,reduced_p,reduced_adj_r2\n";
    const auto row = [&](const char* label, const nlohmann::json& block) {
      out << rq << ',' << label << ','
          << detail::cell_of(block.at("full").at("f")) << ','
          << detail::cell_of(block.at("full").at("p")) << ','
          << detail::cell_of(block.at("full").at("adj_r2")) << ','
          << detail::cell_of(block.at("reduced").at("f")) << ','
          << detail::cell_of(block.at("reduced").at("p")) << ','
          << detail::cell_of(block.at("reduced").at("adj_r2")) << "\n";
    };
    row("DLM", dlm);
    row("ARDL-ECM", ardl);
    detail::write_file(dir / "table7.csv", out.str());
  }
  // Table 8: lag order, criteria, forecast metrics.
  {
    std::ostringstream out;
    out << "rq,p,q,aic,bic,mase,gmrae\n";
    out << rq << ',' << ardl.at("p").get<int>() << ','
        << ardl.at("q").get<int>() << ',' << detail::cell_of(ardl.at("aic"))
        << ',' << detail::cell_of(ardl.at("bic")) << ','
        << detail::cell_of(ardl.at("mase")) << ','
        << detail::cell_of(ardl.at("gmrae")) << "\n";
    detail::write_file(dir / "table8.csv", out.str());
  }
  // Table 9: the six battery statistics.
  {
    std::ostringstream out;
    out << "rq,p,q,test1,test2,test3,test4,test5,test6\n";
    out << rq << ',' << diagnostics.at("p").get<int>() << ','
        << diagnostics.at("q").get<int>();
    for (const auto& t : diagnostics.at("tests"))
      out << ',' << detail::cell_of(t.at("statistic"));
    out << "\n";
    detail::write_file(dir / "table9.csv", out.str());
  }

  nlohmann::json report{{"schema", kArtifactSchemaVersion},
                        {"rq", rq},
                        {"manifest", manifest},
                        {"ingest", ingest},
                        {"impute", impute},
                        {"rollcorr", screen},
                        {"dlm", dlm},
                        {"ardl", ardl},
                        {"bounds", bounds},
                        {"diagnostics", diagnostics},
                        {"tables", {"table2.csv", "table7.csv", "table8.csv",
                                    "table9.csv", "rollcorr.csv"}}};
  detail::write_file(dir / "report.json", report.dump(2) + "\n");
  return report;
}

}  // namespace ardl::pipeline
