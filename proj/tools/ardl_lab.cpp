// ardl-lab batch CLI: panel ingestion, imputation, rolling-correlation
// screening, DLM and ARDL-ECM estimation, bootstrap bounds testing, the
// diagnostics battery, synthetic panels, and the full pipeline.
//
// Exit codes: 0 success, 2 configuration error, 3 data error,
// 4 estimation error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ardl/pipeline/run.hpp"

namespace {

using ardl::ConfigError;
using ardl::DataError;
using nlohmann::json;
namespace frame = ardl::frame;
namespace pipeline = ardl::pipeline;

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

void write_text(const std::string& path, const std::string& body) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << body;
}

/// Shared data preparation for the one-shot model subcommands: panel from
/// --input or the synthetic generator, imputed when cells are missing,
/// aligned per entity or pooled. Seeds reuse the pipeline stage derivation
/// so one-shot outputs match the corresponding pipeline stage.
struct Prepared {
  frame::PanelTable panel;
  std::vector<frame::AlignedSeriesSet> slices;
  std::string pooling;
};

frame::PanelTable load_or_simulate(const pipeline::RunConfig& cfg) {
  if (cfg.input.empty())
    return ardl::dgp::gen_synthetic_panel(cfg.sim_entities, cfg.sim_first_year,
                                          cfg.sim_last_year,
                                          pipeline::stage_seed(cfg.seed, 0));
  return frame::load_panel_csv(cfg.input);
}

Prepared prepare(const pipeline::RunConfig& cfg) {
  cfg.validate();
  Prepared p;
  p.panel = load_or_simulate(cfg);
  if (p.panel.missing_count() > 0) {
    ardl::impute::ImputeOptions opt;
    opt.forest = cfg.forest;
    opt.forest.seed = pipeline::stage_seed(cfg.seed, 1);
    opt.cross_entity = cfg.impute_cross_entity;
    opt.threads = cfg.threads;
    p.panel = ardl::impute::impute_panel(p.panel, opt).first;
  }
  const auto dep = cfg.resolved_dependent();
  const auto regs = cfg.resolved_regressors();
  if (!cfg.entity.empty()) {
    p.slices.push_back(frame::align_panel(p.panel, cfg.entity, dep, regs));
    p.pooling = "entity:" + cfg.entity;
  } else {
    for (const auto& entity : p.panel.entities()) {
      try {
        p.slices.push_back(frame::align_panel(p.panel, entity, dep, regs));
      } catch (const std::exception&) {
        // Entities without a usable span are skipped in pooled mode.
      }
    }
    if (p.slices.empty())
      throw DataError("no entity has a usable aligned sample");
    p.pooling = "pooled";
  }
  return p;
}

/// ARDL spec with lag orders resolved: fixed (p, q) from the config when
/// p > 0, otherwise criterion search over the grid.
std::pair<ardl::ecm::ArdlSpec, std::string> resolve_ardl_spec(
    const pipeline::RunConfig& cfg, const Prepared& p) {
  ardl::ecm::ArdlSpec spec;
  spec.dependent = cfg.resolved_dependent();
  spec.regressors = cfg.resolved_regressors();
  spec.contemporaneous = cfg.contemporaneous;
  spec.entity_dummies = p.slices.size() > 1;
  if (cfg.p > 0) {
    spec.p = cfg.p;
    spec.q = cfg.q;
    return {spec, "fixed"};
  }
  const auto criterion = cfg.criterion == "bic" ? ardl::ecm::Criterion::kBic
                                                : ardl::ecm::Criterion::kAic;
  const auto search = ardl::ecm::select_lags(p.slices, spec, cfg.p_max,
                                             cfg.q_max, criterion, cfg.threads);
  spec.p = search.selected_p;
  spec.q = search.selected_q;
  return {spec, cfg.criterion};
}

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json fit_block(const ardl::estat::OlsFit& fit) {
  return json{{"f", num(fit.f_stat)},
              {"p", num(fit.f_pvalue)},
              {"adj_r2", num(fit.adj_r2)},
              {"n", fit.n},
              {"k", fit.k}};
}

std::string cell(double v) { return ardl::csv::format_cell(v); }

int cmd_run(const pipeline::RunConfig& cfg) {
  const auto out = pipeline::run_pipeline(cfg);
  for (const auto& stage : out.manifest.at("stages")) {
    std::fprintf(stderr, "[%s] %zu artifact(s)\n",
                 stage.at("name").get<std::string>().c_str(),
                 stage.at("artifacts").size());
  }
  pipeline::emit_report(out.out_dir);
  std::fprintf(stderr, "[report] tables written\n");
  print_json(json{{"out", out.out_dir},
                  {"rq", out.rq},
                  {"config_hash", out.manifest.at("config_hash")},
                  {"report", out.out_dir + "/report.json"}});
  return 0;
}

int cmd_report(const std::string& dir) {
  const auto report = pipeline::emit_report(dir);
  print_json(json{{"report", dir + "/report.json"},
                  {"rq", report.at("rq")},
                  {"tables", report.at("tables")}});
  return 0;
}

int cmd_simulate(const pipeline::RunConfig& cfg, const std::string& file) {
  const auto panel = ardl::dgp::gen_synthetic_panel(
      cfg.sim_entities, cfg.sim_first_year, cfg.sim_last_year,
      pipeline::stage_seed(cfg.seed, 0));
  const auto parent = std::filesystem::path(file).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  frame::write_long_csv(panel, file);
  print_json(json{{"file", file},
                  {"entities", panel.entities()},
                  {"indicators", panel.indicators()},
                  {"year_min", panel.years().front()},
                  {"year_max", panel.years().back()},
                  {"seed", cfg.seed}});
  return 0;
}

int cmd_ingest(const pipeline::RunConfig& cfg, const std::string& codes,
               const std::string& normalize) {
  if (cfg.input.empty()) throw ConfigError("ingest: --input is required");
  frame::IngestOptions opt;
  if (!codes.empty()) opt.code_map = frame::CodeMap::load(codes);
  const auto panel = frame::load_panel_csv(cfg.input, opt);
  if (!normalize.empty()) {
    const auto parent = std::filesystem::path(normalize).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    frame::write_long_csv(panel, normalize);
  }
  json j{{"input", cfg.input},
         {"entities", panel.entities()},
         {"indicators", panel.indicators()},
         {"year_min", panel.years().front()},
         {"year_max", panel.years().back()},
         {"missing_cells", panel.missing_count()},
         {"code_map_version", opt.code_map.version()}};
  if (!normalize.empty()) j["normalized"] = normalize;
  print_json(j);
  return 0;
}

int cmd_impute(const pipeline::RunConfig& cfg, const std::string& file) {
  auto panel = load_or_simulate(cfg);
  ardl::impute::ImputeOptions opt;
  opt.forest = cfg.forest;
  opt.forest.seed = pipeline::stage_seed(cfg.seed, 1);
  opt.cross_entity = cfg.impute_cross_entity;
  opt.threads = cfg.threads;
  const auto [imputed, report] = ardl::impute::impute_panel(panel, opt);
  const auto parent = std::filesystem::path(file).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  frame::write_long_csv(imputed, file);
  json per = json::object();
  for (const auto& [key, count] : report.imputed_per_indicator)
    per[key] = count;
  json excluded = json::array();
  for (const auto& [entity, indicator] : report.excluded)
    excluded.push_back({{"entity", entity}, {"indicator", indicator}});
  print_json(json{{"file", file},
                  {"total_missing", report.total_missing},
                  {"total_imputed", report.total_imputed},
                  {"rounds", report.rounds},
                  {"final_change", num(report.final_change)},
                  {"cross_entity", report.cross_entity},
                  {"imputed_per_indicator", per},
                  {"excluded", excluded}});
  return 0;
}

int cmd_rollcorr(const pipeline::RunConfig& cfg) {
  const auto p = prepare(cfg);
  frame::AlignedSeriesSet slice;
  if (p.slices.size() == 1) {
    slice = p.slices.front();
  } else {
    slice.entity = "pooled";
    slice.dependent_name = cfg.resolved_dependent();
    slice.regressor_names = cfg.resolved_regressors();
    slice.regressors.resize(slice.regressor_names.size());
    for (const auto& s : p.slices) {
      slice.dependent.insert(slice.dependent.end(), s.dependent.begin(),
                             s.dependent.end());
      slice.years.insert(slice.years.end(), s.years.begin(), s.years.end());
      for (std::size_t j = 0; j < slice.regressors.size(); ++j)
        slice.regressors[j].insert(slice.regressors[j].end(),
                                   s.regressors[j].begin(),
                                   s.regressors[j].end());
    }
  }
  const auto rows = ardl::rollcorr::screen_pairs(
      slice, cfg.widths, cfg.band_replications,
      pipeline::stage_seed(cfg.seed, 2), cfg.threads);

  std::filesystem::create_directories(cfg.out);
  std::ostringstream table, sequences;
  table << "variables,width,sdrolcor,band95,band05\n";
  sequences << "variables,width,window_end,corr\n";
  json jrows = json::array();
  for (const auto& r : rows) {
    const std::string label = r.dependent + " vs " + r.regressor;
    const double sd =
        r.sd_defined ? r.sd : std::numeric_limits<double>::quiet_NaN();
    table << label << ',' << r.width << ',' << cell(sd) << ','
          << cell(r.band_95) << ',' << cell(r.band_05) << "\n";
    for (std::size_t t = 0; t < r.sequence.corr.size(); ++t) {
      sequences << label << ',' << r.width << ','
                << (t + static_cast<std::size_t>(r.width) - 1) << ','
                << cell(r.sequence.corr[t]) << "\n";
    }
    jrows.push_back({{"variables", label},
                     {"width", r.width},
                     {"sdrolcor", num(sd)},
                     {"band95", num(r.band_95)},
                     {"band05", num(r.band_05)},
                     {"inside_band", r.inside_band},
                     {"degenerate_windows", r.sequence.n_degenerate}});
  }
  write_text(cfg.out + "/rollcorr.csv", table.str());
  write_text(cfg.out + "/rollcorr_sequences.csv", sequences.str());
  print_json(json{{"pooling", p.pooling},
                  {"series_length", slice.length()},
                  {"replications", cfg.band_replications},
                  {"table", cfg.out + "/rollcorr.csv"},
                  {"sequences", cfg.out + "/rollcorr_sequences.csv"},
                  {"rows", jrows}});
  return 0;
}

int cmd_dlm(const pipeline::RunConfig& cfg) {
  const auto p = prepare(cfg);
  ardl::dlm::DlmSpec spec;
  spec.dependent = cfg.resolved_dependent();
  spec.regressors = cfg.resolved_regressors();
  spec.q = cfg.dlm_q;
  spec.entity_dummies = p.slices.size() > 1;
  const auto full = ardl::dlm::fit_dlm(p.slices, spec);
  const auto reduced = ardl::dlm::reduce_model(p.slices, full, cfg.dlm_alpha,
                                               cfg.dlm_whole_series);
  print_json(json{{"rq", cfg.rq_label()},
                  {"pooling", p.pooling},
                  {"q", cfg.dlm_q},
                  {"alpha", cfg.dlm_alpha},
                  {"full", fit_block(full.ols)},
                  {"reduced", fit_block(reduced.ols)},
                  {"dropped", reduced.dropped},
                  {"intercept_only", reduced.intercept_only}});
  return 0;
}

int cmd_ardl(const pipeline::RunConfig& cfg) {
  const auto p = prepare(cfg);
  const auto [spec, selection] = resolve_ardl_spec(cfg, p);
  const auto fit = ardl::ecm::fit_ardl_ecm(p.slices, spec);
  ardl::ecm::LagGridCell metrics;
  ardl::ecm::detail::metrics_for_fit(p.slices, fit, metrics);
  json long_run = json::object();
  if (fit.long_run_defined) {
    for (std::size_t i = 0; i < fit.long_run_names.size(); ++i)
      long_run[fit.long_run_names[i]] = num(fit.long_run[i]);
  }
  print_json(json{
      {"rq", cfg.rq_label()},
      {"pooling", p.pooling},
      {"selection", selection},
      {"p", spec.p},
      {"q", spec.q},
      {"contemporaneous", spec.contemporaneous},
      {"fit", fit_block(fit.ols)},
      {"aic", num(fit.ols.aic)},
      {"bic", num(fit.ols.bic)},
      {"mase", metrics.metrics_defined ? num(metrics.mase) : json(nullptr)},
      {"gmrae", metrics.metrics_defined ? num(metrics.gmrae) : json(nullptr)},
      {"adjustment_speed", num(fit.adjustment_speed)},
      {"adjustment_t", num(fit.adjustment_t)},
      {"long_run_defined", fit.long_run_defined},
      {"long_run", long_run}});
  return 0;
}

int cmd_bounds(const pipeline::RunConfig& cfg, const std::string& dump_f) {
  const auto p = prepare(cfg);
  const auto [spec, selection] = resolve_ardl_spec(cfg, p);
  ardl::bounds::BootstrapParams bp;
  bp.replications = cfg.bounds_replications;
  bp.levels = cfg.bounds_levels;
  bp.seed = pipeline::stage_seed(cfg.seed, 5);
  bp.threads = cfg.threads;
  std::vector<double> f_sample;
  const auto result = ardl::bounds::bounds_test(
      p.slices, spec, bp, cfg.bounds_summed_form,
      dump_f.empty() ? nullptr : &f_sample);
  if (!dump_f.empty()) {
    std::ostringstream out;
    out << "replication,f\n";
    for (std::size_t b = 0; b < f_sample.size(); ++b)
      out << b << ',' << cell(f_sample[b]) << "\n";
    write_text(dump_f, out.str());
  }
  json levels = json::array();
  for (std::size_t i = 0; i < result.levels.size(); ++i) {
    levels.push_back({{"level", result.levels[i]},
                      {"critical_value", num(result.critical_values[i])},
                      {"reject", static_cast<bool>(result.reject[i])}});
  }
  json j{{"rq", cfg.rq_label()},
         {"pooling", p.pooling},
         {"selection", selection},
         {"p", spec.p},
         {"q", spec.q},
         {"f_stat", num(result.f_stat)},
         {"m", result.m},
         {"p_value", num(result.p_value)},
         {"replications", result.replications},
         {"summed_form", result.summed_form},
         {"levels", levels},
         {"narrative", result.narrative}};
  if (!dump_f.empty()) j["f_sample"] = dump_f;
  print_json(j);
  return 0;
}

int cmd_diagnose(const pipeline::RunConfig& cfg, const std::string& csv_path,
                 const ardl::diag::BatteryOptions& base_opt) {
  const auto p = prepare(cfg);
  const auto [spec, selection] = resolve_ardl_spec(cfg, p);
  ardl::diag::BatteryOptions opt = base_opt;
  opt.bounds.replications = cfg.bounds_replications;
  opt.bounds.levels = cfg.bounds_levels;
  opt.bounds.seed = pipeline::stage_seed(cfg.seed, 5);
  opt.bounds.threads = cfg.threads;
  const auto battery = ardl::diag::run_battery(p.slices, spec, opt);
  json tests = json::array();
  for (const auto& t : battery.tests)
    tests.push_back(pipeline::detail::test_json(t));
  if (!csv_path.empty()) {
    std::ostringstream out;
    out << "rq,p,q,test1,test2,test3,test4,test5,test6\n";
    out << cfg.rq_label() << ',' << battery.p << ',' << battery.q;
    for (const auto& t : battery.tests) out << ',' << cell(t.statistic);
    out << "\n";
    write_text(csv_path, out.str());
  }
  json j{{"rq", cfg.rq_label()},
         {"pooling", p.pooling},
         {"selection", selection},
         {"p", battery.p},
         {"q", battery.q},
         {"n", battery.n},
         {"entities", battery.entities},
         {"tests", tests}};
  if (!csv_path.empty()) j["csv"] = csv_path;
  print_json(j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ardl-lab: bootstrap ARDL-ECM toolkit"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", ardl::kVersion);

  std::string config_path, out_dir, rq, dependent, entity, input;
  std::vector<std::string> regressors;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool pool = false;
  auto* opt_config = app.add_option("--config", config_path,
                                    "JSON config file (schema 1)")
                         ->check(CLI::ExistingFile);
  auto* opt_seed =
      app.add_option("--seed", seed, "global seed; every stage seed derives from it");
  auto* opt_out = app.add_option("--out", out_dir, "output directory");
  auto* opt_threads = app.add_option("--threads", threads, "worker threads");
  auto* opt_input =
      app.add_option("--input", input, "panel CSV (long or wide); empty: synthetic");
  auto* opt_rq = app.add_option("--rq", rq, "research-question preset RQ1..RQ4");
  auto* opt_dep = app.add_option("--dep", dependent, "dependent variable key");
  auto* opt_x = app.add_option("--x", regressors, "regressor keys");
  auto* opt_entity =
      app.add_option("--entity", entity, "restrict to one entity");
  auto* opt_pool = app.add_flag("--pool", pool, "pool all entities (default)");

  auto* sub_run = app.add_subcommand("run", "full pipeline plus report tables");

  std::string report_dir;
  auto* sub_report =
      app.add_subcommand("report", "consolidate a completed run directory");
  sub_report->add_option("dir", report_dir, "run directory (default: --out)");

  std::string sim_file = "synthetic_panel.csv";
  auto* sub_simulate =
      app.add_subcommand("simulate", "write a synthetic panel as long CSV");
  sub_simulate->add_option("--file", sim_file, "output CSV path");
  std::size_t sim_entities = 0;
  int sim_first = 0, sim_last = 0;
  auto* opt_sim_entities =
      sub_simulate->add_option("--entities", sim_entities, "entity count");
  auto* opt_sim_first =
      sub_simulate->add_option("--first-year", sim_first, "first year");
  auto* opt_sim_last =
      sub_simulate->add_option("--last-year", sim_last, "last year");

  std::string codes_path, normalize_path;
  auto* sub_ingest =
      app.add_subcommand("ingest", "validate a panel CSV and summarize it");
  sub_ingest->add_option("--codes", codes_path, "indicator code map file")
      ->check(CLI::ExistingFile);
  sub_ingest->add_option("--normalize", normalize_path,
                         "write the normalized long CSV here");

  std::string impute_file = "panel_imputed.csv";
  auto* sub_impute =
      app.add_subcommand("impute", "fill missing cells by iterative forests");
  sub_impute->add_option("--file", impute_file, "output CSV path");
  int trees = 0, min_leaf = 0, rounds = 0;
  double tol = 0.0;
  auto* opt_trees = sub_impute->add_option("--trees", trees, "trees per forest");
  auto* opt_min_leaf =
      sub_impute->add_option("--min-leaf", min_leaf, "minimum leaf size");
  auto* opt_rounds =
      sub_impute->add_option("--rounds", rounds, "maximum refinement rounds");
  auto* opt_tol = sub_impute->add_option("--tol", tol, "convergence tolerance");
  bool cross_entity = false;
  auto* opt_cross = sub_impute->add_flag("--cross-entity", cross_entity,
                                         "pool entities while training");

  auto* sub_rollcorr = app.add_subcommand(
      "rollcorr", "rolling-correlation screen with white-noise bands");
  std::vector<int> widths;
  int band_B = 0;
  auto* opt_widths =
      sub_rollcorr->add_option("--widths", widths, "window widths (>= 2)");
  auto* opt_band_B =
      sub_rollcorr->add_option("--B", band_B, "band replications (>= 100)");

  auto* sub_dlm =
      app.add_subcommand("dlm", "finite distributed lag model, full + reduced");
  int dlm_q = -1;
  double dlm_alpha = 0.0;
  bool dlm_whole = false;
  auto* opt_dlm_q = sub_dlm->add_option("--q", dlm_q, "distributed lag order");
  auto* opt_dlm_alpha =
      sub_dlm->add_option("--alpha", dlm_alpha, "reduction threshold");
  auto* opt_dlm_whole = sub_dlm->add_flag(
      "--whole-series", dlm_whole, "drop whole regressors instead of terms");

  auto* sub_ardl =
      app.add_subcommand("ardl", "ARDL-ECM fit with lag-order selection");
  int ardl_p = -1, ardl_q = -1, p_max = 0, q_max = -1;
  std::string criterion;
  bool contemporaneous = false;
  auto* opt_p = sub_ardl->add_option("--p", ardl_p, "fixed dependent lag order");
  auto* opt_q = sub_ardl->add_option("--q", ardl_q, "fixed regressor lag order");
  auto* opt_pmax = sub_ardl->add_option("--pmax", p_max, "search limit for p");
  auto* opt_qmax = sub_ardl->add_option("--qmax", q_max, "search limit for q");
  auto* opt_criterion =
      sub_ardl->add_option("--criterion", criterion, "aic or bic")
          ->check(CLI::IsMember({"aic", "bic"}));
  auto* opt_contemp = sub_ardl->add_flag(
      "--contemporaneous", contemporaneous,
      "include the current-period regressor differences");

  auto* sub_bounds =
      app.add_subcommand("bounds", "bootstrap bounds cointegration test");
  int bounds_B = 0;
  std::vector<double> bounds_levels;
  bool summed = false;
  std::string dump_f;
  auto* opt_bounds_B =
      sub_bounds->add_option("--B", bounds_B, "bootstrap replications (>= 99)");
  auto* opt_levels =
      sub_bounds->add_option("--levels", bounds_levels, "confidence levels");
  auto* opt_summed = sub_bounds->add_flag(
      "--summed", summed, "single-restriction summed-coefficient form");
  sub_bounds->add_option("--dump-f", dump_f,
                         "write the bootstrap F sample to this CSV");
  auto* opt_bounds_p = sub_bounds->add_option("--p", ardl_p, "fixed p");
  auto* opt_bounds_q = sub_bounds->add_option("--q", ardl_q, "fixed q");

  auto* sub_diagnose =
      app.add_subcommand("diagnose", "six-test battery on the ARDL-ECM");
  std::string diag_csv;
  ardl::diag::BatteryOptions battery_opt;
  sub_diagnose->add_option("--csv", diag_csv, "also export the battery CSV");
  sub_diagnose->add_option("--bg-lags", battery_opt.bg_lags,
                           "serial-correlation test lag order");
  sub_diagnose->add_option("--lb-lags", battery_opt.lb_lags,
                           "portmanteau lags (0: auto)");
  sub_diagnose->add_option("--reset-max-power", battery_opt.reset_max_power,
                           "highest fitted power in the specification test");
  bool classic_bp = false;
  sub_diagnose->add_flag("--classic-bp", classic_bp,
                         "classic heteroskedasticity statistic (default: "
                         "robust variant)");
  auto* opt_diag_B = sub_diagnose->add_option(
      "--B", bounds_B, "bootstrap replications for the bounds slot");
  auto* opt_diag_p = sub_diagnose->add_option("--p", ardl_p, "fixed p");
  auto* opt_diag_q = sub_diagnose->add_option("--q", ardl_q, "fixed q");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    ardl::pipeline::RunConfig cfg;
    if (opt_config->count()) cfg = ardl::pipeline::load_config(config_path);
    if (opt_seed->count()) cfg.seed = seed;
    if (opt_threads->count()) cfg.threads = threads;
    if (opt_out->count()) cfg.out = out_dir;
    if (opt_input->count()) cfg.input = input;
    if (opt_rq->count()) cfg.preset = rq;
    if (opt_dep->count()) cfg.dependent = dependent;
    if (opt_x->count()) cfg.regressors = regressors;
    if (opt_entity->count()) cfg.entity = entity;
    if (opt_pool->count() && pool) cfg.entity.clear();
    if (cfg.preset.empty() && cfg.dependent.empty()) cfg.preset = "RQ1";

    if (*sub_simulate) {
      if (opt_sim_entities->count()) cfg.sim_entities = sim_entities;
      if (opt_sim_first->count()) cfg.sim_first_year = sim_first;
      if (opt_sim_last->count()) cfg.sim_last_year = sim_last;
    }
    if (*sub_impute) {
      if (opt_trees->count()) cfg.forest.trees = trees;
      if (opt_min_leaf->count()) cfg.forest.min_leaf = min_leaf;
      if (opt_rounds->count()) cfg.forest.max_rounds = rounds;
      if (opt_tol->count()) cfg.forest.tol = tol;
      if (opt_cross->count()) cfg.impute_cross_entity = cross_entity;
    }
    if (*sub_rollcorr) {
      if (opt_widths->count()) {
        cfg.widths.clear();
        for (const int w : widths) {
          if (w < 2) throw ConfigError("config: rollcorr widths >= 2");
          cfg.widths.push_back(static_cast<std::size_t>(w));
        }
      }
      if (opt_band_B->count()) cfg.band_replications = band_B;
    }
    if (*sub_dlm) {
      if (opt_dlm_q->count()) cfg.dlm_q = dlm_q;
      if (opt_dlm_alpha->count()) cfg.dlm_alpha = dlm_alpha;
      if (opt_dlm_whole->count()) cfg.dlm_whole_series = dlm_whole;
    }
    if (*sub_ardl) {
      if (opt_p->count()) cfg.p = ardl_p;
      if (opt_q->count()) cfg.q = ardl_q;
      if (opt_pmax->count()) cfg.p_max = p_max;
      if (opt_qmax->count()) cfg.q_max = q_max;
      if (opt_criterion->count()) cfg.criterion = criterion;
      if (opt_contemp->count()) cfg.contemporaneous = contemporaneous;
    }
    if (*sub_bounds) {
      if (opt_bounds_B->count()) cfg.bounds_replications = bounds_B;
      if (opt_levels->count()) cfg.bounds_levels = bounds_levels;
      if (opt_summed->count()) cfg.bounds_summed_form = summed;
      if (opt_bounds_p->count()) cfg.p = ardl_p;
      if (opt_bounds_q->count()) cfg.q = ardl_q;
    }
    if (*sub_diagnose) {
      if (opt_diag_B->count()) cfg.bounds_replications = bounds_B;
      if (opt_diag_p->count()) cfg.p = ardl_p;
      if (opt_diag_q->count()) cfg.q = ardl_q;
      battery_opt.koenker = !classic_bp;
    }

    if (*sub_run) return cmd_run(cfg);
    if (*sub_report)
      return cmd_report(report_dir.empty() ? cfg.out : report_dir);
    if (*sub_simulate) return cmd_simulate(cfg, sim_file);
    if (*sub_ingest) return cmd_ingest(cfg, codes_path, normalize_path);
    if (*sub_impute) return cmd_impute(cfg, impute_file);
    if (*sub_rollcorr) return cmd_rollcorr(cfg);
    if (*sub_dlm) return cmd_dlm(cfg);
    if (*sub_ardl) return cmd_ardl(cfg);
    if (*sub_bounds) return cmd_bounds(cfg, dump_f);
    if (*sub_diagnose) return cmd_diagnose(cfg, diag_csv, battery_opt);
    throw ConfigError("no subcommand");
  } catch (const ardl::ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 2;
  } catch (const ardl::DataError& ex) {
    std::cerr << "data error: " << ex.what() << "\n";
    return 3;
  } catch (const ardl::EstimationError& ex) {
    std::cerr << "estimation error: " << ex.what() << "\n";
    return 4;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
