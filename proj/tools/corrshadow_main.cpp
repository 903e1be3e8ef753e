// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end.  All work happens behind the C API; this binary
// only turns flags into the JSON configs the library consumes.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "corrshadow.h"

namespace {

using json = nlohmann::json;

struct CommonArgs {
  std::string config_file;
  std::string deployment;
  std::optional<int> nx, ny;
  std::optional<double> spacing;
  std::string output;
  std::optional<long long> seed;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_grid = true) {
  cmd->add_option("--config", args.config_file,
                  "JSON config file; flags override its values");
  cmd->add_option("--deployment", args.deployment, "deployment JSON file");
  if (with_grid) {
    cmd->add_option("--nx", args.nx, "grid columns");
    cmd->add_option("--ny", args.ny, "grid rows");
    cmd->add_option("--spacing", args.spacing, "grid spacing in meters");
  }
  cmd->add_option("-o,--output", args.output, "output file path");
  cmd->add_option("--seed", args.seed, "random seed (overrides CORRSHADOW_SEED)");
  cmd->add_option("--set", args.sets,
                  "extra config entries as dotted.key=json-value; repeatable");
}

// Set config[dotted.path] = value.
void set_path(json& config, const std::string& dotted, const json& value) {
  json* node = &config;
  std::stringstream ss(dotted);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    node = &(*node)[parts[i]];
  }
  (*node)[parts.back()] = value;
}

json parse_value(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) return json(text);  // bare strings need no quotes
  return v;
}

int fail_usage(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 2;
}

std::optional<long long> resolve_seed(const CommonArgs& args) {
  if (args.seed) return args.seed;
  if (const char* env = std::getenv("CORRSHADOW_SEED")) {
    return std::atoll(env);
  }
  return std::nullopt;
}

json base_config(const CommonArgs& args, bool top_level_seed) {
  json config = json::object();
  if (!args.config_file.empty()) {
    std::ifstream in(args.config_file);
    if (!in) {
      throw CLI::ValidationError("--config", "cannot open " + args.config_file);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    config = json::parse(ss.str(), nullptr, false);
    if (config.is_discarded()) {
      throw CLI::ValidationError("--config", "invalid JSON in " + args.config_file);
    }
  }
  if (!args.deployment.empty()) config["deployment"] = args.deployment;
  if (args.nx) config["grid"]["nx"] = *args.nx;
  if (args.ny) config["grid"]["ny"] = *args.ny;
  if (args.spacing) config["grid"]["spacing_m"] = *args.spacing;
  if (!args.output.empty()) config["output"] = args.output;

  if (top_level_seed) {
    if (const auto seed = resolve_seed(args)) config["seed"] = *seed;
  }
  for (const std::string& kv : args.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw CLI::ValidationError("--set", "expected dotted.key=value, got " + kv);
    }
    set_path(config, kv.substr(0, eq), parse_value(kv.substr(eq + 1)));
  }
  return config;
}

int dispatch(corrshadow_status (*fn)(const char*), const json& config) {
  const std::string text = config.dump();
  const corrshadow_status status = fn(text.c_str());
  if (status != CORRSHADOW_OK) {
    std::cerr << "error: " << corrshadow_last_error() << "\n";
  }
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"correlated link shadowing model for multi-hop wireless networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", corrshadow_version());

  // corr-table ------------------------------------------------------------
  CommonArgs ct;
  std::string ct_catalog, ct_measurements, ct_emit;
  bool ct_synth = false;
  auto* corr_table = app.add_subcommand(
      "corr-table", "per-geometry correlation report (measured, model, baseline)");
  add_common(corr_table, ct);
  corr_table->add_option("--catalog", ct_catalog, "geometry catalog JSON");
  corr_table->add_option("--measurements", ct_measurements, "measurement CSV");
  corr_table->add_flag("--synthetic", ct_synth, "synthesize a campaign instead");
  corr_table->add_option("--emit-measurements", ct_emit,
                         "also write the synthesized measurement CSV here");

  // fit ---------------------------------------------------------------------
  CommonArgs ft;
  std::string ft_catalog, ft_measurements;
  bool ft_synth = false;
  auto* fit = app.add_subcommand("fit",
                                 "path loss and space-constant fit with diagnostics");
  add_common(fit, ft);
  fit->add_option("--catalog", ft_catalog, "geometry catalog JSON");
  fit->add_option("--measurements", ft_measurements, "measurement CSV");
  fit->add_flag("--synthetic", ft_synth, "synthesize a campaign instead");

  // simulate ----------------------------------------------------------------
  CommonArgs sim;
  std::optional<int> sim_samples;
  std::string sim_mode, sim_cov;
  auto* simulate = app.add_subcommand(
      "simulate", "draw joint fading and received power realizations");
  add_common(simulate, sim);
  simulate->add_option("--samples", sim_samples, "number of joint draws");
  simulate->add_option("--rho-mode", sim_mode, "correlation mode: total | shadowing");
  simulate->add_option("--covariance-out", sim_cov, "also write the link covariance CSV");

  // oracle --------------------------------------------------------------------
  CommonArgs orc;
  std::string orc_catalog, orc_dump;
  std::optional<int> orc_real;
  std::optional<double> orc_h;
  auto* oracle = app.add_subcommand(
      "oracle", "field-sampling check of the analytic pair correlations");
  add_common(oracle, orc);
  oracle->add_option("--catalog", orc_catalog, "geometry catalog JSON");
  oracle->add_option("--realizations", orc_real, "field realizations to draw");
  oracle->add_option("--resolution", orc_h, "field grid spacing in meters");
  oracle->add_option("--field-dump", orc_dump,
                     "write the first field realization to PREFIX.f64/.json");

  // failure-sweep ---------------------------------------------------------------
  CommonArgs fs;
  std::optional<int> fs_nodes, fs_samples;
  std::string fs_mode;
  auto* sweep = app.add_subcommand(
      "failure-sweep", "path failure vs design margin, correlated and independent");
  add_common(sweep, fs, /*with_grid=*/false);
  sweep->add_option("--nodes", fs_nodes, "chain size: 3 or 4");
  sweep->add_option("--mc-samples", fs_samples, "Monte Carlo draws (4-node chains)");
  sweep->add_option("--rho-mode", fs_mode, "correlation mode: total | shadowing");
  std::optional<double> fs_spacing;
  sweep->add_option("--chain-spacing", fs_spacing, "chain hop spacing in meters");

  // gudmundson-compare ---------------------------------------------------------
  CommonArgs gc;
  std::string gc_catalog, gc_measurements;
  bool gc_synth = false;
  auto* compare = app.add_subcommand(
      "gudmundson-compare", "model-vs-baseline agreement with the measurements");
  add_common(compare, gc);
  compare->add_option("--catalog", gc_catalog, "geometry catalog JSON");
  compare->add_option("--measurements", gc_measurements, "measurement CSV");
  compare->add_flag("--synthetic", gc_synth, "synthesize a campaign instead");

  // catalog ----------------------------------------------------------------------
  CommonArgs cat;
  std::optional<int> cat_max;
  std::optional<double> cat_maxlen;
  auto* catalog = app.add_subcommand(
      "catalog", "enumerate and rank the deployment's link-pair geometries");
  add_common(catalog, cat);
  catalog->add_option("--max-entries", cat_max, "geometries to keep");
  catalog->add_option("--max-link-length", cat_maxlen, "longest link to consider (m)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (corr_table->parsed()) {
      json config = base_config(ct, /*top_level_seed=*/false);
      if (!ct_catalog.empty()) config["catalog"] = ct_catalog;
      if (!ct_measurements.empty()) config["measurements"] = ct_measurements;
      if (ct_synth && !config.contains("synthetic")) config["synthetic"] = json::object();
      if (!ct_emit.empty()) config["emit_measurements"] = ct_emit;
      if (config.contains("synthetic") && config["synthetic"].is_object()) {
        if (const auto seed = resolve_seed(ct)) config["synthetic"]["seed"] = *seed;
      }
      return dispatch(&corrshadow_run_corr_table, config);
    }
    if (fit->parsed()) {
      json config = base_config(ft, /*top_level_seed=*/false);
      if (!ft_catalog.empty()) config["catalog"] = ft_catalog;
      if (!ft_measurements.empty()) config["measurements"] = ft_measurements;
      if (ft_synth && !config.contains("synthetic")) config["synthetic"] = json::object();
      if (config.contains("synthetic") && config["synthetic"].is_object()) {
        if (const auto seed = resolve_seed(ft)) config["synthetic"]["seed"] = *seed;
      }
      return dispatch(&corrshadow_run_fit, config);
    }
    if (simulate->parsed()) {
      json config = base_config(sim, /*top_level_seed=*/true);
      if (sim_samples) config["n_samples"] = *sim_samples;
      if (!sim_mode.empty()) config["rho_mode"] = sim_mode;
      if (!sim_cov.empty()) config["covariance_output"] = sim_cov;
      return dispatch(&corrshadow_run_simulate, config);
    }
    if (oracle->parsed()) {
      json config = base_config(orc, /*top_level_seed=*/true);
      if (!orc_catalog.empty()) config["catalog"] = orc_catalog;
      if (orc_real) config["n_realizations"] = *orc_real;
      if (orc_h) config["h_m"] = *orc_h;
      if (!orc_dump.empty()) config["field_dump"] = orc_dump;
      return dispatch(&corrshadow_run_oracle, config);
    }
    if (sweep->parsed()) {
      json config = base_config(fs, /*top_level_seed=*/true);
      if (fs_nodes) config["n_nodes"] = *fs_nodes;
      if (fs_samples) config["mc_samples"] = *fs_samples;
      if (!fs_mode.empty()) config["rho_mode"] = fs_mode;
      if (fs_spacing) config["spacing_m"] = *fs_spacing;
      return dispatch(&corrshadow_run_failure_sweep, config);
    }
    if (compare->parsed()) {
      json config = base_config(gc, /*top_level_seed=*/false);
      if (!gc_catalog.empty()) config["catalog"] = gc_catalog;
      if (!gc_measurements.empty()) config["measurements"] = gc_measurements;
      if (gc_synth && !config.contains("synthetic")) config["synthetic"] = json::object();
      if (config.contains("synthetic") && config["synthetic"].is_object()) {
        if (const auto seed = resolve_seed(gc)) config["synthetic"]["seed"] = *seed;
      }
      return dispatch(&corrshadow_run_gudmundson_compare, config);
    }
    if (catalog->parsed()) {
      json config = base_config(cat, /*top_level_seed=*/false);
      if (cat_max) config["max_entries"] = *cat_max;
      if (cat_maxlen) config["max_link_length_m"] = *cat_maxlen;
      return dispatch(&corrshadow_run_catalog, config);
    }
  } catch (const CLI::ValidationError& e) {
    return fail_usage(e.what());
  } catch (const std::exception& e) {
    return fail_usage(e.what());
  }
  return fail_usage("no subcommand given");
}
