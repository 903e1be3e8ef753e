// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#include "corrshadow/pipelines.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>

#include "corrshadow/catalog.hpp"
#include "corrshadow/connectivity.hpp"
#include "corrshadow/covariance.hpp"
#include "corrshadow/estimation.hpp"
#include "corrshadow/field.hpp"
#include "corrshadow/gudmundson.hpp"
#include "corrshadow/sampler.hpp"
#include "corrshadow/synthesis.hpp"
#include "corrshadow/version.hpp"

namespace corrshadow {

namespace {

using json = nlohmann::json;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void merge_config(json& eff, const json& user, const std::string& prefix) {
  if (!user.is_object())
    throw ArgumentError("config must be a JSON object at " +
                        (prefix.empty() ? std::string("the top level") : prefix));
  for (auto it = user.begin(); it != user.end(); ++it) {
    if (!eff.contains(it.key()))
      throw ArgumentError("unknown config key: " + prefix + it.key());
    if (eff[it.key()].is_object() && it.value().is_object()) {
      merge_config(eff[it.key()], it.value(), prefix + it.key() + ".");
    } else {
      eff[it.key()] = it.value();
    }
  }
}

json apply_defaults(json defaults, const json& user) {
  merge_config(defaults, user, "");
  return defaults;
}

json grid_defaults() {
  return json{{"nx", 4}, {"ny", 4}, {"spacing_m", 1.22}};
}

json quad_defaults() {
  return json{{"points", 16}, {"max_subdivisions", 12}, {"rel_tol", 1e-6}};
}

json delta_grid_defaults() {
  return json{{"min", 0.10}, {"max", 0.40}, {"step", 0.01}};
}

json synthetic_defaults() {
  return json{{"experiments", 15}, {"frequencies", 14},   {"freq_noise_db2", 2.0},
              {"intercept_dbm", -40.0}, {"exponent", 3.0}, {"sigma_db", 5.0},
              {"delta_m", 0.21},    {"shadow_ratio", 0.29}, {"seed", 12345}};
}

QuadratureSpec quad_from(const json& q) {
  QuadratureSpec spec;
  spec.points = q.at("points").get<int>();
  spec.max_subdivisions = q.at("max_subdivisions").get<int>();
  spec.rel_tol = q.at("rel_tol").get<double>();
  spec.validate();
  return spec;
}

std::vector<double> grid_from(const json& g) {
  const double lo = g.at("min").get<double>();
  const double hi = g.at("max").get<double>();
  const double step = g.at("step").get<double>();
  if (!(step > 0.0) || hi < lo) throw ArgumentError("bad grid: need step > 0 and max >= min");
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 0.5)) + 1;
  for (int k = 0; k < n; ++k) out.push_back(lo + k * step);
  return out;
}

Deployment resolve_deployment(const json& eff) {
  if (!eff.at("deployment").is_null()) {
    return Deployment::from_json_file(eff.at("deployment").get<std::string>());
  }
  const json& g = eff.at("grid");
  return Deployment::grid(g.at("nx").get<int>(), g.at("ny").get<int>(),
                          g.at("spacing_m").get<double>());
}

std::string require_path(const json& eff, const char* key) {
  if (eff.at(key).is_null())
    throw ArgumentError(std::string("config key \"") + key + "\" is required");
  return eff.at(key).get<std::string>();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot open output file: " + path);
  return out;
}

void write_header(std::ostream& out, const json& eff) {
  out << "# version = " << kToolName << ' ' << kToolVersion << '\n';
  out << "# config = " << eff.dump() << '\n';
}

CorrelationMode mode_from(const std::string& name) {
  if (name == "total") return CorrelationMode::TotalFading;
  if (name == "shadowing") return CorrelationMode::ShadowingOnly;
  throw ArgumentError("rho_mode must be \"total\" or \"shadowing\"");
}

std::string stars(double p) {
  if (p < 0.005) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

// Shared front end of the measurement-driven commands: ingest or synthesize
// an ensemble, regress path loss, and measure every catalog geometry.
struct Analysis {
  Deployment dep;
  GeometryCatalog catalog;
  PathLossFit fit;
  std::vector<GeometryMeasurement> measured;
};

json analysis_defaults() {
  return json{{"deployment", nullptr},
              {"grid", grid_defaults()},
              {"catalog", nullptr},
              {"measurements", nullptr},
              {"synthetic", nullptr},
              {"emit_measurements", nullptr},
              {"per_experiment", true},
              {"min_freq_samples", 3},
              {"ref_distance_m", 1.0},
              {"quad", quad_defaults()},
              {"delta_grid", delta_grid_defaults()},
              {"delta_m", nullptr},
              {"shadow_ratio", nullptr},
              {"weighted_fit", true},
              {"gudmundson_ref_m", nullptr}};
}

Analysis analyze(json& eff) {
  Deployment dep = resolve_deployment(eff);
  GeometryCatalog catalog = GeometryCatalog::from_json_file(require_path(eff, "catalog"));

  std::optional<MeasurementEnsemble> ensemble;
  const bool have_file = !eff.at("measurements").is_null();
  const bool have_synth = !eff.at("synthetic").is_null();
  if (have_file == have_synth)
    throw ArgumentError("exactly one of \"measurements\" and \"synthetic\" is required");
  if (have_file) {
    ensemble = MeasurementEnsemble::from_csv_file(eff.at("measurements").get<std::string>());
  } else {
    const json synth = apply_defaults(synthetic_defaults(), eff.at("synthetic"));
    eff["synthetic"] = synth;  // echo resolved synthetic parameters
    CampaignSpec spec;
    spec.n_experiments = synth.at("experiments").get<int>();
    spec.n_frequencies = synth.at("frequencies").get<int>();
    spec.freq_noise_db2 = synth.at("freq_noise_db2").get<double>();
    spec.path_loss.intercept_dbm = synth.at("intercept_dbm").get<double>();
    spec.path_loss.exponent = synth.at("exponent").get<double>();
    spec.path_loss.sigma_db = synth.at("sigma_db").get<double>();
    spec.shadowing.space_constant_m = synth.at("delta_m").get<double>();
    spec.shadowing.total_var_db2 = spec.path_loss.sigma_db * spec.path_loss.sigma_db;
    spec.shadowing.shadow_var_db2 =
        synth.at("shadow_ratio").get<double>() * spec.shadowing.total_var_db2;
    spec.quad = quad_from(eff.at("quad"));
    spec.seed = synth.at("seed").get<std::uint64_t>();
    ensemble = synthesize_campaign(dep, spec);
    if (!eff.at("emit_measurements").is_null()) {
      auto out = open_output(eff.at("emit_measurements").get<std::string>());
      ensemble->write_csv(out);
    }
  }

  const AveragedPower averaged =
      frequency_average(*ensemble, eff.at("min_freq_samples").get<int>());
  PathLossFit fit = fit_path_loss(averaged, dep, eff.at("per_experiment").get<bool>(),
                                  eff.at("ref_distance_m").get<double>());
  std::vector<GeometryMeasurement> measured =
      measure_catalog_correlations(fit.fading_db, dep, catalog);
  return Analysis{std::move(dep), std::move(catalog), std::move(fit), std::move(measured)};
}

struct FittedModels {
  double delta_m = 0.0;
  double ratio = 0.0;
  bool fitted = false;
  std::optional<DeltaFit> delta_fit;
  std::vector<double> proposed;                 // aligned with measured entries
  std::vector<std::optional<double>> gudmundson;  // aligned; empty optional = n/a
  std::optional<GudmundsonFit> gud_fit;
};

FittedModels fit_models(const Analysis& a, json& eff) {
  FittedModels out;
  const QuadratureSpec quad = quad_from(eff.at("quad"));

  std::vector<const CatalogEntry*> valid_entries;
  std::vector<double> valid_rho;
  std::vector<double> weights;
  for (const GeometryMeasurement& gm : a.measured) {
    if (!gm.valid) continue;
    valid_entries.push_back(a.catalog.find(gm.geometry_id));
    valid_rho.push_back(gm.measured_rho);
    weights.push_back(static_cast<double>(gm.n));
  }
  if (!eff.at("weighted_fit").get<bool>()) weights.clear();

  if (!eff.at("delta_m").is_null() && !eff.at("shadow_ratio").is_null()) {
    out.delta_m = eff.at("delta_m").get<double>();
    out.ratio = eff.at("shadow_ratio").get<double>();
  } else {
    const DeltaFit fit = fit_space_constant(valid_entries, valid_rho, quad,
                                            grid_from(eff.at("delta_grid")), weights);
    out.delta_m = fit.delta_star_m;
    out.ratio = fit.ratio;
    out.fitted = true;
    out.delta_fit = fit;
  }

  // Proposed model predictions for every catalog geometry.
  for (const GeometryMeasurement& gm : a.measured) {
    const CatalogEntry* e = a.catalog.find(gm.geometry_id);
    const double rho_x =
        pair_shadowing_correlation(out.delta_m, e->link_a, e->link_b, quad);
    out.proposed.push_back(out.ratio * rho_x);
  }

  // Gudmundson baseline where a common node exists.
  const double ref = eff.at("gudmundson_ref_m").is_null()
                         ? a.dep.min_link_distance()
                         : eff.at("gudmundson_ref_m").get<double>();
  eff["gudmundson_ref_m"] = ref;
  std::vector<GudmundsonObservation> obs;
  for (std::size_t i = 0; i < a.measured.size(); ++i) {
    const GeometryMeasurement& gm = a.measured[i];
    if (gm.valid && gm.shares_node && a.catalog.entries()[i].report) {
      obs.push_back({gm.geometry_id, gm.measured_rho, gm.free_endpoint_distance_m});
    }
  }
  try {
    out.gud_fit = fit_gudmundson(obs, ref);
  } catch (const Error&) {
    out.gud_fit.reset();
  }
  for (const GeometryMeasurement& gm : a.measured) {
    if (gm.shares_node && out.gud_fit.has_value()) {
      out.gudmundson.emplace_back(
          gudmundson_prediction(out.gud_fit->params, gm.free_endpoint_distance_m));
    } else {
      out.gudmundson.emplace_back(std::nullopt);
    }
  }
  return out;
}

}  // namespace

void run_corr_table(const json& config) {
  json defaults = analysis_defaults();
  defaults["output"] = nullptr;
  json eff = apply_defaults(defaults, config);
  const std::string out_path = require_path(eff, "output");

  Analysis a = analyze(eff);
  const FittedModels models = fit_models(a, eff);
  if (models.fitted) {
    eff["delta_m"] = models.delta_m;
    eff["shadow_ratio"] = models.ratio;
  }

  auto out = open_output(out_path);
  write_header(out, eff);
  out << "geometry_id,pair_count,n,measured_rho,p_value,stars,proposed_rho,gudmundson_rho\n";
  for (std::size_t i = 0; i < a.measured.size(); ++i) {
    if (!a.catalog.entries()[i].report) continue;
    const GeometryMeasurement& gm = a.measured[i];
    out << gm.geometry_id << ',' << gm.pair_count << ',' << gm.n << ',';
    if (gm.valid) {
      out << fmt(gm.measured_rho) << ',' << fmt(gm.p_value) << ',' << stars(gm.p_value);
    } else {
      out << "n/a,n/a,";
    }
    out << ',' << fmt(models.proposed[i]) << ',';
    if (models.gudmundson[i].has_value()) {
      out << fmt(*models.gudmundson[i]);
    } else {
      out << "n/a";
    }
    out << '\n';
  }
}

void run_fit(const json& config) {
  json defaults = analysis_defaults();
  defaults["output"] = nullptr;
  json eff = apply_defaults(defaults, config);
  const std::string out_path = require_path(eff, "output");

  Analysis a = analyze(eff);
  const QuadratureSpec quad = quad_from(eff.at("quad"));

  std::vector<const CatalogEntry*> valid_entries;
  std::vector<double> valid_rho;
  std::vector<double> weights;
  std::vector<std::string> valid_ids;
  for (const GeometryMeasurement& gm : a.measured) {
    if (!gm.valid) continue;
    valid_entries.push_back(a.catalog.find(gm.geometry_id));
    valid_rho.push_back(gm.measured_rho);
    weights.push_back(static_cast<double>(gm.n));
    valid_ids.push_back(gm.geometry_id);
  }
  if (!eff.at("weighted_fit").get<bool>()) weights.clear();
  const DeltaFit fit = fit_space_constant(valid_entries, valid_rho, quad,
                                          grid_from(eff.at("delta_grid")), weights);

  json result;
  result["version"] = std::string(kToolName) + " " + kToolVersion;
  result["config"] = eff;
  json pl;
  pl["pooled"] = a.fit.pooled;
  pl["intercept_dbm"] = a.fit.intercept_dbm;
  pl["exponent"] = a.fit.exponent;
  pl["sigma2_db2"] = a.fit.sigma2_db2;
  json per = json::array();
  for (const auto& pe : a.fit.per_experiment) {
    per.push_back(json{{"experiment", pe.experiment},
                       {"intercept_dbm", pe.intercept_dbm},
                       {"exponent", pe.exponent},
                       {"sigma2_db2", pe.sigma2_db2},
                       {"n_links", pe.n_links}});
  }
  pl["per_experiment"] = std::move(per);
  result["path_loss"] = std::move(pl);

  json df;
  df["delta_star_m"] = fit.delta_star_m;
  df["ratio"] = fit.ratio;
  df["ratio_through_origin"] = fit.ratio_through_origin;
  df["intercept"] = fit.intercept;
  json curve = json::array();
  for (const DeltaFitPoint& pt : fit.curve) {
    curve.push_back(json{{"delta_m", pt.delta_m},
                         {"rho_c", pt.rho_c},
                         {"slope", pt.slope},
                         {"intercept", pt.intercept},
                         {"slope_through_origin", pt.slope_through_origin}});
  }
  df["curve"] = std::move(curve);
  result["delta_fit"] = std::move(df);

  json geoms = json::array();
  for (std::size_t i = 0; i < valid_ids.size(); ++i) {
    geoms.push_back(json{{"id", valid_ids[i]},
                         {"measured_rho", valid_rho[i]},
                         {"model_rho_at_star", fit.model_rho_at_star[i]}});
  }
  result["geometries"] = std::move(geoms);

  auto out = open_output(out_path);
  out << result.dump(2) << '\n';
}

void run_simulate(const json& config) {
  json defaults{{"deployment", nullptr},
                {"grid", grid_defaults()},
                {"delta_m", 0.21},
                {"shadow_ratio", 0.29},
                {"sigma_db", 5.0},
                {"intercept_dbm", -40.0},
                {"exponent", 3.0},
                {"ref_distance_m", 1.0},
                {"threshold_dbm", -75.0},
                {"rho_mode", "total"},
                {"n_samples", 1000},
                {"seed", 12345},
                {"quad", quad_defaults()},
                {"output", nullptr},
                {"covariance_output", nullptr}};
  json eff = apply_defaults(defaults, config);
  const std::string out_path = require_path(eff, "output");

  const int n_samples = eff.at("n_samples").get<int>();
  if (n_samples < 1) throw ArgumentError("n_samples must be >= 1");
  const Deployment dep = resolve_deployment(eff);
  PathLossParams pl;
  pl.intercept_dbm = eff.at("intercept_dbm").get<double>();
  pl.exponent = eff.at("exponent").get<double>();
  pl.ref_distance_m = eff.at("ref_distance_m").get<double>();
  pl.sigma_db = eff.at("sigma_db").get<double>();
  pl.threshold_dbm = eff.at("threshold_dbm").get<double>();
  pl.validate();
  ShadowingParams sp;
  sp.space_constant_m = eff.at("delta_m").get<double>();
  sp.total_var_db2 = pl.sigma_db * pl.sigma_db;
  sp.shadow_var_db2 = eff.at("shadow_ratio").get<double>() * sp.total_var_db2;
  sp.validate();
  const QuadratureSpec quad = quad_from(eff.at("quad"));
  const std::uint64_t seed = eff.at("seed").get<std::uint64_t>();

  const JointFadingModel model =
      build_joint_fading(dep, sp, quad, mode_from(eff.at("rho_mode").get<std::string>()));
  const auto samples = sample_fading(model, n_samples, seed);

  auto out = open_output(out_path);
  write_header(out, eff);
  write_realizations_csv(out, dep, pl, model, samples, seed);

  if (!eff.at("covariance_output").is_null()) {
    auto cov_out = open_output(eff.at("covariance_output").get<std::string>());
    write_header(cov_out, eff);
    write_covariance_csv(cov_out, model.links, model.sigma);
  }
}

void run_oracle(const json& config) {
  json defaults{{"deployment", nullptr},
                {"grid", grid_defaults()},
                {"catalog", nullptr},
                {"delta_m", 0.21},
                {"shadow_ratio", 0.29},
                {"sigma_db", 5.0},
                {"n_realizations", 2000},
                {"h_m", nullptr},
                {"seed", 12345},
                {"quad", quad_defaults()},
                {"output", nullptr},
                {"field_dump", nullptr}};
  json eff = apply_defaults(defaults, config);
  const std::string out_path = require_path(eff, "output");

  const Deployment dep = resolve_deployment(eff);
  const GeometryCatalog catalog = GeometryCatalog::from_json_file(require_path(eff, "catalog"));
  ShadowingParams sp;
  sp.space_constant_m = eff.at("delta_m").get<double>();
  sp.total_var_db2 = eff.at("sigma_db").get<double>() * eff.at("sigma_db").get<double>();
  sp.shadow_var_db2 = eff.at("shadow_ratio").get<double>() * sp.total_var_db2;
  sp.validate();
  const QuadratureSpec quad = quad_from(eff.at("quad"));
  const int n_real = eff.at("n_realizations").get<int>();
  const std::uint64_t seed = eff.at("seed").get<std::uint64_t>();
  const double h = eff.at("h_m").is_null() ? sp.space_constant_m / 5.0
                                           : eff.at("h_m").get<double>();
  eff["h_m"] = h;

  // Place each catalog geometry on the deployment (first match) so the
  // empirical and analytic correlations cover the same segments.
  std::vector<std::string> ids;
  std::vector<std::pair<Segment, Segment>> placed;
  std::vector<double> analytic;
  for (const CatalogEntry& e : catalog.entries()) {
    const auto pairs = enumerate_similar_pairs(dep, catalog.geometry(e));
    if (pairs.empty()) continue;
    placed.emplace_back(dep.segment(pairs.front().first),
                        dep.segment(pairs.front().second));
    ids.push_back(e.id);
    analytic.push_back(
        pair_shadowing_correlation(sp.space_constant_m, e.link_a, e.link_b, quad));
  }
  if (placed.empty()) throw DataError("no catalog geometry matches the deployment");

  // Resolution guard before any sampling.
  {
    FieldGrid probe{{0.0, 0.0}, h, 2, 2};
    check_field_resolution(probe, sp);
  }
  const auto empirical = empirical_pair_correlations(sp, placed, n_real, seed, h);

  auto out = open_output(out_path);
  write_header(out, eff);
  out << "geometry_id,analytic_rho,empirical_rho,stderr,n,abs_z\n";
  for (std::size_t i = 0; i < placed.size(); ++i) {
    const double z = std::abs(empirical[i].rho - analytic[i]) /
                     (empirical[i].stderr_est > 0.0 ? empirical[i].stderr_est : 1.0);
    out << ids[i] << ',' << fmt(analytic[i]) << ',' << fmt(empirical[i].rho) << ','
        << fmt(empirical[i].stderr_est) << ',' << empirical[i].n << ',' << fmt(z) << '\n';
  }

  if (!eff.at("field_dump").is_null()) {
    const std::string base = eff.at("field_dump").get<std::string>();
    double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
    for (const auto& [sa, sb] : placed) {
      for (const Point& p : {sa.a, sa.b, sb.a, sb.b}) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
      }
    }
    const double margin = 5.0 * sp.space_constant_m;
    FieldGrid grid;
    grid.origin = {min_x - margin, min_y - margin};
    grid.h = h;
    grid.nx = static_cast<int>(std::ceil((max_x - min_x + 2 * margin) / h)) + 1;
    grid.ny = static_cast<int>(std::ceil((max_y - min_y + 2 * margin) / h)) + 1;
    FieldSampler sampler(grid, sp);
    const FieldRealization field = sampler.sample(seed, 0);
    write_field_binary(base + ".f64", field);
    auto side = open_output(base + ".json");
    side << field_sidecar_json(field) << '\n';
  }
}

void run_failure_sweep(const json& config) {
  json defaults{{"n_nodes", 3},
                {"spacing_m", 1.22},
                {"exponent", 3.0},
                {"sigma_db", 5.0},
                {"delta_m", 0.21},
                {"shadow_ratio", 0.29},
                {"rho_mode", "shadowing"},
                {"beta_grid", json{{"min", 0.0}, {"max", 2.5}, {"step", 0.25}}},
                {"mc_samples", 100000},
                {"seed", 12345},
                {"quad", quad_defaults()},
                {"output", nullptr}};
  json eff = apply_defaults(defaults, config);
  const std::string out_path = require_path(eff, "output");

  ChainSpec spec;
  spec.n_nodes = eff.at("n_nodes").get<int>();
  spec.spacing_m = eff.at("spacing_m").get<double>();
  spec.path_loss.exponent = eff.at("exponent").get<double>();
  spec.path_loss.sigma_db = eff.at("sigma_db").get<double>();
  spec.shadowing.space_constant_m = eff.at("delta_m").get<double>();
  spec.shadowing.total_var_db2 = spec.path_loss.sigma_db * spec.path_loss.sigma_db;
  spec.shadowing.shadow_var_db2 =
      eff.at("shadow_ratio").get<double>() * spec.shadowing.total_var_db2;
  spec.mode = mode_from(eff.at("rho_mode").get<std::string>());
  spec.quad = quad_from(eff.at("quad"));
  const std::uint64_t seed = eff.at("seed").get<std::uint64_t>();

  const auto rows = failure_sweep(spec, grid_from(eff.at("beta_grid")),
                                  eff.at("mc_samples").get<int>(), seed);

  auto out = open_output(out_path);
  write_header(out, eff);
  out << "beta_bar,p_iid,p_corr,pct_increase,mc_stderr,seed,unstable\n";
  for (const SweepRow& r : rows) {
    out << fmt(r.beta_bar) << ',' << fmt(r.p_iid) << ',' << fmt(r.p_corr) << ','
        << fmt(r.pct_increase) << ',' << (r.from_mc ? fmt(r.mc_stderr) : std::string("n/a"))
        << ',' << seed << ',' << (r.unstable ? 1 : 0) << '\n';
  }
}

void run_gudmundson_compare(const json& config) {
  json defaults = analysis_defaults();
  defaults["output"] = nullptr;
  json eff = apply_defaults(defaults, config);
  const std::string out_path = require_path(eff, "output");

  Analysis a = analyze(eff);
  const FittedModels models = fit_models(a, eff);
  if (models.fitted) {
    eff["delta_m"] = models.delta_m;
    eff["shadow_ratio"] = models.ratio;
  }

  std::vector<double> measured, proposed;
  std::vector<std::optional<double>> gud;
  for (std::size_t i = 0; i < a.measured.size(); ++i) {
    if (!a.measured[i].valid || !a.catalog.entries()[i].report) continue;
    measured.push_back(a.measured[i].measured_rho);
    proposed.push_back(models.proposed[i]);
    gud.push_back(models.gudmundson[i]);
  }
  const ModelAgreement agreement = compare_models(measured, proposed, gud);

  auto out = open_output(out_path);
  write_header(out, eff);
  out << "model,agreement_with_measured,n_geometries\n";
  out << "proposed," << fmt(agreement.proposed) << ',' << agreement.n_proposed << '\n';
  out << "gudmundson," << fmt(agreement.gudmundson) << ',' << agreement.n_gudmundson
      << '\n';
}

void run_catalog(const json& config) {
  json defaults{{"deployment", nullptr},
                {"grid", grid_defaults()},
                {"max_entries", 28},
                {"max_link_length_m", 3.7},
                {"tolerance_m", 1e-3},
                {"output", nullptr}};
  json eff = apply_defaults(defaults, config);
  const std::string out_path = require_path(eff, "output");

  const Deployment dep = resolve_deployment(eff);
  const GeometryCatalog catalog =
      build_catalog(dep, eff.at("max_entries").get<int>(),
                    eff.at("max_link_length_m").get<double>(),
                    eff.at("tolerance_m").get<double>());
  auto out = open_output(out_path);
  out << catalog.to_json_text() << '\n';
}

void run_command(const std::string& name, const std::string& config_json) {
  json config;
  try {
    config = config_json.empty() ? json::object() : json::parse(config_json);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("config JSON parse error: ") + e.what());
  }
  if (name == "corr-table") return run_corr_table(config);
  if (name == "fit") return run_fit(config);
  if (name == "simulate") return run_simulate(config);
  if (name == "oracle") return run_oracle(config);
  if (name == "failure-sweep") return run_failure_sweep(config);
  if (name == "gudmundson-compare") return run_gudmundson_compare(config);
  if (name == "catalog") return run_catalog(config);
  throw ArgumentError("unknown command: " + name);
}

}  // namespace corrshadow
