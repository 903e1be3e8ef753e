// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#include "corrshadow.h"

#include <string>

#include "corrshadow/connectivity.hpp"
#include "corrshadow/covariance.hpp"
#include "corrshadow/geometry.hpp"
#include "corrshadow/gudmundson.hpp"
#include "corrshadow/pipelines.hpp"
#include "corrshadow/version.hpp"

namespace {

thread_local std::string g_last_error;

corrshadow_status status_of(const corrshadow::Error& e) {
  switch (e.kind()) {
    case corrshadow::ErrorKind::Argument: return CORRSHADOW_ERR_ARGUMENT;
    case corrshadow::ErrorKind::Data: return CORRSHADOW_ERR_DATA;
    case corrshadow::ErrorKind::Numeric: return CORRSHADOW_ERR_NUMERIC;
    case corrshadow::ErrorKind::Resource: return CORRSHADOW_ERR_NUMERIC;
  }
  return CORRSHADOW_ERR_INTERNAL;
}

template <typename Fn>
corrshadow_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return CORRSHADOW_OK;
  } catch (const corrshadow::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CORRSHADOW_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CORRSHADOW_ERR_INTERNAL;
  }
}

corrshadow::Segment segment_of(const double seg[4]) {
  if (seg == nullptr) throw corrshadow::ArgumentError("segment pointer is null");
  return corrshadow::Segment{{seg[0], seg[1]}, {seg[2], seg[3]}};
}

template <typename T>
void require_out(T* out) {
  if (out == nullptr) throw corrshadow::ArgumentError("output pointer is null");
}

const corrshadow::Deployment* unwrap(const corrshadow_deployment* dep) {
  if (dep == nullptr) throw corrshadow::ArgumentError("deployment handle is null");
  return reinterpret_cast<const corrshadow::Deployment*>(dep);
}

}  // namespace

extern "C" {

const char* corrshadow_version(void) {
  static const std::string v = std::string(corrshadow::kToolName) + " " +
                               corrshadow::kToolVersion;
  return v.c_str();
}

const char* corrshadow_last_error(void) { return g_last_error.c_str(); }

corrshadow_status corrshadow_deployment_load(const char* json_path,
                                             corrshadow_deployment** out) {
  return guarded([&] {
    require_out(out);
    if (json_path == nullptr) throw corrshadow::ArgumentError("path is null");
    auto* dep = new corrshadow::Deployment(
        corrshadow::Deployment::from_json_file(json_path));
    *out = reinterpret_cast<corrshadow_deployment*>(dep);
  });
}

corrshadow_status corrshadow_deployment_grid(int nx, int ny, double spacing_m,
                                             corrshadow_deployment** out) {
  return guarded([&] {
    require_out(out);
    auto* dep =
        new corrshadow::Deployment(corrshadow::Deployment::grid(nx, ny, spacing_m));
    *out = reinterpret_cast<corrshadow_deployment*>(dep);
  });
}

void corrshadow_deployment_free(corrshadow_deployment* dep) {
  delete reinterpret_cast<corrshadow::Deployment*>(dep);
}

corrshadow_status corrshadow_deployment_node_count(const corrshadow_deployment* dep,
                                                   int* out) {
  return guarded([&] {
    require_out(out);
    *out = unwrap(dep)->node_count();
  });
}

corrshadow_status corrshadow_deployment_link_count(const corrshadow_deployment* dep,
                                                   int* out) {
  return guarded([&] {
    require_out(out);
    *out = static_cast<int>(corrshadow::enumerate_links(*unwrap(dep)).size());
  });
}

corrshadow_status corrshadow_link_distance(const corrshadow_deployment* dep, int i,
                                           int j, double* out_m) {
  return guarded([&] {
    require_out(out_m);
    *out_m = unwrap(dep)->link_distance(corrshadow::Link::make(i, j));
  });
}

corrshadow_status corrshadow_mean_power(double intercept_dbm, double exponent,
                                        double ref_distance_m, double distance_m,
                                        double* out_dbm) {
  return guarded([&] {
    require_out(out_dbm);
    corrshadow::PathLossParams p;
    p.intercept_dbm = intercept_dbm;
    p.exponent = exponent;
    p.ref_distance_m = ref_distance_m;
    p.validate();
    *out_dbm = corrshadow::mean_power_dbm(p, distance_m);
  });
}

corrshadow_status corrshadow_link_variance(double space_constant_m,
                                           double shadow_var_db2, double distance_m,
                                           double* out_db2) {
  return guarded([&] {
    require_out(out_db2);
    corrshadow::ShadowingParams sp;
    sp.space_constant_m = space_constant_m;
    sp.shadow_var_db2 = shadow_var_db2;
    sp.total_var_db2 = shadow_var_db2 > 0.0 ? shadow_var_db2 : 1.0;
    *out_db2 = corrshadow::link_shadowing_variance(sp, distance_m);
  });
}

corrshadow_status corrshadow_shadowing_correlation(double space_constant_m,
                                                   const double seg_a[4],
                                                   const double seg_b[4],
                                                   double* out_rho) {
  return guarded([&] {
    require_out(out_rho);
    *out_rho = corrshadow::pair_shadowing_correlation(
        space_constant_m, segment_of(seg_a), segment_of(seg_b));
  });
}

corrshadow_status corrshadow_total_fading_correlation(double shadow_var_db2,
                                                      double total_var_db2,
                                                      double rho_shadowing,
                                                      int same_link, double* out_rho) {
  return guarded([&] {
    require_out(out_rho);
    corrshadow::ShadowingParams sp;
    sp.shadow_var_db2 = shadow_var_db2;
    sp.total_var_db2 = total_var_db2;
    *out_rho = corrshadow::total_fading_correlation(sp, rho_shadowing, same_link != 0);
  });
}

corrshadow_status corrshadow_gudmundson_correlation(double corr_at_ref,
                                                    double ref_distance_m,
                                                    const double xi[2],
                                                    const double xj[2],
                                                    double* out_rho) {
  return guarded([&] {
    require_out(out_rho);
    if (xi == nullptr || xj == nullptr)
      throw corrshadow::ArgumentError("point pointer is null");
    corrshadow::GudmundsonParams g;
    g.corr_at_ref = corr_at_ref;
    g.ref_distance_m = ref_distance_m;
    *out_rho = corrshadow::gudmundson_correlation(g, {xi[0], xi[1]}, {xj[0], xj[1]});
  });
}

corrshadow_status corrshadow_kappa(double exponent, double sigma_db, double* out) {
  return guarded([&] {
    require_out(out);
    *out = corrshadow::kappa_margin_penalty(exponent, sigma_db);
  });
}

corrshadow_status corrshadow_path_failure_iid(double beta_bar, double kappa,
                                              double* out) {
  return guarded([&] {
    require_out(out);
    *out = corrshadow::path_failure_iid(beta_bar, kappa);
  });
}

corrshadow_status corrshadow_path_failure_correlated(double beta_bar, double kappa,
                                                     double rho, double* out) {
  return guarded([&] {
    require_out(out);
    *out = corrshadow::path_failure_correlated({beta_bar, kappa, rho});
  });
}

#define CORRSHADOW_RUN_IMPL(suffix, name)                                 \
  corrshadow_status corrshadow_run_##suffix(const char* config_json) {    \
    return guarded([&] {                                                  \
      corrshadow::run_command(name, config_json ? config_json : "");      \
    });                                                                   \
  }

CORRSHADOW_RUN_IMPL(corr_table, "corr-table")
CORRSHADOW_RUN_IMPL(fit, "fit")
CORRSHADOW_RUN_IMPL(simulate, "simulate")
CORRSHADOW_RUN_IMPL(oracle, "oracle")
CORRSHADOW_RUN_IMPL(failure_sweep, "failure-sweep")
CORRSHADOW_RUN_IMPL(gudmundson_compare, "gudmundson-compare")
CORRSHADOW_RUN_IMPL(catalog, "catalog")

#undef CORRSHADOW_RUN_IMPL

}  // extern "C"
