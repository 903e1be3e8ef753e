/* Copyright (c) 2026 The corrshadow Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the corrshadow shared library: correlated link shadowing
 * for multi-hop wireless networks.  Handles are opaque; every function
 * returns a status code and reports details through corrshadow_last_error().
 * All distances are meters, powers dBm, variances dB^2.
 */

#ifndef CORRSHADOW_H
#define CORRSHADOW_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum corrshadow_status {
  CORRSHADOW_OK = 0,
  CORRSHADOW_ERR_ARGUMENT = 2, /* bad arguments or configuration */
  CORRSHADOW_ERR_DATA = 3,     /* unusable input data */
  CORRSHADOW_ERR_NUMERIC = 4,  /* numerical failure */
  CORRSHADOW_ERR_INTERNAL = 5
} corrshadow_status;

/* Library version string, e.g. "corrshadow 0.1.0". */
const char* corrshadow_version(void);

/* Message for the most recent error on this thread; empty string if none. */
const char* corrshadow_last_error(void);

/* ---- deployments ------------------------------------------------------ */

typedef struct corrshadow_deployment corrshadow_deployment;

corrshadow_status corrshadow_deployment_load(const char* json_path,
                                             corrshadow_deployment** out);
corrshadow_status corrshadow_deployment_grid(int nx, int ny, double spacing_m,
                                             corrshadow_deployment** out);
void corrshadow_deployment_free(corrshadow_deployment* dep);
corrshadow_status corrshadow_deployment_node_count(const corrshadow_deployment* dep,
                                                   int* out);
corrshadow_status corrshadow_deployment_link_count(const corrshadow_deployment* dep,
                                                   int* out);
corrshadow_status corrshadow_link_distance(const corrshadow_deployment* dep, int i,
                                           int j, double* out_m);

/* ---- single-link model ------------------------------------------------ */

/* Mean received power at a distance under log-distance path loss. */
corrshadow_status corrshadow_mean_power(double intercept_dbm, double exponent,
                                        double ref_distance_m, double distance_m,
                                        double* out_dbm);

/* Variance of link shadowing at a link length (closed form). */
corrshadow_status corrshadow_link_variance(double space_constant_m,
                                           double shadow_var_db2, double distance_m,
                                           double* out_db2);

/* ---- link pairs -------------------------------------------------------- */

/* Correlation of shadowing on two links; segments are {ax, ay, bx, by}. */
corrshadow_status corrshadow_shadowing_correlation(double space_constant_m,
                                                   const double seg_a[4],
                                                   const double seg_b[4],
                                                   double* out_rho);

/* Correlation of total fading from a shadowing correlation. */
corrshadow_status corrshadow_total_fading_correlation(double shadow_var_db2,
                                                      double total_var_db2,
                                                      double rho_shadowing,
                                                      int same_link, double* out_rho);

/* Exponential-in-distance baseline for two links from a common node to
 * points xi and xj. */
corrshadow_status corrshadow_gudmundson_correlation(double corr_at_ref,
                                                    double ref_distance_m,
                                                    const double xi[2],
                                                    const double xj[2],
                                                    double* out_rho);

/* ---- relay path failure ------------------------------------------------ */

/* Margin penalty of the double-length direct link. */
corrshadow_status corrshadow_kappa(double exponent, double sigma_db, double* out);

/* Relay path failure with independent link fading. */
corrshadow_status corrshadow_path_failure_iid(double beta_bar, double kappa,
                                              double* out);

/* Relay path failure when each hop's margin is correlated with the direct
 * link's margin by rho. */
corrshadow_status corrshadow_path_failure_correlated(double beta_bar, double kappa,
                                                     double rho, double* out);

/* ---- command pipelines ------------------------------------------------- */

/* Each pipeline takes a JSON configuration object (text) and writes its
 * output files; see the project README for the per-command schema.  The
 * effective configuration, tool version and seed are echoed into every
 * output, and identical configurations reproduce files byte for byte. */
corrshadow_status corrshadow_run_corr_table(const char* config_json);
corrshadow_status corrshadow_run_fit(const char* config_json);
corrshadow_status corrshadow_run_simulate(const char* config_json);
corrshadow_status corrshadow_run_oracle(const char* config_json);
corrshadow_status corrshadow_run_failure_sweep(const char* config_json);
corrshadow_status corrshadow_run_gudmundson_compare(const char* config_json);
corrshadow_status corrshadow_run_catalog(const char* config_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CORRSHADOW_H */
