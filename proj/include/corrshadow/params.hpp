// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

#include "corrshadow/errors.hpp"

namespace corrshadow {

/// Log-distance path loss: mean received power intercept_dbm at the
/// reference distance, decaying with exponent, plus the total fading spread
/// and the receive threshold used for connectivity.
struct PathLossParams {
  double intercept_dbm = -40.0;   // mean power at the reference distance
  double exponent = 2.3;          // path loss exponent
  double ref_distance_m = 1.0;    // reference distance
  double sigma_db = 5.0;          // total fading std dev (dB)
  double threshold_dbm = -75.0;   // receive threshold

  void validate() const {
    if (!(exponent > 0.0)) throw ArgumentError("path loss exponent must be > 0");
    if (!(ref_distance_m > 0.0)) throw ArgumentError("reference distance must be > 0");
    if (!(sigma_db > 0.0)) throw ArgumentError("sigma_db must be > 0");
    if (!std::isfinite(intercept_dbm) || !std::isfinite(threshold_dbm))
      throw ArgumentError("path loss parameters must be finite");
  }
};

/// Mean received power (dBm) at distance d.
inline double mean_power_dbm(const PathLossParams& p, double distance_m) {
  if (!(distance_m > 0.0)) throw ArgumentError("distance must be > 0");
  return p.intercept_dbm - 10.0 * p.exponent * std::log10(distance_m / p.ref_distance_m);
}

/// Spatial loss field parameters: the space constant of the exponential
/// covariance, the shadowing variance it carries, and the total fading
/// variance (shadowing plus the independent non-shadowing part).
///
/// shadow_var_db2 == 0 is allowed and reduces every joint model to the
/// i.i.d. log-normal case.
struct ShadowingParams {
  double space_constant_m = 0.21;   // kernel decay length
  double shadow_var_db2 = 7.25;     // variance of shadowing (dB^2)
  double total_var_db2 = 25.0;      // variance of total fading (dB^2)

  double non_shadow_var_db2() const { return total_var_db2 - shadow_var_db2; }
  double shadow_ratio() const { return shadow_var_db2 / total_var_db2; }
  double sigma_db() const { return std::sqrt(total_var_db2); }

  void validate() const {
    if (!(space_constant_m > 0.0)) throw ArgumentError("space constant must be > 0");
    if (!(shadow_var_db2 >= 0.0)) throw ArgumentError("shadowing variance must be >= 0");
    if (!(total_var_db2 > 0.0)) throw ArgumentError("total fading variance must be > 0");
    if (shadow_var_db2 > total_var_db2)
      throw ArgumentError("shadowing variance cannot exceed total fading variance");
  }
};

/// Controls for the adaptive segment-pair quadrature.
struct QuadratureSpec {
  int points = 16;            // Gauss-Legendre points per axis per panel
  int max_subdivisions = 12;  // dyadic refinement depth limit
  double rel_tol = 1e-6;

  void validate() const {
    if (points < 2) throw ArgumentError("quadrature needs at least 2 points per panel");
    if (max_subdivisions < 0) throw ArgumentError("max_subdivisions must be >= 0");
    if (!(rel_tol > 0.0)) throw ArgumentError("rel_tol must be > 0");
  }
};

/// Exponential-in-distance correlation baseline for link pairs sharing a
/// node: corr_at_ref at the reference distance, decaying as a power of it.
/// `amplitude` is the exponential of the fitted log-domain intercept; the
/// normalized correlation itself does not include it.
struct GudmundsonParams {
  double corr_at_ref = 0.5;     // correlation at the reference distance
  double ref_distance_m = 1.0;  // reference distance
  double amplitude = 1.0;       // exp(intercept) of the log-domain fit

  void validate() const {
    if (!(corr_at_ref > 0.0 && corr_at_ref < 1.0))
      throw ArgumentError("corr_at_ref must lie in (0, 1)");
    if (!(ref_distance_m > 0.0)) throw ArgumentError("reference distance must be > 0");
    if (!(amplitude > 0.0)) throw ArgumentError("amplitude must be > 0");
  }
};

}  // namespace corrshadow
