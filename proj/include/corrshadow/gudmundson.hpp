// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "corrshadow/geometry.hpp"
#include "corrshadow/params.hpp"

namespace corrshadow {

/// Exponential-in-distance shadowing correlation for two links from a common
/// node to xi and xj.  By construction it depends only on |xi - xj|, not on
/// where the common node sits.
double gudmundson_correlation(const GudmundsonParams& g, Point xi, Point xj);

/// As predicted for a report row: the fitted log-domain intercept is folded
/// back in as a multiplicative amplitude.
double gudmundson_prediction(const GudmundsonParams& g, double distance_m);

struct GudmundsonObservation {
  std::string id;
  double rho = 0.0;       // measured correlation
  double distance_m = 0.0;  // separation of the two non-shared endpoints
};

struct GudmundsonFit {
  GudmundsonParams params;
  std::vector<std::string> excluded;  // non-positive correlations, dropped
  int n_used = 0;
};

/// Linear regression of log(rho) on endpoint separation.  Observations with
/// rho <= 0 are excluded (the log is undefined) and reported; at least two
/// usable observations are required.
GudmundsonFit fit_gudmundson(const std::vector<GudmundsonObservation>& observations,
                             double ref_distance_m);

struct ModelAgreement {
  double proposed = 0.0;
  double gudmundson = 0.0;
  int n_proposed = 0;
  int n_gudmundson = 0;
};

/// Pearson correlation of the measured vector against each model's
/// predictions, each over the geometries where that model applies
/// (missing Gudmundson entries are skipped).
ModelAgreement compare_models(const std::vector<double>& measured,
                              const std::vector<double>& proposed,
                              const std::vector<std::optional<double>>& gudmundson);

}  // namespace corrshadow
