// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#include "corrshadow/gudmundson.hpp"

#include <cmath>

namespace corrshadow {

namespace {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sx += x[static_cast<std::size_t>(i)];
    sy += y[static_cast<std::size_t>(i)];
    sxx += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    syy += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    sxy += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  if (!(vx > 0.0) || !(vy > 0.0))
    throw DataError("model agreement undefined: a vector has zero variance");
  return (sxy - sx * sy / n) / std::sqrt(vx * vy);
}

}  // namespace

double gudmundson_correlation(const GudmundsonParams& g, Point xi, Point xj) {
  g.validate();
  return std::pow(g.corr_at_ref, distance(xi, xj) / g.ref_distance_m);
}

double gudmundson_prediction(const GudmundsonParams& g, double distance_m) {
  g.validate();
  if (!(distance_m >= 0.0)) throw ArgumentError("distance must be >= 0");
  return g.amplitude * std::pow(g.corr_at_ref, distance_m / g.ref_distance_m);
}

GudmundsonFit fit_gudmundson(const std::vector<GudmundsonObservation>& observations,
                             double ref_distance_m) {
  if (!(ref_distance_m > 0.0)) throw ArgumentError("reference distance must be > 0");
  GudmundsonFit fit;
  std::vector<double> x, y;
  for (const GudmundsonObservation& obs : observations) {
    if (obs.rho <= 0.0) {
      fit.excluded.push_back(obs.id);
      continue;
    }
    x.push_back(obs.distance_m);
    y.push_back(std::log(obs.rho));
  }
  if (x.size() < 2)
    throw DataError("Gudmundson fit needs at least 2 positive correlations");

  const int n = static_cast<int>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sx += x[static_cast<std::size_t>(i)];
    sy += y[static_cast<std::size_t>(i)];
    sxx += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    sxy += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
  }
  const double vx = sxx - sx * sx / n;
  if (!(vx > 0.0))
    throw DataError("Gudmundson fit is rank deficient: all separations equal");
  const double slope = (sxy - sx * sy / n) / vx;     // log(eps_D) / D
  const double intercept = (sy - slope * sx) / n;
  if (!(slope < 0.0))
    throw DataError("Gudmundson fit failed: correlation does not decay with distance");

  fit.params.ref_distance_m = ref_distance_m;
  fit.params.corr_at_ref = std::exp(slope * ref_distance_m);
  fit.params.amplitude = std::exp(intercept);
  fit.params.validate();
  fit.n_used = n;
  return fit;
}

ModelAgreement compare_models(const std::vector<double>& measured,
                              const std::vector<double>& proposed,
                              const std::vector<std::optional<double>>& gudmundson) {
  if (measured.size() != proposed.size() || measured.size() != gudmundson.size())
    throw ArgumentError("model comparison vectors must align");
  ModelAgreement out;
  out.proposed = pearson(measured, proposed);
  out.n_proposed = static_cast<int>(measured.size());
  std::vector<double> mg, gg;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    if (gudmundson[i].has_value()) {
      mg.push_back(measured[i]);
      gg.push_back(*gudmundson[i]);
    }
  }
  if (mg.size() >= 3) {
    out.gudmundson = pearson(mg, gg);
    out.n_gudmundson = static_cast<int>(mg.size());
  }
  return out;
}

}  // namespace corrshadow
