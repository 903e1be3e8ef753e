// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "corrshadow/catalog.hpp"
#include "corrshadow/geometry.hpp"
#include "corrshadow/params.hpp"

namespace corrshadow {

struct MeasurementRecord {
  int experiment = 0;
  int tx = 0;
  int rx = 0;
  int freq_index = 0;
  double rss_dbm = 0.0;
  double tx_power_dbm = 0.0;
  double battery_mv = 0.0;
};

/// Raw per-frequency RSS records across a set of deployments of the same
/// node layout.
class MeasurementEnsemble {
 public:
  explicit MeasurementEnsemble(std::vector<MeasurementRecord> records);

  static MeasurementEnsemble from_csv_file(const std::string& path);
  static MeasurementEnsemble from_csv(std::istream& in);
  void write_csv(std::ostream& out) const;

  const std::vector<MeasurementRecord>& records() const { return records_; }
  std::vector<int> experiment_ids() const;
  int frequency_count() const;

 private:
  std::vector<MeasurementRecord> records_;
};

/// Frequency-averaged received power per (experiment, link).  Links with
/// fewer than min_freq_samples frequency records in an experiment are
/// dropped and listed.
struct AveragedPower {
  std::map<std::pair<int, Link>, double> mean_dbm;
  std::vector<std::string> dropped;
};

AveragedPower frequency_average(const MeasurementEnsemble& ensemble,
                                int min_freq_samples = 3);

struct PathLossFit {
  struct PerExperiment {
    int experiment = 0;
    double intercept_dbm = 0.0;
    double exponent = 0.0;
    double sigma2_db2 = 0.0;  // unbiased residual variance
    int n_links = 0;
  };
  std::vector<PerExperiment> per_experiment;
  double intercept_dbm = 0.0;  // pooled fit, or mean across experiments
  double exponent = 0.0;
  double sigma2_db2 = 0.0;     // pooled unbiased residual variance
  bool pooled = false;
  /// Total fading samples: fitted mean power minus the measurement.
  std::map<std::pair<int, Link>, double> fading_db;
};

/// Least squares of averaged power against 10*log10(d / ref).  The default
/// fits each experiment separately (intercept and exponent absorb the
/// per-deployment transmit level) and pools the residual variance.
PathLossFit fit_path_loss(const AveragedPower& averaged, const Deployment& dep,
                          bool per_experiment = true, double ref_distance_m = 1.0);

/// Pearson correlation of total fading stacked over the matched pairs and
/// all experiments.  Each experiment block is centered first, so per-
/// deployment calibration offsets cannot masquerade as correlation.
struct StackedCorrelation {
  double rho = 0.0;
  int n = 0;  // stacked sample count
};

StackedCorrelation pair_fading_correlation(
    const std::map<std::pair<int, Link>, double>& fading,
    const std::vector<SimilarPair>& pairs);

/// Two-sided p-value for the hypothesis of zero correlation, from the
/// Student-t statistic rho*sqrt(n-2)/sqrt(1-rho^2) with n-2 degrees of
/// freedom.
double correlation_p_value(double rho, int n);

/// Per-catalog-geometry measured correlation with significance.
struct GeometryMeasurement {
  std::string geometry_id;
  int pair_count = 0;  // matches in the deployment
  int n = 0;           // stacked samples
  double measured_rho = 0.0;
  double p_value = 1.0;
  bool valid = false;
  bool shares_node = false;
  double free_endpoint_distance_m = 0.0;  // defined when shares_node
};

std::vector<GeometryMeasurement> measure_catalog_correlations(
    const std::map<std::pair<int, Link>, double>& fading, const Deployment& dep,
    const GeometryCatalog& catalog);

/// One point of the space-constant sweep: the regression of measured
/// correlations on model correlations evaluated at this delta.
struct DeltaFitPoint {
  double delta_m = 0.0;
  double rho_c = 0.0;   // correlation between model and measurement
  double slope = 0.0;   // free-intercept slope: the shadowing ratio estimate
  double intercept = 0.0;
  double slope_through_origin = 0.0;
};

struct DeltaFit {
  std::vector<DeltaFitPoint> curve;
  double delta_star_m = 0.0;
  double ratio = 0.0;                // slope at delta_star
  double ratio_through_origin = 0.0;
  double intercept = 0.0;
  /// Model shadowing correlations at delta_star, one per input geometry.
  std::vector<double> model_rho_at_star;
};

std::vector<double> default_delta_grid();  // 0.10 .. 0.40, step 0.01

/// Model shadowing correlations per (delta, geometry).  Depends only on the
/// geometries and the grid, so it can be computed once and reused across
/// many measurement sets.
using ModelCorrelationTable = std::vector<std::vector<double>>;
ModelCorrelationTable model_correlation_table(
    const std::vector<const CatalogEntry*>& geometries, const QuadratureSpec& spec,
    const std::vector<double>& delta_grid);

/// The delta sweep on a precomputed model table.
DeltaFit fit_space_constant_from_table(const ModelCorrelationTable& table,
                                       const std::vector<double>& measured_rho,
                                       const std::vector<double>& delta_grid,
                                       const std::vector<double>& weights = {});

/// Sweep delta over the grid, regress measured total fading correlations on
/// the model's shadowing correlations, and pick the delta with the highest
/// agreement.  `geometries` and `measured_rho` are aligned.  `weights`, when
/// non-empty, weight the regression and the agreement score; geometries
/// with more stacked samples get proportionally more say (pass the sample
/// counts for inverse-variance weighting).
DeltaFit fit_space_constant(const std::vector<const CatalogEntry*>& geometries,
                            const std::vector<double>& measured_rho,
                            const QuadratureSpec& spec,
                            const std::vector<double>& delta_grid,
                            const std::vector<double>& weights = {});

}  // namespace corrshadow
