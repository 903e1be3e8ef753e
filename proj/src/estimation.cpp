// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#include "corrshadow/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "corrshadow/covariance.hpp"

namespace corrshadow {

namespace {

struct Ols {
  double slope = 0.0;
  double intercept = 0.0;
  double pearson = 0.0;
  double rss = 0.0;
  double slope_through_origin = 0.0;
  int n = 0;
};

// Weighted least squares with a free intercept; empty weights mean equal
// weights.  pearson is the (weighted) correlation coefficient between x
// and y.
Ols ols_fit(const std::vector<double>& x, const std::vector<double>& y,
            const std::vector<double>& w = {}) {
  const int n = static_cast<int>(x.size());
  double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double wi = w.empty() ? 1.0 : w[static_cast<std::size_t>(i)];
    sw += wi;
    sx += wi * x[static_cast<std::size_t>(i)];
    sy += wi * y[static_cast<std::size_t>(i)];
    sxx += wi * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    syy += wi * y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    sxy += wi * x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
  }
  if (!(sw > 0.0)) throw ArgumentError("regression weights must not all vanish");
  const double vx = sxx - sx * sx / sw;
  const double vy = syy - sy * sy / sw;
  const double cxy = sxy - sx * sy / sw;
  if (!(vx > 0.0)) throw DataError("regression is rank deficient: regressor has no spread");
  Ols out;
  out.n = n;
  out.slope = cxy / vx;
  out.intercept = (sy - out.slope * sx) / sw;
  out.pearson = vy > 0.0 ? cxy / std::sqrt(vx * vy) : 0.0;
  out.slope_through_origin = sxx > 0.0 ? sxy / sxx : 0.0;
  double rss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double wi = w.empty() ? 1.0 : w[static_cast<std::size_t>(i)];
    const double r = y[static_cast<std::size_t>(i)] -
                     (out.intercept + out.slope * x[static_cast<std::size_t>(i)]);
    rss += wi * r * r;
  }
  out.rss = rss;
  return out;
}

}  // namespace

MeasurementEnsemble::MeasurementEnsemble(std::vector<MeasurementRecord> records)
    : records_(std::move(records)) {
  if (records_.empty()) throw DataError("measurement ensemble is empty");
  std::set<int> freqs;
  for (const MeasurementRecord& r : records_) {
    if (!std::isfinite(r.rss_dbm)) throw DataError("RSS values must be finite");
    if (r.tx == r.rx) throw DataError("a record cannot have tx == rx");
    freqs.insert(r.freq_index);
  }
  if (freqs.empty()) throw DataError("measurement ensemble has no frequencies");
}

MeasurementEnsemble MeasurementEnsemble::from_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open measurement file: " + path);
  return from_csv(in);
}

MeasurementEnsemble MeasurementEnsemble::from_csv(std::istream& in) {
  std::vector<MeasurementRecord> records;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("experiment_id", 0) == 0) continue;  // header row
    }
    std::stringstream ss(line);
    std::string tok;
    MeasurementRecord r;
    double* dfields[] = {&r.rss_dbm, &r.tx_power_dbm, &r.battery_mv};
    int* ifields[] = {&r.experiment, &r.tx, &r.rx, &r.freq_index};
    int col = 0;
    bool bad = false;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        if (col < 4) {
          *ifields[col] = std::stoi(tok, &used);
        } else if (col < 7) {
          *dfields[col - 4] = std::stod(tok, &used);
        } else {
          bad = true;
        }
        if (used != tok.size()) bad = true;
      } catch (const std::exception&) {
        bad = true;
      }
      if (bad) break;
      ++col;
    }
    if (bad || col != 7) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "malformed measurement CSV at line %ld", line_no);
      throw DataError(buf);
    }
    records.push_back(r);
  }
  if (records.empty()) throw DataError("measurement CSV contains no records");
  return MeasurementEnsemble(std::move(records));
}

void MeasurementEnsemble::write_csv(std::ostream& out) const {
  out << "experiment_id,tx,rx,freq_index,rss_dbm,tx_power,battery_mv\n";
  char buf[200];
  for (const MeasurementRecord& r : records_) {
    // %.17g: measurement files are meant to be re-ingested, so the doubles
    // must survive the text round trip exactly.
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%.17g,%.17g,%.17g", r.experiment,
                  r.tx, r.rx, r.freq_index, r.rss_dbm, r.tx_power_dbm, r.battery_mv);
    out << buf << '\n';
  }
}

std::vector<int> MeasurementEnsemble::experiment_ids() const {
  std::set<int> ids;
  for (const MeasurementRecord& r : records_) ids.insert(r.experiment);
  return std::vector<int>(ids.begin(), ids.end());
}

int MeasurementEnsemble::frequency_count() const {
  std::set<int> freqs;
  for (const MeasurementRecord& r : records_) freqs.insert(r.freq_index);
  return static_cast<int>(freqs.size());
}

AveragedPower frequency_average(const MeasurementEnsemble& ensemble,
                                int min_freq_samples) {
  std::map<std::pair<int, Link>, std::pair<double, int>> sums;
  for (const MeasurementRecord& r : ensemble.records()) {
    const Link link = Link::make(r.tx, r.rx);
    auto& slot = sums[{r.experiment, link}];
    slot.first += r.rss_dbm;
    slot.second += 1;
  }
  AveragedPower out;
  for (const auto& [key, slot] : sums) {
    if (slot.second < min_freq_samples) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "experiment %d link %d-%d dropped: only %d frequency samples",
                    key.first, key.second.first, key.second.second, slot.second);
      out.dropped.emplace_back(buf);
      continue;
    }
    out.mean_dbm[key] = slot.first / slot.second;
  }
  return out;
}

PathLossFit fit_path_loss(const AveragedPower& averaged, const Deployment& dep,
                          bool per_experiment, double ref_distance_m) {
  if (!(ref_distance_m > 0.0)) throw ArgumentError("reference distance must be > 0");

  std::set<long long> distinct;
  for (const auto& [key, value] : averaged.mean_dbm) {
    (void)value;
    distinct.insert(std::llround(dep.link_distance(key.second) * 1e6));
  }
  if (distinct.size() < 3)
    throw DataError("path loss regression needs at least 3 distinct link distances");

  PathLossFit fit;
  fit.pooled = !per_experiment;

  auto regressor = [&](Link link) {
    return 10.0 * std::log10(dep.link_distance(link) / ref_distance_m);
  };

  if (per_experiment) {
    std::set<int> experiments;
    for (const auto& [key, value] : averaged.mean_dbm) {
      (void)value;
      experiments.insert(key.first);
    }
    double rss_total = 0.0;
    long dof_total = 0;
    double intercept_sum = 0.0, exponent_sum = 0.0;
    for (int m : experiments) {
      std::vector<double> x, y;
      std::vector<Link> links;
      for (const auto& [key, value] : averaged.mean_dbm) {
        if (key.first != m) continue;
        x.push_back(regressor(key.second));
        y.push_back(value);
        links.push_back(key.second);
      }
      if (x.size() < 3) continue;
      const Ols ols = ols_fit(x, y);
      PathLossFit::PerExperiment pe;
      pe.experiment = m;
      pe.intercept_dbm = ols.intercept;
      pe.exponent = -ols.slope;
      pe.n_links = ols.n;
      pe.sigma2_db2 = ols.n > 2 ? ols.rss / (ols.n - 2) : 0.0;
      fit.per_experiment.push_back(pe);
      rss_total += ols.rss;
      dof_total += ols.n - 2;
      intercept_sum += ols.intercept;
      exponent_sum += -ols.slope;
      for (std::size_t i = 0; i < links.size(); ++i) {
        const double predicted = ols.intercept + ols.slope * x[i];
        fit.fading_db[{m, links[i]}] = predicted - y[i];
      }
    }
    if (fit.per_experiment.empty())
      throw DataError("no experiment has enough links for a regression");
    fit.sigma2_db2 = dof_total > 0 ? rss_total / dof_total : 0.0;
    fit.intercept_dbm = intercept_sum / static_cast<double>(fit.per_experiment.size());
    fit.exponent = exponent_sum / static_cast<double>(fit.per_experiment.size());
  } else {
    std::vector<double> x, y;
    std::vector<std::pair<int, Link>> keys;
    for (const auto& [key, value] : averaged.mean_dbm) {
      x.push_back(regressor(key.second));
      y.push_back(value);
      keys.push_back(key);
    }
    const Ols ols = ols_fit(x, y);
    fit.intercept_dbm = ols.intercept;
    fit.exponent = -ols.slope;
    fit.sigma2_db2 = ols.n > 2 ? ols.rss / (ols.n - 2) : 0.0;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const double predicted = ols.intercept + ols.slope * x[i];
      fit.fading_db[keys[i]] = predicted - y[i];
    }
  }
  return fit;
}

StackedCorrelation pair_fading_correlation(
    const std::map<std::pair<int, Link>, double>& fading,
    const std::vector<SimilarPair>& pairs) {
  if (pairs.empty()) throw ArgumentError("no link pairs to stack");

  // Remove each experiment's mean fading (over every link it measured)
  // before stacking, so a per-deployment calibration offset drops out.
  // On regression residuals the means are already zero and this is a no-op.
  std::map<int, std::pair<double, long>> exp_mean;
  for (const auto& [key, value] : fading) {
    auto& slot = exp_mean[key.first];
    slot.first += value;
    slot.second += 1;
  }

  std::vector<double> xs, ys, raw_x, raw_y;
  for (auto& [m, slot] : exp_mean) {
    const double mean = slot.first / static_cast<double>(slot.second);
    for (const SimilarPair& p : pairs) {
      const auto ita = fading.find({m, p.first});
      const auto itb = fading.find({m, p.second});
      if (ita == fading.end() || itb == fading.end()) continue;
      raw_x.push_back(ita->second);
      raw_y.push_back(itb->second);
      xs.push_back(ita->second - mean);
      ys.push_back(itb->second - mean);
    }
  }
  const int n = static_cast<int>(xs.size());
  if (n < 3) throw DataError("fewer than 3 stacked samples for the pair correlation");

  // Degeneracy is judged on the raw stacked vectors; the centering must not
  // manufacture variance for a constant vector.
  auto flat = [](const std::vector<double>& v) {
    for (double x : v) {
      if (x != v.front()) return false;
    }
    return true;
  };
  if (flat(raw_x) || flat(raw_y))
    throw DataError("pair correlation undefined: a stacked vector has zero variance");

  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[static_cast<std::size_t>(i)];
    my += ys[static_cast<std::size_t>(i)];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = xs[static_cast<std::size_t>(i)] - mx;
    const double dy = ys[static_cast<std::size_t>(i)] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0))
    throw DataError("pair correlation undefined: a stacked vector has zero variance");
  StackedCorrelation out;
  out.rho = sxy / std::sqrt(sxx * syy);
  out.n = n;
  return out;
}

double correlation_p_value(double rho, int n) {
  if (n < 3) throw ArgumentError("p-value needs n >= 3");
  if (!(std::abs(rho) <= 1.0)) throw ArgumentError("correlation must lie in [-1, 1]");
  if (rho == 0.0) return 1.0;
  if (std::abs(rho) >= 1.0) return 0.0;
  const double t = std::abs(rho) * std::sqrt(static_cast<double>(n - 2)) /
                   std::sqrt(1.0 - rho * rho);
  boost::math::students_t dist(static_cast<double>(n - 2));
  return 2.0 * boost::math::cdf(boost::math::complement(dist, t));
}

std::vector<GeometryMeasurement> measure_catalog_correlations(
    const std::map<std::pair<int, Link>, double>& fading, const Deployment& dep,
    const GeometryCatalog& catalog) {
  const PairGeometryIndex index(dep, catalog.tolerance());
  std::vector<GeometryMeasurement> out;
  for (const CatalogEntry& entry : catalog.entries()) {
    GeometryMeasurement gm;
    gm.geometry_id = entry.id;
    const LinkPairGeometry proto = catalog.geometry(entry);
    gm.shares_node = proto.shares_node();
    if (gm.shares_node) {
      const auto free = proto.free_endpoints();
      gm.free_endpoint_distance_m = distance(free[0], free[1]);
    }
    const auto pairs = index.match(proto);
    gm.pair_count = static_cast<int>(pairs.size());
    if (!pairs.empty()) {
      try {
        const StackedCorrelation sc = pair_fading_correlation(fading, pairs);
        gm.measured_rho = sc.rho;
        gm.n = sc.n;
        gm.p_value = correlation_p_value(sc.rho, sc.n);
        gm.valid = true;
      } catch (const Error&) {
        gm.valid = false;
      }
    }
    out.push_back(gm);
  }
  return out;
}

std::vector<double> default_delta_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 30; ++k) grid.push_back(0.10 + 0.01 * k);
  return grid;
}

ModelCorrelationTable model_correlation_table(
    const std::vector<const CatalogEntry*>& geometries, const QuadratureSpec& spec,
    const std::vector<double>& delta_grid) {
  if (delta_grid.empty()) throw ArgumentError("delta grid is empty");
  ModelCorrelationTable table(delta_grid.size());
  for (std::size_t gi = 0; gi < delta_grid.size(); ++gi) {
    // Memoizes the variance integrals shared by geometries of equal link
    // lengths (the correlation itself ignores the variance scale).
    ShadowingParams sp;
    sp.space_constant_m = delta_grid[gi];
    sp.shadow_var_db2 = 1.0;
    sp.total_var_db2 = 1.0;
    PairStatisticsCache cache(sp, spec);
    table[gi].reserve(geometries.size());
    for (const CatalogEntry* e : geometries) {
      table[gi].push_back(cache.correlation(e->link_a, e->link_b));
    }
  }
  return table;
}

DeltaFit fit_space_constant_from_table(const ModelCorrelationTable& table,
                                       const std::vector<double>& measured_rho,
                                       const std::vector<double>& delta_grid,
                                       const std::vector<double>& weights) {
  if (table.size() != delta_grid.size())
    throw ArgumentError("model table does not match the delta grid");
  if (!weights.empty() && weights.size() != measured_rho.size())
    throw ArgumentError("weights must align with the measurements");
  if (measured_rho.size() < 3)
    throw DataError("space constant fit needs at least 3 measured geometries");

  DeltaFit fit;
  double best = -2.0;
  std::size_t best_idx = 0;
  for (std::size_t gi = 0; gi < delta_grid.size(); ++gi) {
    if (table[gi].size() != measured_rho.size())
      throw ArgumentError("model table does not match the measurements");
    const Ols ols = ols_fit(table[gi], measured_rho, weights);
    DeltaFitPoint pt;
    pt.delta_m = delta_grid[gi];
    pt.rho_c = ols.pearson;
    pt.slope = ols.slope;
    pt.intercept = ols.intercept;
    pt.slope_through_origin = ols.slope_through_origin;
    fit.curve.push_back(pt);
    if (pt.rho_c > best) {
      best = pt.rho_c;
      best_idx = gi;
    }
  }
  const DeltaFitPoint& star = fit.curve[best_idx];
  fit.delta_star_m = star.delta_m;
  fit.ratio = star.slope;
  fit.ratio_through_origin = star.slope_through_origin;
  fit.intercept = star.intercept;
  fit.model_rho_at_star = table[best_idx];
  return fit;
}

DeltaFit fit_space_constant(const std::vector<const CatalogEntry*>& geometries,
                            const std::vector<double>& measured_rho,
                            const QuadratureSpec& spec,
                            const std::vector<double>& delta_grid,
                            const std::vector<double>& weights) {
  if (geometries.size() != measured_rho.size())
    throw ArgumentError("geometry and correlation vectors must align");
  return fit_space_constant_from_table(
      model_correlation_table(geometries, spec, delta_grid), measured_rho, delta_grid,
      weights);
}

}  // namespace corrshadow
