// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#include "corrshadow/covariance.hpp"

#include <cmath>
#include <cstdio>

namespace corrshadow {

namespace {

// Raw double line integral with non-convergence mapped to NumericError
// carrying the prefactored last estimate.
double raw_integral(const Segment& a, const Segment& b, double delta,
                    const QuadratureSpec& spec, double prefactor) {
  const PairIntegral r = integrate_exp_kernel(a, b, delta, spec);
  if (!r.converged) {
    throw NumericError("segment-pair quadrature did not converge within max_subdivisions",
                       prefactor * r.value);
  }
  return r.value;
}

}  // namespace

double link_shadowing_variance(const ShadowingParams& sp, double distance_m) {
  sp.validate();
  if (!(distance_m > 0.0)) throw ArgumentError("distance must be > 0");
  const double q = sp.space_constant_m / distance_m;
  return sp.shadow_var_db2 * (1.0 - q * (1.0 - std::exp(-1.0 / q)));
}

double link_shadowing_covariance(const ShadowingParams& sp, const Segment& a,
                                 const Segment& b, const QuadratureSpec& spec) {
  sp.validate();
  const double delta = sp.space_constant_m;
  const double prefactor = sp.shadow_var_db2 /
                           (2.0 * delta * std::sqrt(a.length() * b.length()));
  return prefactor * raw_integral(a, b, delta, spec, prefactor);
}

double pair_shadowing_correlation(double space_constant_m, const Segment& a,
                                  const Segment& b, const QuadratureSpec& spec) {
  const double len_a = a.length();
  const double len_b = b.length();
  const double iab = raw_integral(a, b, space_constant_m, spec, 1.0);
  const double iaa = raw_integral(a, a, space_constant_m, spec, 1.0);
  const double ibb = raw_integral(b, b, space_constant_m, spec, 1.0);
  const double cov = iab / std::sqrt(len_a * len_b);
  const double var = std::sqrt((iaa / len_a) * (ibb / len_b));
  return cov / var;
}

double pair_shadowing_correlation_approx(double space_constant_m, const Segment& a,
                                         const Segment& b, const QuadratureSpec& spec) {
  if (!(space_constant_m > 0.0)) throw ArgumentError("space constant must be > 0");
  const double iab = raw_integral(a, b, space_constant_m, spec, 0.0);
  return iab / (2.0 * space_constant_m * std::sqrt(a.length() * b.length()));
}

double total_fading_correlation(const ShadowingParams& sp, double rho_x,
                                bool same_link) {
  sp.validate();
  if (!(std::abs(rho_x) <= 1.0 + 1e-12))
    throw ArgumentError("shadowing correlation must lie in [-1, 1]");
  if (same_link) return 1.0;
  return sp.shadow_ratio() * rho_x;
}

PairStatisticsCache::PairStatisticsCache(ShadowingParams sp, QuadratureSpec spec,
                                         double geometry_tolerance_m)
    : sp_(sp), spec_(spec), tol_(geometry_tolerance_m) {
  sp_.validate();
  spec_.validate();
}

double PairStatisticsCache::variance(const Segment& seg) {
  const long long key = std::llround(seg.length() / tol_);
  auto it = var_cache_.find(key);
  if (it != var_cache_.end()) return it->second;
  const double prefactor =
      sp_.shadow_var_db2 / (2.0 * sp_.space_constant_m * seg.length());
  const double value = prefactor * raw_integral(seg, seg, sp_.space_constant_m,
                                                spec_, prefactor);
  var_cache_.emplace(key, value);
  return value;
}

double PairStatisticsCache::covariance(const Segment& a, const Segment& b) {
  const LinkPairGeometry geom(a, b, tol_);
  const std::string key = geom.cache_key();
  auto it = cov_cache_.find(key);
  if (it != cov_cache_.end()) return it->second;
  // Evaluate on the canonical frame so congruent pairs get identical values.
  const LinkPairGeometry canon = geom.canonical();
  const double value =
      link_shadowing_covariance(sp_, canon.first(), canon.second(), spec_);
  cov_cache_.emplace(key, value);
  return value;
}

double PairStatisticsCache::correlation(const Segment& a, const Segment& b) {
  const double cov = covariance(a, b);
  return cov / std::sqrt(variance(a) * variance(b));
}

Eigen::MatrixXd fading_covariance_matrix(const Deployment& dep, const ShadowingParams& sp,
                                         const QuadratureSpec& spec, CorrelationMode mode) {
  sp.validate();
  const auto links = enumerate_links(dep);
  const int n = static_cast<int>(links.size());
  Eigen::MatrixXd sigma(n, n);
  // shadow_var == 0 short-circuits to the i.i.d. diagonal.
  if (sp.shadow_var_db2 == 0.0) {
    sigma.setZero();
    sigma.diagonal().setConstant(sp.total_var_db2);
    return sigma;
  }
  PairStatisticsCache cache(sp, spec);
  for (int i = 0; i < n; ++i) {
    sigma(i, i) = sp.total_var_db2;
    const Segment si = dep.segment(links[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < n; ++j) {
      const Segment sj = dep.segment(links[static_cast<std::size_t>(j)]);
      double off = 0.0;
      if (mode == CorrelationMode::TotalFading) {
        off = cache.covariance(si, sj);
      } else {
        off = sp.total_var_db2 * cache.correlation(si, sj);
      }
      sigma(i, j) = off;
      sigma(j, i) = off;
    }
  }
  return sigma;
}

void write_covariance_csv(std::ostream& out, const std::vector<Link>& links,
                          const Eigen::MatrixXd& sigma) {
  char buf[64];
  for (std::size_t i = 0; i < links.size(); ++i) {
    out << (i == 0 ? "" : ",") << links[i].first << '-' << links[i].second;
  }
  out << '\n';
  for (Eigen::Index r = 0; r < sigma.rows(); ++r) {
    for (Eigen::Index c = 0; c < sigma.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.12g", sigma(r, c));
      out << (c == 0 ? "" : ",") << buf;
    }
    out << '\n';
  }
}

}  // namespace corrshadow
