// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "corrshadow/geometry.hpp"
#include "corrshadow/params.hpp"
#include "corrshadow/quadrature.hpp"

namespace corrshadow {

// Shadowing on a link is the spatial loss field integrated along the link
// and scaled by 1/sqrt(length).  With the field covariance written as
// prefactor * exp(-r / delta), direct integration gives
//
//   Var(X) = 2 * prefactor * delta * [1 - (delta/d) * (1 - exp(-d/delta))].
//
// We use prefactor = shadow_var / (2 * delta) throughout, so that
// Var(X) -> shadow_var for long links and the closed form below holds
// exactly.  Correlation coefficients are independent of this choice (any
// positive prefactor cancels in the ratio).

/// Closed-form variance of link shadowing at link length d.
double link_shadowing_variance(const ShadowingParams& sp, double distance_m);

/// Numerical covariance of shadowing on two links (same value as the closed
/// form when the segments coincide, up to quadrature error).
double link_shadowing_covariance(const ShadowingParams& sp, const Segment& a,
                                 const Segment& b, const QuadratureSpec& spec = {});

/// Exact correlation coefficient of shadowing on two links; covariance and
/// both variances are computed by the same quadrature so the prefactor
/// cancels.  Depends only on the geometry and the space constant.
double pair_shadowing_correlation(double space_constant_m, const Segment& a,
                                  const Segment& b, const QuadratureSpec& spec = {});

/// Large-distance approximation that replaces both variances by the limiting
/// shadowing variance; exposed for comparison with the exact ratio.
double pair_shadowing_correlation_approx(double space_constant_m, const Segment& a,
                                         const Segment& b,
                                         const QuadratureSpec& spec = {});

/// Correlation of total fading from the shadowing correlation: 1 on the same
/// link, otherwise scaled by shadow_var / total_var.
double total_fading_correlation(const ShadowingParams& sp, double rho_x,
                                bool same_link);

/// Memoizes pair covariances and correlations by canonical pair geometry,
/// so congruent pairs are computed once and get bitwise-equal entries.
class PairStatisticsCache {
 public:
  PairStatisticsCache(ShadowingParams sp, QuadratureSpec spec,
                      double geometry_tolerance_m = 1e-3);

  double covariance(const Segment& a, const Segment& b);
  double correlation(const Segment& a, const Segment& b);
  /// Numeric variance of a single link (cached by quantized length).
  double variance(const Segment& seg);

  const ShadowingParams& params() const { return sp_; }

 private:
  ShadowingParams sp_;
  QuadratureSpec spec_;
  double tol_;
  std::unordered_map<std::string, double> cov_cache_;
  std::unordered_map<long long, double> var_cache_;
};

enum class CorrelationMode {
  TotalFading,    // link covariances of total fading: the physical model
  ShadowingOnly,  // unit-variance margins correlated by the raw shadowing
                  // correlation (the convention behind the headline
                  // path-failure comparisons)
};

/// Covariance of total fading over all links of the deployment, in
/// enumerate_links order.  Diagonal entries are the total fading variance;
/// off-diagonal entries are the shadowing covariance (TotalFading) or
/// total_var * rho_shadowing (ShadowingOnly).  Non-shadow fading is
/// independent across links and contributes to the diagonal only.
Eigen::MatrixXd fading_covariance_matrix(const Deployment& dep, const ShadowingParams& sp,
                                         const QuadratureSpec& spec = {},
                                         CorrelationMode mode = CorrelationMode::TotalFading);

/// CSV export with a header row of "i-j" link labels.
void write_covariance_csv(std::ostream& out, const std::vector<Link>& links,
                          const Eigen::MatrixXd& sigma);

}  // namespace corrshadow
