// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "corrshadow/covariance.hpp"
#include "corrshadow/geometry.hpp"
#include "corrshadow/params.hpp"

namespace corrshadow {

/// Complementary CDF of the standard normal.
double q_function(double x);

/// Margin penalty of the double-length direct link relative to one hop:
/// 10 * n_p * log10(2) / sigma_dB.
double kappa_margin_penalty(double exponent, double sigma_db);

/// P(direct link connected) for a short-link design margin beta_bar:
/// 1 - Q(beta_bar - kappa).
double prob_direct(double beta_bar, double kappa);

/// P(both hops connected) with independent hop fading: (1 - Q(beta_bar))^2.
double prob_two_hop_iid(double beta_bar);

/// Two-node-relay path failure with fully independent link fading:
/// Q(beta_bar - kappa) * Q(beta_bar) * (2 - Q(beta_bar)).
double path_failure_iid(double beta_bar, double kappa);

/// Normalized margins of the three-node relay problem: the short-link mean
/// margin, the direct-link penalty and the correlation between each hop's
/// margin and the direct link's margin.
struct MarginSpec {
  double beta_bar = 0.0;
  double kappa = 0.0;
  double rho = 0.0;

  void validate() const {
    if (!(kappa >= 0.0)) throw ArgumentError("kappa must be >= 0");
    if (!(std::abs(rho) < 1.0)) throw ArgumentError("|rho| must be < 1");
  }
};

/// P(direct link and both hops connected) when each hop's margin is
/// correlated with the direct link's margin by rho and the hops are
/// conditionally independent given the direct link.  Semi-infinite integral
/// of the squared conditional probability against the direct-link margin
/// density (normalization included).
double prob_joint_correlated(const MarginSpec& m, double abs_tol = 1e-9);

/// 1 - [P(direct) + P(two-hop) - P(joint)], the relay path failure under
/// correlated shadowing; the two hops keep the independent-hop probability.
double path_failure_correlated(const MarginSpec& m, double abs_tol = 1e-9);

/// Equally spaced collinear chain used by the 3- and 4-node studies.
Deployment chain_deployment(int n_nodes, double spacing_m);

/// Chain study parameters.  The correlation mode picks what the link margins
/// inherit: TotalFading uses the physical total fading covariance (shadowing
/// correlation diluted by the shadowing ratio), ShadowingOnly correlates the
/// unit-variance margins by the raw shadowing correlation.
struct ChainSpec {
  int n_nodes = 3;
  double spacing_m = 1.22;
  PathLossParams path_loss;
  ShadowingParams shadowing;
  CorrelationMode mode = CorrelationMode::TotalFading;
  QuadratureSpec quad;
};

/// Design margin of the short links implied by the threshold.
double chain_beta_bar(const ChainSpec& spec);
/// Threshold that realizes a target short-link design margin.
double threshold_for_beta_bar(const PathLossParams& p, double spacing_m, double beta_bar);
/// Correlation between a short link's margin and the direct (two-spacing)
/// link containing it, under the spec's mode.
double chain_short_long_rho(const ChainSpec& spec);

struct McFailure {
  double probability = 0.0;
  double stderr_est = 0.0;
  int n = 0;
};

/// Monte Carlo source-to-sink path failure over the chain's full link set,
/// sampling joint fading and testing graph reachability per draw.
McFailure mc_chain_failure(const ChainSpec& spec, int n_samples, std::uint64_t seed);

/// Exact path failure probability with independent links, by enumerating
/// all link on/off combinations.
double chain_failure_iid_exact(const ChainSpec& spec, double beta_bar);

struct SweepRow {
  double beta_bar = 0.0;
  double p_iid = 0.0;
  double p_corr = 0.0;
  double pct_increase = 0.0;
  double mc_stderr = 0.0;  // zero for analytic rows
  bool from_mc = false;
  bool unstable = false;  // p_iid below 1e-12
};

/// Failure probabilities across design margins.  Three-node chains use the
/// analytic correlated probability; four-node chains are Monte Carlo with a
/// shared sample batch across the grid.
std::vector<SweepRow> failure_sweep(const ChainSpec& spec,
                                    const std::vector<double>& beta_grid,
                                    int mc_samples, std::uint64_t seed);

}  // namespace corrshadow
