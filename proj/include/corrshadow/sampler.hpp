// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "corrshadow/covariance.hpp"
#include "corrshadow/geometry.hpp"
#include "corrshadow/params.hpp"

namespace corrshadow {

/// Factorized joint covariance of total fading over all links of a
/// deployment, ready for sampling.  If the assembled matrix is indefinite at
/// machine precision (quadrature noise), escalating diagonal jitter of
/// 1e-10, 1e-8 and 1e-6 times the total fading variance is applied before
/// giving up; the jitter actually used is recorded.
struct JointFadingModel {
  std::vector<Link> links;
  Eigen::MatrixXd sigma;       // covariance as assembled
  Eigen::MatrixXd chol;        // lower-triangular factor of sigma + jitter*I
  double jitter_db2 = 0.0;
  ShadowingParams shadowing;
  CorrelationMode mode = CorrelationMode::TotalFading;
};

JointFadingModel build_joint_fading(const Deployment& dep, const ShadowingParams& sp,
                                    const QuadratureSpec& spec = {},
                                    CorrelationMode mode = CorrelationMode::TotalFading);

/// Factorize an externally assembled covariance with the same jitter policy.
JointFadingModel factorize_covariance(std::vector<Link> links, Eigen::MatrixXd sigma,
                                      const ShadowingParams& sp,
                                      CorrelationMode mode = CorrelationMode::TotalFading);

/// One joint draw of total fading, aligned with JointFadingModel::links.
struct FadingSample {
  std::vector<double> z_db;
};

/// Zero-mean jointly Gaussian draws with the factorized covariance.  Each
/// sample uses its own (seed, index) substream, so shards produce identical
/// output regardless of how the index range is divided among workers.
std::vector<FadingSample> sample_fading(const JointFadingModel& model, int n_samples,
                                        std::uint64_t seed,
                                        std::uint64_t first_index = 0);

/// Received power per link: mean path loss minus the fading draw.
std::vector<double> received_power_dbm(const Deployment& dep, const PathLossParams& p,
                                       const std::vector<Link>& links,
                                       const FadingSample& fading);

/// Node adjacency induced by a power threshold: an edge exists where the
/// link's received power exceeds it.
class ConnectivityGraph {
 public:
  ConnectivityGraph(int n_nodes, const std::vector<Link>& links,
                    const std::vector<double>& power_dbm, double threshold_dbm);

  bool edge(int i, int j) const;
  /// Breadth-first reachability.
  bool connected(int from, int to) const;
  int node_count() const { return n_; }

 private:
  int n_;
  std::vector<char> adj_;
};

/// CSV export of fading/power realizations: one row per (sample, link).
void write_realizations_csv(std::ostream& out, const Deployment& dep,
                            const PathLossParams& p, const JointFadingModel& model,
                            const std::vector<FadingSample>& samples,
                            std::uint64_t seed);

}  // namespace corrshadow
