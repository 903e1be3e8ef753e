// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#include "corrshadow/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <queue>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "corrshadow/rng.hpp"

namespace corrshadow {

JointFadingModel factorize_covariance(std::vector<Link> links, Eigen::MatrixXd sigma,
                                      const ShadowingParams& sp, CorrelationMode mode) {
  JointFadingModel model;
  model.links = std::move(links);
  model.sigma = std::move(sigma);
  model.shadowing = sp;
  model.mode = mode;

  const double scale = sp.total_var_db2;
  const double jitters[] = {0.0, 1e-10 * scale, 1e-8 * scale, 1e-6 * scale};
  for (double jitter : jitters) {
    Eigen::MatrixXd trial = model.sigma;
    trial.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(trial);
    if (llt.info() == Eigen::Success) {
      model.chol = llt.matrixL();
      model.jitter_db2 = jitter;
      return model;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.sigma,
                                                    Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "fading covariance is not positive definite (smallest eigenvalue "
                "%.6g dB^2) even with 1e-6 jitter",
                min_eig);
  throw NumericError(buf, min_eig);
}

JointFadingModel build_joint_fading(const Deployment& dep, const ShadowingParams& sp,
                                    const QuadratureSpec& spec, CorrelationMode mode) {
  sp.validate();
  spec.validate();
  return factorize_covariance(enumerate_links(dep),
                              fading_covariance_matrix(dep, sp, spec, mode), sp, mode);
}

std::vector<FadingSample> sample_fading(const JointFadingModel& model, int n_samples,
                                        std::uint64_t seed, std::uint64_t first_index) {
  if (n_samples < 1) throw ArgumentError("n_samples must be >= 1");
  const Eigen::Index n = model.chol.rows();
  std::vector<FadingSample> out(static_cast<std::size_t>(n_samples));
  Eigen::VectorXd g(n);
  for (int s = 0; s < n_samples; ++s) {
    Rng rng(seed, first_index + static_cast<std::uint64_t>(s));
    for (Eigen::Index i = 0; i < n; ++i) g[i] = rng.normal();
    const Eigen::VectorXd z = model.chol * g;
    auto& sample = out[static_cast<std::size_t>(s)];
    sample.z_db.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) sample.z_db[static_cast<std::size_t>(i)] = z[i];
  }
  return out;
}

std::vector<double> received_power_dbm(const Deployment& dep, const PathLossParams& p,
                                       const std::vector<Link>& links,
                                       const FadingSample& fading) {
  p.validate();
  if (links.size() != fading.z_db.size())
    throw ArgumentError("fading sample does not match the link set");
  std::vector<double> power(links.size());
  for (std::size_t i = 0; i < links.size(); ++i) {
    power[i] = mean_power_dbm(p, dep.link_distance(links[i])) - fading.z_db[i];
  }
  return power;
}

ConnectivityGraph::ConnectivityGraph(int n_nodes, const std::vector<Link>& links,
                                     const std::vector<double>& power_dbm,
                                     double threshold_dbm)
    : n_(n_nodes), adj_(static_cast<std::size_t>(n_nodes) * n_nodes, 0) {
  if (links.size() != power_dbm.size())
    throw ArgumentError("power vector does not match the link set");
  for (std::size_t k = 0; k < links.size(); ++k) {
    if (power_dbm[k] > threshold_dbm) {
      adj_[static_cast<std::size_t>(links[k].first) * n_ + links[k].second] = 1;
      adj_[static_cast<std::size_t>(links[k].second) * n_ + links[k].first] = 1;
    }
  }
}

bool ConnectivityGraph::edge(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw ArgumentError("node index out of range");
  return adj_[static_cast<std::size_t>(i) * n_ + j] != 0;
}

bool ConnectivityGraph::connected(int from, int to) const {
  if (from < 0 || to < 0 || from >= n_ || to >= n_)
    throw ArgumentError("node index out of range");
  if (from == to) return true;
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::queue<int> frontier;
  frontier.push(from);
  seen[static_cast<std::size_t>(from)] = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v = 0; v < n_; ++v) {
      if (!seen[static_cast<std::size_t>(v)] && adj_[static_cast<std::size_t>(u) * n_ + v]) {
        if (v == to) return true;
        seen[static_cast<std::size_t>(v)] = 1;
        frontier.push(v);
      }
    }
  }
  return false;
}

void write_realizations_csv(std::ostream& out, const Deployment& dep,
                            const PathLossParams& p, const JointFadingModel& model,
                            const std::vector<FadingSample>& samples,
                            std::uint64_t seed) {
  char buf[96];
  out << "# seed = " << seed << '\n';
  std::snprintf(buf, sizeof(buf), "%.12g", model.shadowing.space_constant_m);
  out << "# space_constant_m = " << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.12g", model.shadowing.shadow_var_db2);
  out << "# shadow_var_db2 = " << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.12g", model.shadowing.total_var_db2);
  out << "# total_var_db2 = " << buf << '\n';
  std::snprintf(buf, sizeof(buf), "%.12g", p.threshold_dbm);
  out << "# threshold_dbm = " << buf << '\n';
  out << "sample_index,i,j,z_db,p_dbm\n";
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto power = received_power_dbm(dep, p, model.links, samples[s]);
    for (std::size_t k = 0; k < model.links.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%zu,%d,%d,%.10g,%.10g", s,
                    model.links[k].first, model.links[k].second,
                    samples[s].z_db[k], power[k]);
      out << buf << '\n';
    }
  }
}

}  // namespace corrshadow
