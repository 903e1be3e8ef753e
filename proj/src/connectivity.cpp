// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#include "corrshadow/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "corrshadow/rng.hpp"
#include "corrshadow/sampler.hpp"

namespace corrshadow {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Connectivity of a chain graph given per-link margins; links are in
// enumerate_links order for the chain deployment.
bool chain_connected(const std::vector<Link>& links, const std::vector<double>& margin,
                     int n_nodes) {
  // Tiny graphs; a bitmask reachability is enough.
  unsigned reachable = 1u;  // node 0
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t k = 0; k < links.size(); ++k) {
      if (margin[k] <= 0.0) continue;
      const unsigned bi = 1u << links[k].first;
      const unsigned bj = 1u << links[k].second;
      if ((reachable & bi) && !(reachable & bj)) {
        reachable |= bj;
        grew = true;
      } else if ((reachable & bj) && !(reachable & bi)) {
        reachable |= bi;
        grew = true;
      }
    }
  }
  return (reachable & (1u << (n_nodes - 1))) != 0;
}

}  // namespace

double q_function(double x) { return 0.5 * std::erfc(x / 1.4142135623730950488); }

double kappa_margin_penalty(double exponent, double sigma_db) {
  if (!(sigma_db > 0.0)) throw ArgumentError("sigma_db must be > 0");
  return 10.0 * exponent * std::log10(2.0) / sigma_db;
}

double prob_direct(double beta_bar, double kappa) {
  return 1.0 - q_function(beta_bar - kappa);
}

double prob_two_hop_iid(double beta_bar) {
  const double p = 1.0 - q_function(beta_bar);
  return p * p;
}

double path_failure_iid(double beta_bar, double kappa) {
  const double q = q_function(beta_bar);
  return q_function(beta_bar - kappa) * q * (2.0 - q);
}

double prob_joint_correlated(const MarginSpec& m, double abs_tol) {
  m.validate();
  if (!(abs_tol > 0.0)) throw ArgumentError("abs_tol must be > 0");
  const double rho = std::clamp(m.rho, -(1.0 - 1e-12), 1.0 - 1e-12);
  const double s = std::sqrt(1.0 - rho * rho);
  const double beta_direct = m.beta_bar - m.kappa;

  auto integrand = [&](double b) {
    const double mu1 = m.beta_bar + (b - beta_direct) * rho;
    const double q = q_function(-mu1 / s);
    return q * q * normal_pdf(b - beta_direct);
  };

  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, std::numeric_limits<double>::infinity(), 12, abs_tol, &error);
  if (!(std::isfinite(value)) || error > 1e-6) {
    throw NumericError("joint connection integral did not converge", value);
  }
  return value;
}

double path_failure_correlated(const MarginSpec& m, double abs_tol) {
  const double pa = prob_direct(m.beta_bar, m.kappa);
  const double pb = prob_two_hop_iid(m.beta_bar);
  const double pab = prob_joint_correlated(m, abs_tol);
  return std::clamp(1.0 - (pa + pb - pab), 0.0, 1.0);
}

Deployment chain_deployment(int n_nodes, double spacing_m) {
  if (n_nodes < 2) throw ArgumentError("a chain needs at least 2 nodes");
  if (!(spacing_m > 0.0)) throw ArgumentError("spacing must be > 0");
  std::vector<Point> nodes;
  for (int i = 0; i < n_nodes; ++i) nodes.push_back({i * spacing_m, 0.0});
  return Deployment("chain", std::move(nodes));
}

double chain_beta_bar(const ChainSpec& spec) {
  return (mean_power_dbm(spec.path_loss, spec.spacing_m) - spec.path_loss.threshold_dbm) /
         spec.path_loss.sigma_db;
}

double threshold_for_beta_bar(const PathLossParams& p, double spacing_m, double beta_bar) {
  return mean_power_dbm(p, spacing_m) - beta_bar * p.sigma_db;
}

double chain_short_long_rho(const ChainSpec& spec) {
  const Segment short_link{{0.0, 0.0}, {spec.spacing_m, 0.0}};
  const Segment direct{{0.0, 0.0}, {2.0 * spec.spacing_m, 0.0}};
  if (spec.shadowing.shadow_var_db2 == 0.0) return 0.0;
  if (spec.mode == CorrelationMode::ShadowingOnly) {
    return pair_shadowing_correlation(spec.shadowing.space_constant_m, short_link,
                                      direct, spec.quad);
  }
  const double cov = link_shadowing_covariance(spec.shadowing, short_link, direct,
                                               spec.quad);
  return cov / spec.shadowing.total_var_db2;
}

McFailure mc_chain_failure(const ChainSpec& spec, int n_samples, std::uint64_t seed) {
  if (spec.n_nodes < 2 || spec.n_nodes > 16)
    throw ArgumentError("chain Monte Carlo supports 2 to 16 nodes");
  if (n_samples < 1) throw ArgumentError("n_samples must be >= 1");
  spec.path_loss.validate();
  spec.shadowing.validate();

  const Deployment dep = chain_deployment(spec.n_nodes, spec.spacing_m);
  const JointFadingModel model = build_joint_fading(dep, spec.shadowing, spec.quad,
                                                    spec.mode);
  std::vector<double> mean_margin(model.links.size());
  for (std::size_t k = 0; k < model.links.size(); ++k) {
    mean_margin[k] = (mean_power_dbm(spec.path_loss, dep.link_distance(model.links[k])) -
                      spec.path_loss.threshold_dbm) /
                     spec.path_loss.sigma_db;
  }

  const double inv_sigma = 1.0 / spec.path_loss.sigma_db;
  long failures = 0;
  std::vector<double> margin(model.links.size());
  Eigen::VectorXd g(static_cast<Eigen::Index>(model.links.size()));
  for (int snum = 0; snum < n_samples; ++snum) {
    Rng rng(seed, static_cast<std::uint64_t>(snum));
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = rng.normal();
    const Eigen::VectorXd z = model.chol * g;
    for (std::size_t k = 0; k < margin.size(); ++k) {
      margin[k] = mean_margin[k] - z[static_cast<Eigen::Index>(k)] * inv_sigma;
    }
    if (!chain_connected(model.links, margin, spec.n_nodes)) ++failures;
  }
  McFailure out;
  out.n = n_samples;
  out.probability = static_cast<double>(failures) / n_samples;
  out.stderr_est = std::sqrt(out.probability * (1.0 - out.probability) / n_samples);
  return out;
}

double chain_failure_iid_exact(const ChainSpec& spec, double beta_bar) {
  const Deployment dep = chain_deployment(spec.n_nodes, spec.spacing_m);
  const auto links = enumerate_links(dep);
  if (links.size() > 20) throw ArgumentError("exact enumeration limited to 20 links");
  std::vector<double> p_connect(links.size());
  for (std::size_t k = 0; k < links.size(); ++k) {
    const double ratio = dep.link_distance(links[k]) / spec.spacing_m;
    const double margin = beta_bar - kappa_margin_penalty(spec.path_loss.exponent,
                                                          spec.path_loss.sigma_db) *
                                         std::log2(ratio);
    p_connect[k] = 1.0 - q_function(margin);
  }
  double failure = 0.0;
  std::vector<double> margins(links.size());
  for (unsigned mask = 0; mask < (1u << links.size()); ++mask) {
    double prob = 1.0;
    for (std::size_t k = 0; k < links.size(); ++k) {
      const bool on = (mask >> k) & 1u;
      prob *= on ? p_connect[k] : 1.0 - p_connect[k];
      margins[k] = on ? 1.0 : -1.0;
    }
    if (prob == 0.0) continue;
    if (!chain_connected(links, margins, spec.n_nodes)) failure += prob;
  }
  return failure;
}

std::vector<SweepRow> failure_sweep(const ChainSpec& spec,
                                    const std::vector<double>& beta_grid,
                                    int mc_samples, std::uint64_t seed) {
  if (beta_grid.empty()) throw ArgumentError("beta grid is empty");
  if (spec.n_nodes != 3 && spec.n_nodes != 4)
    throw ArgumentError("failure sweep covers 3- and 4-node chains");
  spec.path_loss.validate();
  spec.shadowing.validate();

  const double kappa = kappa_margin_penalty(spec.path_loss.exponent,
                                            spec.path_loss.sigma_db);
  std::vector<SweepRow> rows;

  if (spec.n_nodes == 3) {
    const double rho = chain_short_long_rho(spec);
    for (double beta : beta_grid) {
      SweepRow row;
      row.beta_bar = beta;
      row.p_iid = path_failure_iid(beta, kappa);
      row.p_corr = path_failure_correlated({beta, kappa, rho});
      row.unstable = row.p_iid < 1e-12;
      row.pct_increase = row.unstable ? 0.0 : 100.0 * (row.p_corr / row.p_iid - 1.0);
      rows.push_back(row);
    }
    return rows;
  }

  // Four nodes: exact independent-link reference, Monte Carlo for the
  // correlated case.  One fading batch is shared by every grid point; the
  // margin threshold slides across it.
  if (mc_samples < 1) throw ArgumentError("mc_samples must be >= 1");
  const Deployment dep = chain_deployment(spec.n_nodes, spec.spacing_m);
  const JointFadingModel model = build_joint_fading(dep, spec.shadowing, spec.quad,
                                                    spec.mode);
  std::vector<double> length_penalty(model.links.size());
  for (std::size_t k = 0; k < model.links.size(); ++k) {
    length_penalty[k] =
        kappa * std::log2(dep.link_distance(model.links[k]) / spec.spacing_m);
  }
  std::vector<long> failures(beta_grid.size(), 0);
  std::vector<double> margin(model.links.size());
  Eigen::VectorXd g(static_cast<Eigen::Index>(model.links.size()));
  const double inv_sigma = 1.0 / spec.path_loss.sigma_db;
  for (int snum = 0; snum < mc_samples; ++snum) {
    Rng rng(seed, static_cast<std::uint64_t>(snum));
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = rng.normal();
    const Eigen::VectorXd z = model.chol * g;
    for (std::size_t bi = 0; bi < beta_grid.size(); ++bi) {
      for (std::size_t k = 0; k < margin.size(); ++k) {
        margin[k] = beta_grid[bi] - length_penalty[k] -
                    z[static_cast<Eigen::Index>(k)] * inv_sigma;
      }
      if (!chain_connected(model.links, margin, spec.n_nodes)) ++failures[bi];
    }
  }
  for (std::size_t bi = 0; bi < beta_grid.size(); ++bi) {
    SweepRow row;
    row.beta_bar = beta_grid[bi];
    row.p_iid = chain_failure_iid_exact(spec, beta_grid[bi]);
    row.p_corr = static_cast<double>(failures[bi]) / mc_samples;
    row.mc_stderr = std::sqrt(row.p_corr * (1.0 - row.p_corr) / mc_samples);
    row.from_mc = true;
    row.unstable = row.p_iid < 1e-12;
    row.pct_increase = row.unstable ? 0.0 : 100.0 * (row.p_corr / row.p_iid - 1.0);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace corrshadow
