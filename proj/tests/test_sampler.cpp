// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "corrshadow/covariance.hpp"
#include "corrshadow/sampler.hpp"
#include "corrshadow/synthesis.hpp"
#include "testutil.hpp"

using namespace corrshadow;

namespace {

ShadowingParams campaign() {
  ShadowingParams sp;
  sp.space_constant_m = 0.21;
  sp.total_var_db2 = 25.0;
  sp.shadow_var_db2 = 0.29 * 25.0;
  return sp;
}

PathLossParams pathloss() {
  PathLossParams p;
  p.intercept_dbm = -40.0;
  p.exponent = 3.0;
  p.sigma_db = 5.0;
  p.threshold_dbm = -75.0;
  return p;
}

Deployment chain3() { return Deployment("chain3", {{0, 0}, {1.22, 0}, {2.44, 0}}); }

}  // namespace

TEST_CASE("joint covariance hits the i.i.d. limit at zero shadowing variance") {
  ShadowingParams sp = campaign();
  sp.shadow_var_db2 = 0.0;
  const JointFadingModel model = build_joint_fading(chain3(), sp);
  REQUIRE(model.sigma.rows() == 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(model.sigma(i, j) == (i == j ? sp.total_var_db2 : 0.0));
    }
  }
  CHECK(model.jitter_db2 == 0.0);
}

TEST_CASE("two-link joint covariance off-diagonal equals the engine covariance") {
  const ShadowingParams sp = campaign();
  const Deployment dep("vee", {{0, 0}, {1.22, 0}, {0, 1.22}});
  const JointFadingModel model = build_joint_fading(dep, sp);
  const auto links = enumerate_links(dep);
  REQUIRE(links.size() == 3);
  for (std::size_t a = 0; a < links.size(); ++a) {
    for (std::size_t b = a + 1; b < links.size(); ++b) {
      const double expected = link_shadowing_covariance(sp, dep.segment(links[a]),
                                                        dep.segment(links[b]));
      CHECK(model.sigma(static_cast<int>(a), static_cast<int>(b)) ==
            doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("factorization reproduces the covariance") {
  const ShadowingParams sp = campaign();
  const JointFadingModel model =
      build_joint_fading(Deployment::grid(4, 4, 1.22), sp);
  const Eigen::MatrixXd back = model.chol * model.chol.transpose();
  const double rel = (back - model.sigma).norm() / model.sigma.norm();
  CHECK(rel < 1e-8);
  CHECK(model.jitter_db2 <= 1e-8 * sp.total_var_db2);
}

TEST_CASE("jitter policy repairs a borderline covariance and reports failure") {
  ShadowingParams sp = campaign();
  std::vector<Link> links = {Link{0, 1}, Link{0, 2}};
  Eigen::MatrixXd nearly(2, 2);
  // Correlation 1 + epsilon: indefinite at machine precision.
  nearly << 25.0, 25.0 * (1.0 + 1e-9), 25.0 * (1.0 + 1e-9), 25.0;
  const JointFadingModel fixed = factorize_covariance(links, nearly, sp);
  CHECK(fixed.jitter_db2 > 0.0);

  Eigen::MatrixXd hopeless(2, 2);
  hopeless << 25.0, 40.0, 40.0, 25.0;
  try {
    factorize_covariance(links, hopeless, sp);
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    REQUIRE(e.last_estimate().has_value());
    CHECK(*e.last_estimate() < 0.0);  // smallest eigenvalue
  }
}

TEST_CASE("sampling is deterministic and shard-independent") {
  const ShadowingParams sp = campaign();
  const JointFadingModel model = build_joint_fading(chain3(), sp);
  const auto all = sample_fading(model, 10, 99);
  const auto again = sample_fading(model, 10, 99);
  const auto head = sample_fading(model, 4, 99);
  const auto tail = sample_fading(model, 6, 99, 4);
  for (int s = 0; s < 10; ++s) {
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(all[static_cast<std::size_t>(s)].z_db[k] ==
            again[static_cast<std::size_t>(s)].z_db[k]);
      const double expected = s < 4 ? head[static_cast<std::size_t>(s)].z_db[k]
                                    : tail[static_cast<std::size_t>(s - 4)].z_db[k];
      CHECK(all[static_cast<std::size_t>(s)].z_db[k] == expected);
    }
  }
  CHECK_THROWS_AS(sample_fading(model, 0, 1), ArgumentError);
}

TEST_CASE("sample moments match the joint covariance") {
  const ShadowingParams sp = campaign();
  const JointFadingModel model = build_joint_fading(chain3(), sp);
  const int n = 100000;
  const auto samples = sample_fading(model, n, 12345);
  const int dim = 3;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(dim, dim);
  for (const FadingSample& s : samples) {
    for (int i = 0; i < dim; ++i) {
      mean[i] += s.z_db[static_cast<std::size_t>(i)];
      for (int j = 0; j < dim; ++j) {
        second(i, j) += s.z_db[static_cast<std::size_t>(i)] *
                        s.z_db[static_cast<std::size_t>(j)];
      }
    }
  }
  mean /= n;
  second /= n;
  for (int i = 0; i < dim; ++i) {
    // Mean zero within 4 standard errors.
    CHECK(std::abs(mean[i]) < 4.0 * std::sqrt(model.sigma(i, i) / n));
    for (int j = 0; j < dim; ++j) {
      const double cov_hat = second(i, j) - mean[i] * mean[j];
      const double se = std::sqrt((model.sigma(i, i) * model.sigma(j, j) +
                                   model.sigma(i, j) * model.sigma(i, j)) /
                                  n);
      CHECK(std::abs(cov_hat - model.sigma(i, j)) < 3.5 * se);
    }
  }
}

TEST_CASE("marginals pass a Kolmogorov-Smirnov normality check") {
  const ShadowingParams sp = campaign();
  const JointFadingModel model = build_joint_fading(chain3(), sp);
  const int n = 10000;
  const auto samples = sample_fading(model, n, 777);
  const double sigma = std::sqrt(sp.total_var_db2);
  for (int link = 0; link < 3; ++link) {
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n));
    for (const FadingSample& s : samples) {
      xs.push_back(s.z_db[static_cast<std::size_t>(link)] / sigma);
    }
    const double d = testutil::ks_distance(std::move(xs), testutil::std_normal_cdf);
    CHECK(d < testutil::ks_critical(0.01, static_cast<std::size_t>(n)));
  }
}

TEST_CASE("i.i.d. reduction: zero shadowing variance kills cross correlation") {
  ShadowingParams sp = campaign();
  sp.shadow_var_db2 = 0.0;
  const JointFadingModel model = build_joint_fading(chain3(), sp);
  const int n = 50000;
  const auto samples = sample_fading(model, n, 31337);
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      double sxy = 0.0, sxx = 0.0, syy = 0.0;
      for (const FadingSample& s : samples) {
        sxy += s.z_db[static_cast<std::size_t>(a)] * s.z_db[static_cast<std::size_t>(b)];
        sxx += s.z_db[static_cast<std::size_t>(a)] * s.z_db[static_cast<std::size_t>(a)];
        syy += s.z_db[static_cast<std::size_t>(b)] * s.z_db[static_cast<std::size_t>(b)];
      }
      const double rho = sxy / std::sqrt(sxx * syy);
      CHECK(std::abs(rho) < 3.0 / std::sqrt(static_cast<double>(n)));
    }
  }
}

TEST_CASE("received power is the mean curve minus the fading draw") {
  const Deployment dep = chain3();
  const PathLossParams p = pathloss();
  const auto links = enumerate_links(dep);

  FadingSample zero;
  zero.z_db = {0.0, 0.0, 0.0};
  const auto base = received_power_dbm(dep, p, links, zero);
  for (std::size_t k = 0; k < links.size(); ++k) {
    CHECK(base[k] == doctest::Approx(mean_power_dbm(p, dep.link_distance(links[k]))));
  }

  PathLossParams shifted = p;
  shifted.intercept_dbm += 7.5;
  const auto up = received_power_dbm(dep, shifted, links, zero);
  for (std::size_t k = 0; k < links.size(); ++k) {
    CHECK(up[k] - base[k] == doctest::Approx(7.5));
  }

  FadingSample bad;
  bad.z_db = {0.0};
  CHECK_THROWS_AS(received_power_dbm(dep, p, links, bad), ArgumentError);
}

TEST_CASE("connectivity graph thresholds and reachability") {
  const Deployment dep = chain3();
  const auto links = enumerate_links(dep);
  const std::vector<double> power = {-60.0, -80.0, -70.0};  // links 0-1, 0-2, 1-2

  const ConnectivityGraph all(dep.node_count(), links, power, -1e9);
  CHECK(all.edge(0, 2));
  CHECK(all.connected(0, 2));

  const ConnectivityGraph none(dep.node_count(), links, power, 1e9);
  CHECK_FALSE(none.edge(0, 1));
  CHECK_FALSE(none.connected(0, 2));

  // Only the two short hops survive a -75 dBm threshold: 0-2 via node 1.
  const ConnectivityGraph mid(dep.node_count(), links, power, -75.0);
  CHECK(mid.edge(0, 1));
  CHECK(mid.edge(1, 2));
  CHECK_FALSE(mid.edge(0, 2));
  CHECK(mid.connected(0, 2));
}

TEST_CASE("an edge at the exact mean power is present half the time") {
  const Deployment dep("pair", {{0, 0}, {1.22, 0}});
  const PathLossParams p = pathloss();
  const ShadowingParams sp = campaign();
  const JointFadingModel model = build_joint_fading(dep, sp);
  const int n = 10000;
  const auto samples = sample_fading(model, n, 4242);
  const double gamma = mean_power_dbm(p, 1.22);
  int present = 0;
  const auto links = enumerate_links(dep);
  for (const FadingSample& s : samples) {
    const auto power = received_power_dbm(dep, p, links, s);
    const ConnectivityGraph g(2, links, power, gamma);
    if (g.edge(0, 1)) ++present;
  }
  const double frac = static_cast<double>(present) / n;
  const double se = std::sqrt(0.25 / n);
  CHECK(std::abs(frac - 0.5) < 3.0 * se);
}

TEST_CASE("realization CSV embeds the model parameters") {
  const ShadowingParams sp = campaign();
  const PathLossParams p = pathloss();
  const Deployment dep("pair", {{0, 0}, {1.22, 0}});
  const JointFadingModel model = build_joint_fading(dep, sp);
  const auto samples = sample_fading(model, 2, 5);
  std::ostringstream out;
  write_realizations_csv(out, dep, p, model, samples, 5);
  const std::string text = out.str();
  CHECK(text.find("# seed = 5") != std::string::npos);
  CHECK(text.find("# space_constant_m = 0.21") != std::string::npos);
  CHECK(text.find("sample_index,i,j,z_db,p_dbm") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 8);  // 5 header + 1 column + 2 rows
}

TEST_CASE("prebuilt model synthesis matches the convenience overload") {
  const Deployment dep("tri", {{0, 0}, {1.22, 0}, {0, 1.22}});
  CampaignSpec spec;
  spec.n_experiments = 2;
  spec.n_frequencies = 3;
  spec.path_loss.sigma_db = 5.0;
  spec.shadowing.space_constant_m = 0.21;
  spec.shadowing.total_var_db2 = 25.0;
  spec.shadowing.shadow_var_db2 = 7.25;
  spec.seed = 11;
  const JointFadingModel model = build_joint_fading(dep, spec.shadowing, spec.quad);
  const MeasurementEnsemble a = synthesize_campaign(dep, spec);
  const MeasurementEnsemble b = synthesize_campaign(dep, spec, model);
  REQUIRE(a.records().size() == b.records().size());
  for (std::size_t i = 0; i < a.records().size(); ++i) {
    CHECK(a.records()[i].rss_dbm == b.records()[i].rss_dbm);
  }
  const Deployment other("pair", {{0, 0}, {1, 0}});
  CHECK_THROWS_AS(synthesize_campaign(other, spec, model), ArgumentError);
}
