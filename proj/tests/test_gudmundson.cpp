// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "corrshadow/gudmundson.hpp"
#include "testutil.hpp"

using namespace corrshadow;

TEST_CASE("gudmundson correlation basics") {
  GudmundsonParams g;
  g.corr_at_ref = 0.5;
  g.ref_distance_m = 1.22;
  CHECK(gudmundson_correlation(g, {1, 1}, {1, 1}) == doctest::Approx(1.0));
  CHECK(gudmundson_correlation(g, {0, 0}, {1.22, 0}) == doctest::Approx(0.5));
  CHECK(gudmundson_correlation(g, {0, 0}, {2.44, 0}) == doctest::Approx(0.25));
}

TEST_CASE("gudmundson correlation is blind to the common node position") {
  GudmundsonParams g;
  g.corr_at_ref = 0.3;
  g.ref_distance_m = 1.0;
  // Only the two free endpoints enter; moving the shared node cannot matter
  // because it never appears in the expression.
  const Point xi{0.0, 0.0};
  const Point xj{2.44, 0.0};
  const double base = gudmundson_correlation(g, xi, xj);
  // Same endpoint pair translated rigidly.
  const double moved = gudmundson_correlation(g, {5.0, -3.0}, {7.44, -3.0});
  CHECK(base == doctest::Approx(moved));
}

TEST_CASE("fit recovers exact exponential data and folds the amplitude") {
  GudmundsonParams truth;
  truth.corr_at_ref = 0.31;
  truth.ref_distance_m = 1.22;
  truth.amplitude = 0.42;
  std::vector<GudmundsonObservation> obs;
  for (double d : {1.22, 1.725, 2.44, 2.73, 3.45}) {
    obs.push_back({"g", truth.amplitude * std::pow(truth.corr_at_ref, d / 1.22), d});
  }
  const GudmundsonFit fit = fit_gudmundson(obs, 1.22);
  CHECK(fit.params.corr_at_ref == doctest::Approx(0.31).epsilon(1e-9));
  CHECK(fit.params.amplitude == doctest::Approx(0.42).epsilon(1e-9));
  CHECK(fit.n_used == 5);
  CHECK(fit.excluded.empty());
  CHECK(gudmundson_prediction(fit.params, 2.44) ==
        doctest::Approx(0.42 * 0.31 * 0.31).epsilon(1e-9));
}

TEST_CASE("non-positive correlations are excluded, not clamped") {
  std::vector<GudmundsonObservation> obs = {
      {"a", 0.30, 1.22}, {"b", -0.05, 1.725}, {"c", 0.10, 2.44}, {"d", 0.0, 3.0}};
  const GudmundsonFit fit = fit_gudmundson(obs, 1.22);
  CHECK(fit.n_used == 2);
  REQUIRE(fit.excluded.size() == 2);
  CHECK(fit.excluded[0] == "b");
  CHECK(fit.excluded[1] == "d");
  CHECK(fit.params.corr_at_ref > 0.0);
  CHECK(fit.params.corr_at_ref < 1.0);
}

TEST_CASE("fit failures") {
  CHECK_THROWS_AS(fit_gudmundson({{"a", -0.1, 1.0}, {"b", -0.2, 2.0}}, 1.0), DataError);
  CHECK_THROWS_AS(fit_gudmundson({{"a", 0.2, 1.0}}, 1.0), DataError);
  // Correlation growing with distance cannot give a valid decay constant.
  CHECK_THROWS_AS(fit_gudmundson({{"a", 0.1, 1.0}, {"b", 0.4, 2.0}}, 1.0), DataError);
  // All separations equal: rank deficient.
  CHECK_THROWS_AS(fit_gudmundson({{"a", 0.1, 1.0}, {"b", 0.4, 1.0}}, 1.0), DataError);
}

TEST_CASE("fitted decay stays a valid correlation on decaying data") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> noise(0.8, 1.25);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<GudmundsonObservation> obs;
    for (double d : {1.22, 1.725, 2.44, 3.45}) {
      obs.push_back({"g", 0.5 * std::exp(-d / 1.5) * noise(rng), d});
    }
    const GudmundsonFit fit = fit_gudmundson(obs, 1.22);
    CHECK(fit.params.corr_at_ref > 0.0);
    CHECK(fit.params.corr_at_ref < 1.0);
  }
}

TEST_CASE("model agreement comparison") {
  const std::vector<double> measured = {0.33, 0.21, 0.23, 0.05, 0.17, -0.05};
  // Perfect proposed predictions give agreement 1.
  const std::vector<double> proposed = measured;
  std::vector<std::optional<double>> gud = {0.13, 0.04, 0.13, 0.04, std::nullopt,
                                            std::nullopt};
  const ModelAgreement agreement = compare_models(measured, proposed, gud);
  CHECK(agreement.proposed == doctest::Approx(1.0));
  CHECK(agreement.n_proposed == 6);
  CHECK(agreement.n_gudmundson == 4);
  CHECK(agreement.gudmundson < 1.0);

  CHECK_THROWS_AS(compare_models({0.1}, {0.1, 0.2}, {{}}), ArgumentError);
}
