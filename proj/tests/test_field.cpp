// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <array>
#include <cmath>
#include <numeric>

#include "corrshadow/covariance.hpp"
#include "corrshadow/field.hpp"
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

FieldGrid small_grid(double h) {
  // Covers a 1.22 m segment with a five space-constant margin.
  FieldGrid g;
  g.origin = {-1.05, -1.05};
  g.h = h;
  g.nx = static_cast<int>(std::ceil((1.22 + 2.1) / h)) + 1;
  g.ny = g.nx;
  return g;
}

}  // namespace

TEST_CASE("field sampling is deterministic per (seed, index)") {
  const ShadowingParams sp = campaign();
  const FieldGrid grid = small_grid(sp.space_constant_m / 5.0);
  FieldSampler sampler(grid, sp);
  CHECK_FALSE(sampler.uses_dense_path());
  CHECK(sampler.clipped_spectrum_fraction() < 1e-6);
  const FieldRealization a = sampler.sample(42, 7);
  const FieldRealization b = sampler.sample(42, 7);
  REQUIRE(a.values().size() == b.values().size());
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    CHECK(a.values()[i] == b.values()[i]);
  }
  const FieldRealization c = sampler.sample(42, 8);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    if (a.values()[i] != c.values()[i]) any_diff = true;
  }
  CHECK(any_diff);
}

TEST_CASE("field statistics match the kernel") {
  const ShadowingParams sp = campaign();
  const FieldGrid grid = small_grid(sp.space_constant_m / 5.0);
  FieldSampler sampler(grid, sp);

  const double var_expected = sp.shadow_var_db2 / (2.0 * sp.space_constant_m);
  const int lag = 5;  // five cells of delta/5 = one space constant
  const int n_real = 500;

  double sum = 0.0;
  long n_vals = 0;
  double s00 = 0.0, s11 = 0.0, s01 = 0.0;
  long n_pairs = 0;
  for (int r = 0; r < n_real; ++r) {
    const FieldRealization f = sampler.sample(2024, static_cast<std::uint64_t>(r));
    for (double v : f.values()) sum += v;
    n_vals += static_cast<long>(f.values().size());
    for (int j = 0; j < grid.ny; j += 3) {
      for (int i = 0; i + lag < grid.nx; i += 3) {
        const double a = f.at_node(i, j);
        const double b = f.at_node(i + lag, j);
        s00 += a * a;
        s11 += b * b;
        s01 += a * b;
        ++n_pairs;
      }
    }
  }
  // Zero mean within four standard errors (samples are spatially
  // correlated, so bound with the generous per-realization scale).
  const double mean = sum / static_cast<double>(n_vals);
  const double mean_se =
      std::sqrt(var_expected / n_real);  // one effective value per patch is conservative
  CHECK(std::abs(mean) < 4.0 * mean_se);

  // Lag-0 variance matches the kernel value.
  const double var0 = s00 / static_cast<double>(n_pairs);
  CHECK(var0 == doctest::Approx(var_expected).epsilon(0.05));

  // Correlation at one space constant lag is exp(-1).
  const double corr = s01 / std::sqrt(s00 * s11);
  CHECK(corr == doctest::Approx(std::exp(-1.0)).epsilon(0.08));
}

TEST_CASE("dense path used for tiny grids and matches the kernel variance") {
  ShadowingParams sp = campaign();
  FieldGrid grid;
  grid.origin = {0, 0};
  grid.h = sp.space_constant_m / 5.0;
  grid.nx = 20;
  grid.ny = 20;
  FieldSampler sampler(grid, sp);
  CHECK(sampler.uses_dense_path());
  double s2 = 0.0;
  const int n_real = 400;
  for (int r = 0; r < n_real; ++r) {
    const FieldRealization f = sampler.sample(9, static_cast<std::uint64_t>(r));
    const double v = f.at_node(10, 10);
    s2 += v * v;
  }
  const double var_expected = sp.shadow_var_db2 / (2.0 * sp.space_constant_m);
  CHECK(s2 / n_real == doctest::Approx(var_expected).epsilon(0.25));
}

TEST_CASE("resolution and resource guards") {
  ShadowingParams sp = campaign();
  FieldGrid coarse;
  coarse.origin = {0, 0};
  coarse.h = sp.space_constant_m;  // way above delta / 5
  coarse.nx = 16;
  coarse.ny = 16;
  CHECK_THROWS_AS(FieldSampler(coarse, sp), ArgumentError);

  FieldGrid huge;
  huge.origin = {0, 0};
  huge.h = sp.space_constant_m / 5.0;
  huge.nx = 10000;
  huge.ny = 10000;
  CHECK_THROWS_AS(FieldSampler(huge, sp), ResourceError);
}

TEST_CASE("line integral on constant and zero fields") {
  FieldGrid grid;
  grid.origin = {0, 0};
  grid.h = 0.04;
  grid.nx = 64;
  grid.ny = 64;
  const std::size_t n = static_cast<std::size_t>(grid.nx) * grid.ny;

  const FieldRealization zero(grid, std::vector<double>(n, 0.0), 0, 0);
  const Segment seg{{0.2, 0.3}, {1.4, 0.3}};
  CHECK(shadowing_line_integral(zero, seg) == 0.0);

  const double c = 2.5;
  const FieldRealization constant(grid, std::vector<double>(n, c), 0, 0);
  // Normalization by sqrt(length) leaves c * sqrt(d).
  CHECK(shadowing_line_integral(constant, seg) ==
        doctest::Approx(c * std::sqrt(seg.length())).epsilon(1e-9));

  const Segment outside{{0.2, 0.3}, {9.0, 0.3}};
  CHECK_THROWS_AS(shadowing_line_integral(constant, outside), ArgumentError);
}

TEST_CASE("line-integral variance matches the closed form") {
  const ShadowingParams sp = campaign();
  const FieldGrid grid = small_grid(sp.space_constant_m / 5.0);
  FieldSampler sampler(grid, sp);
  const Segment seg{{0, 0}, {1.22, 0}};
  const int n_real = 2000;
  double s2 = 0.0;
  for (int r = 0; r < n_real; ++r) {
    const FieldRealization f = sampler.sample(77, static_cast<std::uint64_t>(r));
    const double x = shadowing_line_integral(f, seg);
    s2 += x * x;
  }
  const double var_hat = s2 / n_real;
  const double var_closed = link_shadowing_variance(sp, seg.length());
  // Sample variance of a Gaussian: se ~ var * sqrt(2/n).
  const double se = var_closed * std::sqrt(2.0 / n_real);
  CHECK(std::abs(var_hat - var_closed) < 3.0 * se);
}

namespace {

// Exact second moment of the discretized line integral: the kernel pushed
// through the bilinear interpolation and the midpoint sum.  Isolates the
// discretization error from sampling noise.
double discretized_variance(double h, const Segment& seg, const ShadowingParams& sp) {
  const double len = seg.length();
  const int n = static_cast<int>(std::ceil(len / (h / 2.0)));
  const double ds = len / n;
  struct Weighted {
    Point node;
    double w;
  };
  auto stencil = [&](Point p) {
    const double fx = p.x / h;
    const double fy = p.y / h;
    const double ix = std::floor(fx);
    const double iy = std::floor(fy);
    const double tx = fx - ix;
    const double ty = fy - iy;
    return std::array<Weighted, 4>{
        Weighted{{ix * h, iy * h}, (1 - tx) * (1 - ty)},
        Weighted{{(ix + 1) * h, iy * h}, tx * (1 - ty)},
        Weighted{{ix * h, (iy + 1) * h}, (1 - tx) * ty},
        Weighted{{(ix + 1) * h, (iy + 1) * h}, tx * ty}};
  };
  auto kernel = [&](double r) {
    return sp.shadow_var_db2 / (2.0 * sp.space_constant_m) *
           std::exp(-r / sp.space_constant_m);
  };
  std::vector<std::array<Weighted, 4>> stencils;
  for (int k = 0; k < n; ++k) stencils.push_back(stencil(seg.at((k + 0.5) * ds)));
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      double cov = 0.0;
      for (const Weighted& a : stencils[static_cast<std::size_t>(k)]) {
        for (const Weighted& b : stencils[static_cast<std::size_t>(l)]) {
          cov += a.w * b.w * kernel(distance(a.node, b.node));
        }
      }
      acc += cov * ds * ds;
    }
  }
  return acc / len;
}

}  // namespace

TEST_CASE("halving the grid step changes the integral variance by under 2%") {
  const ShadowingParams sp = campaign();
  const Segment seg{{0, 0}, {1.22, 0}};
  const double coarse = discretized_variance(sp.space_constant_m / 5.0, seg, sp);
  const double fine = discretized_variance(sp.space_constant_m / 10.0, seg, sp);
  CHECK(std::abs(fine - coarse) / coarse < 0.02);
  // And both sit close to the continuous closed form.
  const double closed = link_shadowing_variance(sp, seg.length());
  CHECK(std::abs(coarse - closed) / closed < 0.04);
  CHECK(std::abs(fine - closed) / closed < 0.02);
}

TEST_CASE("empirical pair correlation: self, far, and analytic agreement") {
  const ShadowingParams sp = campaign();
  const Segment a{{0, 0}, {1.22, 0}};
  const Segment b{{0, 0}, {2.44, 0}};
  const Segment far{{0, 4.0}, {1.22, 4.0}};

  const auto res = empirical_pair_correlations(sp, {{a, a}, {a, far}, {a, b}}, 600, 31);
  CHECK(res[0].rho == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(res[1].rho) < 3.0 * res[1].stderr_est);

  const double analytic = pair_shadowing_correlation(sp.space_constant_m, a, b);
  CHECK(std::abs(res[2].rho - analytic) < 3.0 * res[2].stderr_est);

  CHECK_THROWS_AS(empirical_pair_correlation(sp, a, b, 10, 1), ArgumentError);
}

TEST_CASE("field dump and sidecar") {
  const ShadowingParams sp = campaign();
  FieldGrid grid;
  grid.origin = {0, 0};
  grid.h = sp.space_constant_m / 5.0;
  grid.nx = 24;
  grid.ny = 12;
  FieldSampler sampler(grid, sp);
  const FieldRealization f = sampler.sample(3, 1);

  testutil::TempFile dump("field.f64");
  write_field_binary(dump.path(), f);
  const std::string raw = testutil::slurp(dump.path());
  REQUIRE(raw.size() == f.values().size() * sizeof(double));
  const double* vals = reinterpret_cast<const double*>(raw.data());
  CHECK(vals[0] == f.values()[0]);
  CHECK(vals[f.values().size() - 1] == f.values().back());

  const std::string sidecar = field_sidecar_json(f);
  CHECK(sidecar.find("\"seed\": 3") != std::string::npos);
  CHECK(sidecar.find("\"dims\"") != std::string::npos);
}
