// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "corrshadow/geometry.hpp"
#include "corrshadow/params.hpp"

namespace corrshadow {

struct FieldGrid {
  Point origin;
  double h = 0.0;  // node spacing (meters)
  int nx = 0;      // nodes per row
  int ny = 0;      // rows

  double width() const { return (nx - 1) * h; }
  double height() const { return (ny - 1) * h; }
  bool contains(Point p) const {
    return p.x >= origin.x && p.y >= origin.y && p.x <= origin.x + width() &&
           p.y <= origin.y + height();
  }
};

/// One realization of the spatial loss field sampled at grid nodes.
/// Values carry the line-integral units (dB per sqrt-meter).
class FieldRealization {
 public:
  FieldRealization(FieldGrid grid, std::vector<double> values, std::uint64_t seed,
                   std::uint64_t index);

  const FieldGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t index() const { return index_; }

  double at_node(int ix, int iy) const {
    return values_[static_cast<std::size_t>(iy) * grid_.nx + ix];
  }

  /// Bilinear interpolation; the point must lie inside the grid.
  double value_at(Point p) const;

 private:
  FieldGrid grid_;
  std::vector<double> values_;
  std::uint64_t seed_;
  std::uint64_t index_;
};

/// Gaussian field sampler with the model's stationary exponential
/// covariance.  Large grids are synthesized by circulant embedding (two
/// independent realizations per FFT); tiny grids fall back to a dense
/// Cholesky factor of the node covariance.  Deterministic given
/// (seed, index).
class FieldSampler {
 public:
  FieldSampler(const FieldGrid& grid, const ShadowingParams& sp);
  ~FieldSampler();
  FieldSampler(const FieldSampler&) = delete;
  FieldSampler& operator=(const FieldSampler&) = delete;

  FieldRealization sample(std::uint64_t seed, std::uint64_t index) const;

  /// Fraction of spectral mass clipped to keep the embedding non-negative
  /// definite (diagnostic; tiny for adequately padded embeddings).
  double clipped_spectrum_fraction() const;
  bool uses_dense_path() const;

  /// Largest allowed grid, as a resource guard.
  static constexpr long kMaxCells = 16L * 1024 * 1024;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Resolution guard used by samplers and commands: h must not exceed
/// delta / 5.
void check_field_resolution(const FieldGrid& grid, const ShadowingParams& sp);

/// Discretized line integral of the field along the segment, scaled by
/// 1/sqrt(length); midpoint rule with step <= h/2.
double shadowing_line_integral(const FieldRealization& field, const Segment& seg);

struct EmpiricalCorrelation {
  double rho = 0.0;
  double stderr_est = 0.0;
  int n = 0;
};

/// Sample correlation of the two links' line-integral shadowing over
/// n_realizations shared field draws.
EmpiricalCorrelation empirical_pair_correlation(const ShadowingParams& sp,
                                                const Segment& a, const Segment& b,
                                                int n_realizations, std::uint64_t seed);

/// Batch form: one field ensemble shared by many segment pairs.
std::vector<EmpiricalCorrelation> empirical_pair_correlations(
    const ShadowingParams& sp, const std::vector<std::pair<Segment, Segment>>& pairs,
    int n_realizations, std::uint64_t seed, double h_override = 0.0);

/// Flat little-endian float64 dump, row-major from the grid origin.
void write_field_binary(const std::string& path, const FieldRealization& field);
/// JSON sidecar describing the dump (origin, h, dims, seed, index).
std::string field_sidecar_json(const FieldRealization& field);

}  // namespace corrshadow
