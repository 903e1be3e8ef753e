// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#include "corrshadow/field.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <mutex>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <fftw3.h>

#include <nlohmann/json.hpp>

#include "corrshadow/rng.hpp"

namespace corrshadow {

namespace {

double kernel(const ShadowingParams& sp, double r) {
  return sp.shadow_var_db2 / (2.0 * sp.space_constant_m) *
         std::exp(-r / sp.space_constant_m);
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

std::mutex& fftw_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

FieldRealization::FieldRealization(FieldGrid grid, std::vector<double> values,
                                   std::uint64_t seed, std::uint64_t index)
    : grid_(grid), values_(std::move(values)), seed_(seed), index_(index) {
  if (grid_.nx < 2 || grid_.ny < 2 || !(grid_.h > 0.0))
    throw ArgumentError("field grid needs h > 0 and at least 2x2 nodes");
  if (values_.size() != static_cast<std::size_t>(grid_.nx) * grid_.ny)
    throw ArgumentError("field value count does not match the grid");
}

double FieldRealization::value_at(Point p) const {
  if (!grid_.contains(p))
    throw ArgumentError("point lies outside the sampled field extent");
  const double fx = (p.x - grid_.origin.x) / grid_.h;
  const double fy = (p.y - grid_.origin.y) / grid_.h;
  int ix = static_cast<int>(fx);
  int iy = static_cast<int>(fy);
  ix = std::min(ix, grid_.nx - 2);
  iy = std::min(iy, grid_.ny - 2);
  const double tx = fx - ix;
  const double ty = fy - iy;
  const double v00 = at_node(ix, iy);
  const double v10 = at_node(ix + 1, iy);
  const double v01 = at_node(ix, iy + 1);
  const double v11 = at_node(ix + 1, iy + 1);
  return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 +
         tx * ty * v11;
}

struct FieldSampler::Impl {
  FieldGrid grid;
  ShadowingParams sp;
  bool dense = false;
  double clipped_fraction = 0.0;

  // Circulant embedding state.
  int mx = 0, my = 0;
  std::vector<double> amplitude;  // sqrt(lambda / (mx*my)), clipped at zero
  fftw_plan plan = nullptr;
  fftw_complex* buffer = nullptr;

  // Dense path state.
  Eigen::MatrixXd chol;

  ~Impl() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    if (plan != nullptr) fftw_destroy_plan(plan);
    if (buffer != nullptr) fftw_free(buffer);
  }

  void build_dense() {
    const int n = grid.nx * grid.ny;
    Eigen::MatrixXd cov(n, n);
    for (int a = 0; a < n; ++a) {
      const Point pa{grid.origin.x + (a % grid.nx) * grid.h,
                     grid.origin.y + (a / grid.nx) * grid.h};
      for (int b = a; b < n; ++b) {
        const Point pb{grid.origin.x + (b % grid.nx) * grid.h,
                       grid.origin.y + (b / grid.nx) * grid.h};
        const double v = kernel(sp, distance(pa, pb));
        cov(a, b) = v;
        cov(b, a) = v;
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
      // Exact stationary covariance can be borderline at machine precision.
      cov.diagonal().array() += 1e-10 * kernel(sp, 0.0);
      llt.compute(cov);
      if (llt.info() != Eigen::Success)
        throw NumericError("dense field covariance is not positive definite");
    }
    chol = llt.matrixL();
    dense = true;
  }

  // One attempt at an embedding of the given size; returns the clipped
  // spectral fraction.
  double build_embedding(int try_mx, int try_my) {
    mx = try_mx;
    my = try_my;
    const std::size_t m = static_cast<std::size_t>(mx) * my;
    std::vector<std::complex<double>> cov(m);
    for (int q = 0; q < my; ++q) {
      const double dy = grid.h * std::min(q, my - q);
      for (int p = 0; p < mx; ++p) {
        const double dx = grid.h * std::min(p, mx - p);
        cov[static_cast<std::size_t>(q) * mx + p] = kernel(sp, std::hypot(dx, dy));
      }
    }
    {
      std::lock_guard<std::mutex> lock(fftw_mutex());
      if (plan != nullptr) fftw_destroy_plan(plan);
      if (buffer != nullptr) fftw_free(buffer);
      buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
      if (buffer == nullptr) throw ResourceError("field embedding allocation failed");
      plan = fftw_plan_dft_2d(my, mx, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
      if (plan == nullptr) throw NumericError("FFT plan creation failed");
    }
    for (std::size_t i = 0; i < m; ++i) {
      buffer[i][0] = cov[i].real();
      buffer[i][1] = 0.0;
    }
    fftw_execute(plan);
    double pos = 0.0, neg = 0.0;
    amplitude.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double lambda = buffer[i][0];
      if (lambda > 0.0) {
        pos += lambda;
        amplitude[i] = std::sqrt(lambda / static_cast<double>(m));
      } else {
        neg -= lambda;
      }
    }
    return pos > 0.0 ? neg / pos : 1.0;
  }

  void build() {
    const long cells = static_cast<long>(grid.nx) * grid.ny;
    if (cells <= 64 * 64) {
      build_dense();
      return;
    }
    int try_mx = next_pow2(2 * grid.nx);
    int try_my = next_pow2(2 * grid.ny);
    clipped_fraction = build_embedding(try_mx, try_my);
    if (clipped_fraction > 1e-6) {
      clipped_fraction = build_embedding(2 * try_mx, 2 * try_my);
    }
  }
};

FieldSampler::FieldSampler(const FieldGrid& grid, const ShadowingParams& sp)
    : impl_(std::make_unique<Impl>()) {
  sp.validate();
  if (grid.nx < 2 || grid.ny < 2 || !(grid.h > 0.0))
    throw ArgumentError("field grid needs h > 0 and at least 2x2 nodes");
  const long cells = static_cast<long>(grid.nx) * grid.ny;
  if (cells > kMaxCells) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "field grid of %ld cells exceeds the %ld cell budget", cells,
                  kMaxCells);
    throw ResourceError(buf);
  }
  if (!(sp.shadow_var_db2 > 0.0))
    throw ArgumentError("field sampling needs a positive shadowing variance");
  check_field_resolution(grid, sp);
  impl_->grid = grid;
  impl_->sp = sp;
  impl_->build();
}

FieldSampler::~FieldSampler() = default;

double FieldSampler::clipped_spectrum_fraction() const { return impl_->clipped_fraction; }

bool FieldSampler::uses_dense_path() const { return impl_->dense; }

FieldRealization FieldSampler::sample(std::uint64_t seed, std::uint64_t index) const {
  const FieldGrid& grid = impl_->grid;
  const std::size_t n = static_cast<std::size_t>(grid.nx) * grid.ny;
  std::vector<double> values(n);

  if (impl_->dense) {
    Rng rng(seed, index);
    Eigen::VectorXd g(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) g[static_cast<Eigen::Index>(i)] = rng.normal();
    const Eigen::VectorXd z = impl_->chol * g;
    for (std::size_t i = 0; i < n; ++i) values[i] = z[static_cast<Eigen::Index>(i)];
    return FieldRealization(grid, std::move(values), seed, index);
  }

  // Two independent fields per transform: (seed, pair) drives the spectrum
  // noise, index selects the real or imaginary part.
  const std::uint64_t pair = index / 2;
  const bool imag_part = (index % 2) == 1;
  const std::size_t m = static_cast<std::size_t>(impl_->mx) * impl_->my;

  static std::mutex sample_mu;
  std::lock_guard<std::mutex> lock(sample_mu);
  Rng rng(seed, 0x0f1e2d3c00000000ULL ^ pair);
  for (std::size_t i = 0; i < m; ++i) {
    const double a = rng.normal();
    const double b = rng.normal();
    impl_->buffer[i][0] = impl_->amplitude[i] * a;
    impl_->buffer[i][1] = impl_->amplitude[i] * b;
  }
  fftw_execute(impl_->plan);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const std::size_t src = static_cast<std::size_t>(j) * impl_->mx + i;
      values[static_cast<std::size_t>(j) * grid.nx + i] =
          imag_part ? impl_->buffer[src][1] : impl_->buffer[src][0];
    }
  }
  return FieldRealization(grid, std::move(values), seed, index);
}

void check_field_resolution(const FieldGrid& grid, const ShadowingParams& sp) {
  if (grid.h > sp.space_constant_m / 5.0 + 1e-12) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "field resolution too coarse: h = %g m but the space constant %g m "
                  "requires h <= %g m",
                  grid.h, sp.space_constant_m, sp.space_constant_m / 5.0);
    throw ArgumentError(buf);
  }
}

double shadowing_line_integral(const FieldRealization& field, const Segment& seg) {
  const double len = seg.length();
  if (!(len > 0.0)) throw ArgumentError("segment must have positive length");
  if (!field.grid().contains(seg.a) || !field.grid().contains(seg.b))
    throw ArgumentError("segment exits the sampled field extent");
  const double max_step = field.grid().h / 2.0;
  const int n = std::max(1, static_cast<int>(std::ceil(len / max_step)));
  const double ds = len / n;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += field.value_at(seg.at((k + 0.5) * ds));
  }
  return sum * ds / std::sqrt(len);
}

namespace {

struct Accumulator {
  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  void add(double x, double y) {
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  EmpiricalCorrelation finish(int n) const {
    const double mx = sx / n;
    const double my = sy / n;
    const double vx = sxx / n - mx * mx;
    const double vy = syy / n - my * my;
    const double cxy = sxy / n - mx * my;
    EmpiricalCorrelation out;
    out.n = n;
    out.rho = cxy / std::sqrt(vx * vy);
    out.stderr_est = (1.0 - out.rho * out.rho) / std::sqrt(static_cast<double>(n - 1));
    return out;
  }
};

}  // namespace

std::vector<EmpiricalCorrelation> empirical_pair_correlations(
    const ShadowingParams& sp, const std::vector<std::pair<Segment, Segment>>& pairs,
    int n_realizations, std::uint64_t seed, double h_override) {
  if (n_realizations < 100)
    throw ArgumentError("empirical correlation needs at least 100 realizations");
  if (pairs.empty()) throw ArgumentError("no segment pairs given");

  double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
  for (const auto& [a, b] : pairs) {
    for (const Point& p : {a.a, a.b, b.a, b.b}) {
      min_x = std::min(min_x, p.x);
      min_y = std::min(min_y, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
  }
  const double margin = 5.0 * sp.space_constant_m;
  const double h = h_override > 0.0 ? h_override : sp.space_constant_m / 5.0;
  FieldGrid grid;
  grid.origin = {min_x - margin, min_y - margin};
  grid.h = h;
  grid.nx = static_cast<int>(std::ceil((max_x - min_x + 2 * margin) / h)) + 1;
  grid.ny = static_cast<int>(std::ceil((max_y - min_y + 2 * margin) / h)) + 1;

  FieldSampler sampler(grid, sp);
  std::vector<Accumulator> acc(pairs.size());
  for (int r = 0; r < n_realizations; ++r) {
    const FieldRealization field = sampler.sample(seed, static_cast<std::uint64_t>(r));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const double x = shadowing_line_integral(field, pairs[k].first);
      const double y = shadowing_line_integral(field, pairs[k].second);
      acc[k].add(x, y);
    }
  }
  std::vector<EmpiricalCorrelation> out(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) out[k] = acc[k].finish(n_realizations);
  return out;
}

EmpiricalCorrelation empirical_pair_correlation(const ShadowingParams& sp,
                                                const Segment& a, const Segment& b,
                                                int n_realizations, std::uint64_t seed) {
  return empirical_pair_correlations(sp, {{a, b}}, n_realizations, seed).front();
}

void write_field_binary(const std::string& path, const FieldRealization& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot open field dump for writing: " + path);
  out.write(reinterpret_cast<const char*>(field.values().data()),
            static_cast<std::streamsize>(field.values().size() * sizeof(double)));
  if (!out) throw ResourceError("field dump write failed: " + path);
}

std::string field_sidecar_json(const FieldRealization& field) {
  nlohmann::json j;
  j["origin"] = {field.grid().origin.x, field.grid().origin.y};
  j["h_m"] = field.grid().h;
  j["dims"] = {field.grid().nx, field.grid().ny};
  j["seed"] = field.seed();
  j["index"] = field.index();
  j["layout"] = "row-major float64, x fastest";
  return j.dump(2);
}

}  // namespace corrshadow
