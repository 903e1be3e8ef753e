// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#include "corrshadow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

namespace corrshadow {

namespace {

// Newton iteration on the Legendre polynomial, nodes mapped to [0, 1].
GaussLegendre compute_gl(int n) {
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev initial guess on [-1, 1].
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    gl.nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + x);
    gl.weights[static_cast<std::size_t>(n - 1 - i)] = 1.0 / ((1.0 - x * x) * pp * pp);
  }
  return gl;
}

struct Piece {
  double lo;
  double hi;
};

// Parameter of the point on [0, len] closest to q along the segment.
double clamped_projection(const Segment& seg, Point q) {
  const Point d = seg.b - seg.a;
  const double len2 = dot(d, d);
  const double t = dot(q - seg.a, d) / len2;
  return std::clamp(t, 0.0, 1.0) * seg.length();
}

double point_segment_distance(Point q, const Segment& seg) {
  return distance(q, seg.at(clamped_projection(seg, q)));
}

// Interior intersection parameters of the two segments, when they properly
// cross.
bool intersection_params(const Segment& a, const Segment& b, double& sa, double& sb) {
  const Point da = a.b - a.a;
  const Point db = b.b - b.a;
  const double den = da.x * db.y - da.y * db.x;
  const double scale = norm(da) * norm(db);
  if (std::abs(den) < 1e-12 * scale) return false;
  const Point r = b.a - a.a;
  const double t = (r.x * db.y - r.y * db.x) / den;
  const double u = (r.x * da.y - r.y * da.x) / den;
  if (t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0) return false;
  sa = t * a.length();
  sb = u * b.length();
  return true;
}

double segment_gap(const Segment& a, const Segment& b) {
  double sa = 0.0, sb = 0.0;
  if (intersection_params(a, b, sa, sb)) return 0.0;
  double g = point_segment_distance(a.a, b);
  g = std::min(g, point_segment_distance(a.b, b));
  g = std::min(g, point_segment_distance(b.a, a));
  g = std::min(g, point_segment_distance(b.b, a));
  return g;
}

std::vector<Piece> split_segment(const Segment& seg, std::vector<double> cuts,
                                 double piece_cap) {
  const double len = seg.length();
  cuts.push_back(0.0);
  cuts.push_back(len);
  std::sort(cuts.begin(), cuts.end());
  std::vector<Piece> pieces;
  const double min_piece = 1e-9 * len;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    if (hi - lo <= min_piece) continue;
    const int parts = std::max(1, static_cast<int>(std::ceil((hi - lo) / piece_cap)));
    for (int k = 0; k < parts; ++k) {
      pieces.push_back({lo + (hi - lo) * k / parts, lo + (hi - lo) * (k + 1) / parts});
    }
  }
  return pieces;
}

struct Cell {
  double s0, s1, t0, t1;
  double fine = 0.0;  // sum of the four child panels
  double err = 0.0;   // |fine - single panel|
  int depth = 0;
};

struct CellWorse {
  bool operator()(const Cell& a, const Cell& b) const { return a.err < b.err; }
};

class PairIntegrator {
 public:
  PairIntegrator(const Segment& a, const Segment& b, double delta,
                 const QuadratureSpec& spec)
      : a_(a), b_(b), delta_(delta), spec_(spec), gl_(GaussLegendre::get(spec.points)) {}

  PairIntegral run() {
    std::vector<double> cuts_a = {clamped_projection(a_, b_.a), clamped_projection(a_, b_.b)};
    std::vector<double> cuts_b = {clamped_projection(b_, a_.a), clamped_projection(b_, a_.b)};
    double sa = 0.0, sb = 0.0;
    if (intersection_params(a_, b_, sa, sb)) {
      cuts_a.push_back(sa);
      cuts_b.push_back(sb);
    }
    // Contacting or near-contacting segments get pieces resolved to the
    // kernel scale; well-separated ones see a smooth integrand and can use
    // coarser pieces.
    const double cap = segment_gap(a_, b_) <= 2.0 * delta_ ? 2.0 * delta_ : 6.0 * delta_;
    const auto pieces_a = split_segment(a_, std::move(cuts_a), cap);
    const auto pieces_b = split_segment(b_, std::move(cuts_b), cap);

    std::priority_queue<Cell, std::vector<Cell>, CellWorse> queue;
    double value = 0.0;
    double total_err = 0.0;
    for (const Piece& pa : pieces_a) {
      for (const Piece& pb : pieces_b) {
        Cell c = make_cell(pa.lo, pa.hi, pb.lo, pb.hi, 0);
        value += c.fine;
        total_err += c.err;
        queue.push(c);
      }
    }

    PairIntegral out;
    // Refine the worst cell until the summed two-level error meets the
    // relative tolerance or nothing refinable remains.
    const long max_cells = 200000;
    long cells = static_cast<long>(queue.size());
    std::vector<Cell> exhausted;
    while (!queue.empty() && total_err > spec_.rel_tol * std::abs(value) &&
           cells < max_cells) {
      const Cell worst = queue.top();
      queue.pop();
      if (worst.depth >= spec_.max_subdivisions) {
        exhausted.push_back(worst);
        continue;
      }
      value -= worst.fine;
      total_err -= worst.err;
      const double sm = 0.5 * (worst.s0 + worst.s1);
      const double tm = 0.5 * (worst.t0 + worst.t1);
      const Cell kids[4] = {
          make_cell(worst.s0, sm, worst.t0, tm, worst.depth + 1),
          make_cell(sm, worst.s1, worst.t0, tm, worst.depth + 1),
          make_cell(worst.s0, sm, tm, worst.t1, worst.depth + 1),
          make_cell(sm, worst.s1, tm, worst.t1, worst.depth + 1)};
      for (const Cell& k : kids) {
        value += k.fine;
        total_err += k.err;
        out.depth_used = std::max(out.depth_used, k.depth);
        queue.push(k);
        ++cells;
      }
    }
    out.value = value;
    out.error_estimate = total_err;
    out.converged = total_err <= spec_.rel_tol * std::abs(value);
    return out;
  }

 private:
  double panel(double s0, double s1, double t0, double t1) const {
    const int n = spec_.points;
    const auto& nodes = gl_.nodes;
    const auto& wts = gl_.weights;
    const double ds = s1 - s0;
    const double dt = t1 - t0;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const Point pa = a_.at(s0 + ds * nodes[static_cast<std::size_t>(i)]);
      double row = 0.0;
      for (int j = 0; j < n; ++j) {
        const Point pb = b_.at(t0 + dt * nodes[static_cast<std::size_t>(j)]);
        row += wts[static_cast<std::size_t>(j)] * std::exp(-distance(pa, pb) / delta_);
      }
      sum += wts[static_cast<std::size_t>(i)] * row;
    }
    return sum * ds * dt;
  }

  Cell make_cell(double s0, double s1, double t0, double t1, int depth) const {
    Cell c{s0, s1, t0, t1, 0.0, 0.0, depth};
    const double coarse = panel(s0, s1, t0, t1);
    const double sm = 0.5 * (s0 + s1);
    const double tm = 0.5 * (t0 + t1);
    c.fine = panel(s0, sm, t0, tm) + panel(sm, s1, t0, tm) + panel(s0, sm, tm, t1) +
             panel(sm, s1, tm, t1);
    c.err = std::abs(c.fine - coarse);
    return c;
  }

  const Segment& a_;
  const Segment& b_;
  double delta_;
  const QuadratureSpec& spec_;
  const GaussLegendre& gl_;
};

}  // namespace

const GaussLegendre& GaussLegendre::get(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, compute_gl(n)).first;
  }
  return it->second;
}

PairIntegral integrate_exp_kernel(const Segment& a, const Segment& b, double delta_m,
                                  const QuadratureSpec& spec) {
  spec.validate();
  if (!(delta_m > 0.0)) throw ArgumentError("space constant must be > 0");
  if (!(a.length() > 0.0) || !(b.length() > 0.0))
    throw ArgumentError("segments must have positive length");
  return PairIntegrator(a, b, delta_m, spec).run();
}

}  // namespace corrshadow
