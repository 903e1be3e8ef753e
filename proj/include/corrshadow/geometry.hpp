// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "corrshadow/errors.hpp"

namespace corrshadow {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

struct Segment {
  Point a;
  Point b;
  double length() const { return distance(a, b); }
  Point at(double arc) const {  // point at arc length from a
    const double len = length();
    const double t = arc / len;
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
  }
};

/// Unordered node pair; canonical storage with first < second.
struct Link {
  int first = 0;
  int second = 1;

  static Link make(int i, int j) {
    if (i == j) throw ArgumentError("a link needs two distinct nodes");
    if (i < 0 || j < 0) throw ArgumentError("node indices must be non-negative");
    return i < j ? Link{i, j} : Link{j, i};
  }

  friend bool operator==(const Link&, const Link&) = default;
  friend auto operator<=>(const Link&, const Link&) = default;
};

/// Static node layout, coordinates in meters.
class Deployment {
 public:
  Deployment(std::string id, std::vector<Point> nodes);

  /// nx-by-ny grid with the given spacing, nodes in row-major order.
  static Deployment grid(int nx, int ny, double spacing_m, std::string id = "grid");

  static Deployment from_json_file(const std::string& path);
  static Deployment from_json_text(const std::string& text);
  std::string to_json_text() const;

  const std::string& id() const { return id_; }
  const std::vector<Point>& nodes() const { return nodes_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }

  Point node(int i) const;
  double link_distance(Link link) const;
  Segment segment(Link link) const;

  /// Shortest link distance; the natural grid spacing for grid layouts.
  double min_link_distance() const;

 private:
  std::string id_;
  std::vector<Point> nodes_;
};

/// All N(N-1)/2 links in lexicographic (first, second) order.
std::vector<Link> enumerate_links(const Deployment& dep);

/// Relative geometry of two links up to translation, rotation and
/// reflection.  The canonical frame puts the first link's first endpoint at
/// the origin and its second endpoint on the positive x axis, with the
/// reflection chosen to keep the second link's first endpoint at
/// non-negative y; among the labelings of the two links the
/// lexicographically smallest frame (after quantizing to the tolerance) is
/// kept, so canonicalization is idempotent and label-independent.
class LinkPairGeometry {
 public:
  LinkPairGeometry(Segment first, Segment second, double tolerance_m = 1e-3);

  static LinkPairGeometry from_links(const Deployment& dep, Link a, Link b,
                                     double tolerance_m = 1e-3);

  LinkPairGeometry canonical() const;

  /// Unordered congruence: true when some rigid motion (plus optional link
  /// swap or endpoint swaps) maps one pair onto the other within tolerance.
  bool congruent(const LinkPairGeometry& other) const;

  /// Ordered congruence: as above but the link roles must be preserved.
  bool congruent_ordered(const LinkPairGeometry& other) const;

  const Segment& first() const { return first_; }
  const Segment& second() const { return second_; }
  double tolerance() const { return tolerance_m_; }

  /// True when the two links share an endpoint (within tolerance).
  bool shares_node() const;
  /// The two non-shared endpoints, valid only when shares_node().
  std::array<Point, 2> free_endpoints() const;

  /// Stable identifier of the canonical form (tolerance-quantized
  /// coordinates); equal keys imply congruent geometry.
  std::string cache_key() const;

 private:
  Segment first_;
  Segment second_;
  double tolerance_m_;
};

struct SimilarPair {
  Link first;
  Link second;
};

/// Every unordered link pair of the deployment whose geometry matches the
/// prototype, reported once each, oriented so the pair's first link plays
/// the prototype's first-link role.  Deterministic lexicographic order.
std::vector<SimilarPair> enumerate_similar_pairs(const Deployment& dep,
                                                 const LinkPairGeometry& proto);

/// Groups every link pair of a deployment by canonical geometry once, so
/// many prototypes can be matched without rescanning all pairs.  match()
/// returns the same pairs in the same order as enumerate_similar_pairs.
class PairGeometryIndex {
 public:
  explicit PairGeometryIndex(const Deployment& dep, double tolerance_m = 1e-3);

  std::vector<SimilarPair> match(const LinkPairGeometry& proto) const;
  double tolerance() const { return tol_; }

 private:
  Deployment dep_;
  double tol_;
  std::unordered_map<std::string, std::vector<SimilarPair>> groups_;
};

}  // namespace corrshadow
