// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#include "corrshadow/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace corrshadow {

namespace {

using json = nlohmann::json;

// One candidate placement of a link pair in the canonical frame.
// p[0] is always (0,0) and p[1] lies on the positive x axis.
struct Frame {
  std::array<Point, 4> p;
};

// Rigidly move (a1,a2,b1,b2) so a1 -> origin, a2 -> positive x axis, and
// optionally mirror in y.  The first link lands on the axis exactly; only
// the second link's endpoints go through the rotation.
Frame place(Point a1, Point a2, Point b1, Point b2, bool mirror) {
  const Point d = a2 - a1;
  const double len = norm(d);
  const double c = d.x / len;
  const double s = d.y / len;
  auto xf = [&](Point q) -> Point {
    const Point r = q - a1;
    Point out{c * r.x + s * r.y, -s * r.x + c * r.y};
    if (mirror) out.y = -out.y;
    return out;
  };
  return Frame{{Point{0.0, 0.0}, Point{len, 0.0}, xf(b1), xf(b2)}};
}

// All frames of the pair with the given link order: endpoint orders of each
// link times the reflection rule (second link's first endpoint at y >= 0,
// ties broken by its second endpoint).
void ordered_frames(const Segment& f, const Segment& s, double tol,
                    std::vector<Frame>& out) {
  const std::array<std::array<Point, 2>, 2> fe = {{{f.a, f.b}, {f.b, f.a}}};
  const std::array<std::array<Point, 2>, 2> se = {{{s.a, s.b}, {s.b, s.a}}};
  for (const auto& fo : fe) {
    for (const auto& so : se) {
      Frame up = place(fo[0], fo[1], so[0], so[1], false);
      double y1 = up.p[2].y;
      double y2 = up.p[3].y;
      if (y1 > tol || (std::abs(y1) <= tol && y2 >= -tol)) {
        out.push_back(up);
      }
      Frame down = place(fo[0], fo[1], so[0], so[1], true);
      y1 = down.p[2].y;
      y2 = down.p[3].y;
      if (y1 > tol || (std::abs(y1) <= tol && y2 >= -tol)) {
        out.push_back(down);
      }
    }
  }
}

std::vector<Frame> all_frames(const Segment& f, const Segment& s, double tol,
                              bool include_swap) {
  std::vector<Frame> frames;
  frames.reserve(include_swap ? 16 : 8);
  ordered_frames(f, s, tol, frames);
  if (include_swap) ordered_frames(s, f, tol, frames);
  return frames;
}

long long quantize(double v, double tol) {
  return std::llround(v / tol);
}

// Lexicographic comparison of quantized frames, ties broken on the raw
// coordinates so the winner is unique.
bool frame_less(const Frame& a, const Frame& b, double tol) {
  std::array<double, 5> ra = {a.p[1].x, a.p[2].x, a.p[2].y, a.p[3].x, a.p[3].y};
  std::array<double, 5> rb = {b.p[1].x, b.p[2].x, b.p[2].y, b.p[3].x, b.p[3].y};
  for (int i = 0; i < 5; ++i) {
    const long long qa = quantize(ra[i], tol);
    const long long qb = quantize(rb[i], tol);
    if (qa != qb) return qa < qb;
  }
  for (int i = 0; i < 5; ++i) {
    if (ra[i] != rb[i]) return ra[i] < rb[i];
  }
  return false;
}

bool frames_match(const Frame& a, const Frame& b, double tol) {
  for (int i = 0; i < 4; ++i) {
    if (distance(a.p[i], b.p[i]) > tol) return false;
  }
  return true;
}

// Sorted multiset of the six pairwise endpoint distances; cheap congruence
// prefilter.
std::array<double, 6> distance_multiset(const Segment& f, const Segment& s) {
  std::array<double, 6> d = {
      distance(f.a, f.b), distance(s.a, s.b), distance(f.a, s.a),
      distance(f.a, s.b), distance(f.b, s.a), distance(f.b, s.b)};
  std::sort(d.begin(), d.end());
  return d;
}

bool multisets_match(const Segment& fa, const Segment& sa, const Segment& fb,
                     const Segment& sb, double tol) {
  const auto da = distance_multiset(fa, sa);
  const auto db = distance_multiset(fb, sb);
  for (int i = 0; i < 6; ++i) {
    if (std::abs(da[i] - db[i]) > 2.0 * tol) return false;
  }
  return true;
}

}  // namespace

Deployment::Deployment(std::string id, std::vector<Point> nodes)
    : id_(std::move(id)), nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw ArgumentError("a deployment needs at least 2 nodes");
  for (const Point& p : nodes_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw ArgumentError("node coordinates must be finite");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes_.size(); ++j) {
      if (nodes_[i].x == nodes_[j].x && nodes_[i].y == nodes_[j].y)
        throw ArgumentError("two nodes share identical coordinates");
    }
  }
}

Deployment Deployment::grid(int nx, int ny, double spacing_m, std::string id) {
  if (nx < 1 || ny < 1 || nx * ny < 2) throw ArgumentError("grid needs at least 2 nodes");
  if (!(spacing_m > 0.0)) throw ArgumentError("grid spacing must be > 0");
  std::vector<Point> nodes;
  nodes.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      nodes.push_back({i * spacing_m, j * spacing_m});
    }
  }
  return Deployment(std::move(id), std::move(nodes));
}

Deployment Deployment::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open deployment file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

Deployment Deployment::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("deployment JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("nodes") || !j["nodes"].is_array())
    throw DataError("deployment JSON must be an object with a \"nodes\" array");
  std::vector<Point> nodes;
  for (const auto& n : j["nodes"]) {
    if (!n.is_array() || n.size() != 2 || !n[0].is_number() || !n[1].is_number())
      throw DataError("each node must be a [x_m, y_m] pair");
    nodes.push_back({n[0].get<double>(), n[1].get<double>()});
  }
  std::string id = j.value("id", std::string("deployment"));
  return Deployment(std::move(id), std::move(nodes));
}

std::string Deployment::to_json_text() const {
  json j;
  j["id"] = id_;
  json arr = json::array();
  for (const Point& p : nodes_) arr.push_back({p.x, p.y});
  j["nodes"] = std::move(arr);
  return j.dump(2);
}

Point Deployment::node(int i) const {
  if (i < 0 || i >= node_count()) throw ArgumentError("node index out of range");
  return nodes_[static_cast<std::size_t>(i)];
}

double Deployment::link_distance(Link link) const {
  return distance(node(link.first), node(link.second));
}

Segment Deployment::segment(Link link) const {
  return Segment{node(link.first), node(link.second)};
}

double Deployment::min_link_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < node_count(); ++i) {
    for (int j = i + 1; j < node_count(); ++j) {
      best = std::min(best, distance(nodes_[i], nodes_[j]));
    }
  }
  return best;
}

std::vector<Link> enumerate_links(const Deployment& dep) {
  std::vector<Link> links;
  const int n = dep.node_count();
  links.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      links.push_back(Link{i, j});
    }
  }
  return links;
}

LinkPairGeometry::LinkPairGeometry(Segment first, Segment second, double tolerance_m)
    : first_(first), second_(second), tolerance_m_(tolerance_m) {
  if (!(tolerance_m_ > 0.0)) throw ArgumentError("tolerance must be > 0");
  if (first_.length() <= tolerance_m_ || second_.length() <= tolerance_m_)
    throw ArgumentError("link pair segments must have positive length");
  const bool same = (distance(first_.a, second_.a) <= tolerance_m_ &&
                     distance(first_.b, second_.b) <= tolerance_m_) ||
                    (distance(first_.a, second_.b) <= tolerance_m_ &&
                     distance(first_.b, second_.a) <= tolerance_m_);
  if (same) throw ArgumentError("link pair needs two distinct links");
}

LinkPairGeometry LinkPairGeometry::from_links(const Deployment& dep, Link a, Link b,
                                              double tolerance_m) {
  return LinkPairGeometry(dep.segment(a), dep.segment(b), tolerance_m);
}

LinkPairGeometry LinkPairGeometry::canonical() const {
  const auto frames = all_frames(first_, second_, tolerance_m_, true);
  const Frame* best = &frames.front();
  for (const Frame& f : frames) {
    if (frame_less(f, *best, tolerance_m_)) best = &f;
  }
  return LinkPairGeometry(Segment{best->p[0], best->p[1]},
                          Segment{best->p[2], best->p[3]}, tolerance_m_);
}

bool LinkPairGeometry::congruent(const LinkPairGeometry& other) const {
  const double tol = std::max(tolerance_m_, other.tolerance_m_);
  if (!multisets_match(first_, second_, other.first_, other.second_, tol)) return false;
  const LinkPairGeometry ref = canonical();
  const Frame target{{ref.first_.a, ref.first_.b, ref.second_.a, ref.second_.b}};
  for (const Frame& f : all_frames(other.first_, other.second_, tol, true)) {
    if (frames_match(f, target, tol)) return true;
  }
  return false;
}

bool LinkPairGeometry::congruent_ordered(const LinkPairGeometry& other) const {
  const double tol = std::max(tolerance_m_, other.tolerance_m_);
  if (!multisets_match(first_, second_, other.first_, other.second_, tol)) return false;
  // Ordered canonical form of *this: frames without the link swap.
  const auto mine = all_frames(first_, second_, tol, false);
  const Frame* best = &mine.front();
  for (const Frame& f : mine) {
    if (frame_less(f, *best, tol)) best = &f;
  }
  for (const Frame& f : all_frames(other.first_, other.second_, tol, false)) {
    if (frames_match(f, *best, tol)) return true;
  }
  return false;
}

bool LinkPairGeometry::shares_node() const {
  return distance(first_.a, second_.a) <= tolerance_m_ ||
         distance(first_.a, second_.b) <= tolerance_m_ ||
         distance(first_.b, second_.a) <= tolerance_m_ ||
         distance(first_.b, second_.b) <= tolerance_m_;
}

std::array<Point, 2> LinkPairGeometry::free_endpoints() const {
  if (distance(first_.a, second_.a) <= tolerance_m_) return {first_.b, second_.b};
  if (distance(first_.a, second_.b) <= tolerance_m_) return {first_.b, second_.a};
  if (distance(first_.b, second_.a) <= tolerance_m_) return {first_.a, second_.b};
  if (distance(first_.b, second_.b) <= tolerance_m_) return {first_.a, second_.a};
  throw ArgumentError("link pair does not share a node");
}

std::string LinkPairGeometry::cache_key() const {
  const LinkPairGeometry c = canonical();
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%lld|%lld,%lld|%lld,%lld",
                quantize(c.first_.b.x, tolerance_m_),
                quantize(c.second_.a.x, tolerance_m_),
                quantize(c.second_.a.y, tolerance_m_),
                quantize(c.second_.b.x, tolerance_m_),
                quantize(c.second_.b.y, tolerance_m_));
  return std::string(buf);
}

std::vector<SimilarPair> enumerate_similar_pairs(const Deployment& dep,
                                                 const LinkPairGeometry& proto) {
  const auto links = enumerate_links(dep);
  std::vector<SimilarPair> out;
  for (std::size_t i = 0; i < links.size(); ++i) {
    for (std::size_t j = i + 1; j < links.size(); ++j) {
      const LinkPairGeometry fwd(dep.segment(links[i]), dep.segment(links[j]),
                                 proto.tolerance());
      if (proto.congruent_ordered(fwd)) {
        out.push_back({links[i], links[j]});
        continue;
      }
      const LinkPairGeometry rev(dep.segment(links[j]), dep.segment(links[i]),
                                 proto.tolerance());
      if (proto.congruent_ordered(rev)) {
        out.push_back({links[j], links[i]});
      }
    }
  }
  return out;
}

}  // namespace corrshadow

namespace corrshadow {

PairGeometryIndex::PairGeometryIndex(const Deployment& dep, double tolerance_m)
    : dep_(dep), tol_(tolerance_m) {
  if (!(tol_ > 0.0)) throw ArgumentError("tolerance must be > 0");
  const auto links = enumerate_links(dep_);
  for (std::size_t i = 0; i < links.size(); ++i) {
    for (std::size_t j = i + 1; j < links.size(); ++j) {
      const LinkPairGeometry g =
          LinkPairGeometry::from_links(dep_, links[i], links[j], tol_);
      groups_[g.cache_key()].push_back({links[i], links[j]});
    }
  }
}

std::vector<SimilarPair> PairGeometryIndex::match(const LinkPairGeometry& proto) const {
  // Re-key the prototype at the index tolerance so quantization agrees.
  const LinkPairGeometry keyed(proto.first(), proto.second(), tol_);
  const auto it = groups_.find(keyed.cache_key());
  std::vector<SimilarPair> out;
  if (it == groups_.end()) return out;
  for (const SimilarPair& p : it->second) {
    const LinkPairGeometry fwd(dep_.segment(p.first), dep_.segment(p.second), tol_);
    if (keyed.congruent_ordered(fwd)) {
      out.push_back(p);
      continue;
    }
    const LinkPairGeometry rev(dep_.segment(p.second), dep_.segment(p.first), tol_);
    if (keyed.congruent_ordered(rev)) {
      out.push_back({p.second, p.first});
    }
  }
  return out;
}

}  // namespace corrshadow
