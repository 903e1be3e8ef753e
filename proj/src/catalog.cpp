// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#include "corrshadow/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace corrshadow {

namespace {

using json = nlohmann::json;

json segment_to_json(const Segment& s) {
  return json::array({{s.a.x, s.a.y}, {s.b.x, s.b.y}});
}

Segment segment_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() ||
      j[0].size() != 2 || j[1].size() != 2)
    throw DataError("catalog segment must be [[x,y],[x,y]]");
  return Segment{{j[0][0].get<double>(), j[0][1].get<double>()},
                 {j[1][0].get<double>(), j[1][1].get<double>()}};
}

bool nearly_collinear(const Segment& a, const Segment& b, double tol) {
  const Point da = a.b - a.a;
  const Point db = b.b - b.a;
  const double cross = da.x * db.y - da.y * db.x;
  if (std::abs(cross) > tol * norm(da) * norm(db)) return false;
  // Same supporting line, not just parallel.
  const Point r = b.a - a.a;
  return std::abs(da.x * r.y - da.y * r.x) <= tol * norm(da) * std::max(norm(r), 1.0);
}

std::string describe(const LinkPairGeometry& g, double gap) {
  char buf[160];
  const double la = g.first().length();
  const double lb = g.second().length();
  const bool collinear = nearly_collinear(g.first(), g.second(), g.tolerance());
  const bool shared = g.shares_node();
  std::string shape;
  if (collinear && shared) shape = "collinear, shared node";
  else if (collinear) shape = "collinear";
  else if (shared) shape = "shared node";
  else shape = "disjoint";
  std::snprintf(buf, sizeof(buf), "lengths %.2f/%.2f m, %s, gap %.2f m", la, lb,
                shape.c_str(), gap);
  return buf;
}

double min_endpoint_gap(const Segment& a, const Segment& b) {
  double g = distance(a.a, b.a);
  g = std::min(g, distance(a.a, b.b));
  g = std::min(g, distance(a.b, b.a));
  g = std::min(g, distance(a.b, b.b));
  return g;
}

}  // namespace

GeometryCatalog::GeometryCatalog(std::vector<CatalogEntry> entries, double tolerance_m)
    : entries_(std::move(entries)), tolerance_m_(tolerance_m) {
  if (!(tolerance_m_ > 0.0)) throw ArgumentError("catalog tolerance must be > 0");
  for (const CatalogEntry& e : entries_) {
    if (e.id.empty()) throw DataError("catalog entries need non-empty ids");
    LinkPairGeometry(e.link_a, e.link_b, tolerance_m_);  // validates the pair
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    for (std::size_t j = i + 1; j < entries_.size(); ++j) {
      if (entries_[i].id == entries_[j].id)
        throw DataError("duplicate catalog id: " + entries_[i].id);
    }
  }
}

GeometryCatalog GeometryCatalog::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open catalog file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

GeometryCatalog GeometryCatalog::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("catalog JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("geometries") || !j["geometries"].is_array())
    throw DataError("catalog JSON must be an object with a \"geometries\" array");
  const double tol = j.value("tolerance_m", 1e-3);
  std::vector<CatalogEntry> entries;
  for (const auto& g : j["geometries"]) {
    CatalogEntry e;
    e.id = g.value("id", std::string());
    e.link_a = segment_from_json(g.at("link_a"));
    e.link_b = segment_from_json(g.at("link_b"));
    e.note = g.value("note", std::string());
    e.report = g.value("report", true);
    entries.push_back(std::move(e));
  }
  return GeometryCatalog(std::move(entries), tol);
}

std::string GeometryCatalog::to_json_text() const {
  json j;
  j["tolerance_m"] = tolerance_m_;
  json arr = json::array();
  for (const CatalogEntry& e : entries_) {
    json g;
    g["id"] = e.id;
    g["link_a"] = segment_to_json(e.link_a);
    g["link_b"] = segment_to_json(e.link_b);
    g["note"] = e.note;
    g["report"] = e.report;
    arr.push_back(std::move(g));
  }
  j["geometries"] = std::move(arr);
  return j.dump(2);
}

const CatalogEntry* GeometryCatalog::find(const std::string& id) const {
  for (const CatalogEntry& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

GeometryCatalog build_catalog(const Deployment& dep, int max_entries,
                              double max_link_length_m, double tolerance_m) {
  if (max_entries < 1) throw ArgumentError("max_entries must be >= 1");
  const auto links = enumerate_links(dep);

  struct Group {
    LinkPairGeometry canon;
    int count = 0;
    double compactness = 0.0;
  };
  std::map<std::string, Group> groups;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (dep.link_distance(links[i]) > max_link_length_m) continue;
    for (std::size_t j = i + 1; j < links.size(); ++j) {
      if (dep.link_distance(links[j]) > max_link_length_m) continue;
      const LinkPairGeometry g =
          LinkPairGeometry::from_links(dep, links[i], links[j], tolerance_m);
      const std::string key = g.cache_key();
      auto it = groups.find(key);
      if (it == groups.end()) {
        const LinkPairGeometry canon = g.canonical();
        const Segment& a = canon.first();
        const Segment& b = canon.second();
        double span = 0.0;
        for (const Point& p : {a.a, a.b, b.a, b.b}) {
          for (const Point& q : {a.a, a.b, b.a, b.b}) {
            span = std::max(span, distance(p, q));
          }
        }
        groups.emplace(key, Group{canon, 1, span});
      } else {
        it->second.count += 1;
      }
    }
  }
  if (groups.empty()) throw DataError("no link pair geometries within the length bound");

  std::vector<std::pair<std::string, Group>> ranked(groups.begin(), groups.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    if (a.second.compactness != b.second.compactness)
      return a.second.compactness < b.second.compactness;
    return a.first < b.first;
  });

  std::vector<CatalogEntry> entries;
  const int n = std::min<int>(max_entries, static_cast<int>(ranked.size()));
  for (int k = 0; k < n; ++k) {
    const Group& grp = ranked[static_cast<std::size_t>(k)].second;
    CatalogEntry e;
    char idbuf[16];
    std::snprintf(idbuf, sizeof(idbuf), "g%02d", k + 1);
    e.id = idbuf;
    e.link_a = grp.canon.first();
    e.link_b = grp.canon.second();
    char extra[64];
    std::snprintf(extra, sizeof(extra), "; repeats %d times", grp.count);
    e.note = describe(grp.canon, min_endpoint_gap(grp.canon.first(), grp.canon.second())) + extra;
    entries.push_back(std::move(e));
  }
  return GeometryCatalog(std::move(entries), tolerance_m);
}

}  // namespace corrshadow
