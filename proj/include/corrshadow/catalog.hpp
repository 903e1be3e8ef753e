// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "corrshadow/geometry.hpp"

namespace corrshadow {

/// One named link-pair geometry, stored in canonical coordinates.
struct CatalogEntry {
  std::string id;
  Segment link_a;
  Segment link_b;
  std::string note;
  /// Whether the entry belongs in the compact correlation report; entries
  /// outside the report subset still feed the parameter fits.
  bool report = true;
};

/// Named collection of link-pair geometries used to pool correlation
/// samples and to label report rows.  Ships as an editable JSON data file.
class GeometryCatalog {
 public:
  GeometryCatalog(std::vector<CatalogEntry> entries, double tolerance_m = 1e-3);

  static GeometryCatalog from_json_file(const std::string& path);
  static GeometryCatalog from_json_text(const std::string& text);
  std::string to_json_text() const;

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  double tolerance() const { return tolerance_m_; }
  const CatalogEntry* find(const std::string& id) const;

  LinkPairGeometry geometry(const CatalogEntry& e) const {
    return LinkPairGeometry(e.link_a, e.link_b, tolerance_m_);
  }

 private:
  std::vector<CatalogEntry> entries_;
  double tolerance_m_;
};

/// Enumerate the distinct canonical pair geometries of a deployment whose
/// links are no longer than max_link_length_m, rank them by how often they
/// repeat (then by compactness), and keep the first max_entries.  Ids are
/// assigned in rank order.
GeometryCatalog build_catalog(const Deployment& dep, int max_entries,
                              double max_link_length_m, double tolerance_m = 1e-3);

}  // namespace corrshadow
