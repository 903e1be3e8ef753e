// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "corrshadow/geometry.hpp"
#include "corrshadow/params.hpp"

namespace corrshadow {

/// Gauss-Legendre nodes and weights on [0, 1], cached per point count.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  static const GaussLegendre& get(int n);
};

struct PairIntegral {
  double value = 0.0;         // raw value of the double line integral
  double error_estimate = 0.0;
  bool converged = true;
  int depth_used = 0;
};

/// Adaptive double line integral of exp(-|A(s) - B(t)| / delta) over both
/// segments' arc lengths.  Segments are pre-split at mutual endpoint
/// projections and at any interior intersection (the kernel is not smooth
/// where the segments meet), then further into pieces no longer than about
/// two space constants; each panel pair is integrated by tensor-product
/// Gauss-Legendre with dyadic subdivision driven by a two-level error
/// estimate.
PairIntegral integrate_exp_kernel(const Segment& a, const Segment& b,
                                  double delta_m, const QuadratureSpec& spec);

}  // namespace corrshadow
