// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "corrshadow/covariance.hpp"
#include "corrshadow/estimation.hpp"
#include "corrshadow/params.hpp"
#include "corrshadow/sampler.hpp"

namespace corrshadow {

/// Parameters for a synthetic measurement campaign with the joint fading
/// model: per experiment one joint fading draw over all links, per frequency
/// an extra zero-sum measurement noise term so frequency averaging recovers
/// the drawn fading exactly.
struct CampaignSpec {
  int n_experiments = 15;
  int n_frequencies = 14;
  double freq_noise_db2 = 2.0;
  PathLossParams path_loss;
  ShadowingParams shadowing;
  QuadratureSpec quad;
  std::uint64_t seed = 12345;
  double tx_power_dbm = 0.0;
  double battery_mv = 2900.0;
};

MeasurementEnsemble synthesize_campaign(const Deployment& dep, const CampaignSpec& spec);

/// As above with a prebuilt joint fading model (so the covariance assembly
/// can be shared across many campaigns over the same deployment).
MeasurementEnsemble synthesize_campaign(const Deployment& dep, const CampaignSpec& spec,
                                        const JointFadingModel& model);

}  // namespace corrshadow
