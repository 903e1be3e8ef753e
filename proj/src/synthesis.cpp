// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#include "corrshadow/synthesis.hpp"

#include <cmath>

#include "corrshadow/rng.hpp"
#include "corrshadow/sampler.hpp"

namespace corrshadow {

MeasurementEnsemble synthesize_campaign(const Deployment& dep, const CampaignSpec& spec) {
  spec.shadowing.validate();
  return synthesize_campaign(dep, spec, build_joint_fading(dep, spec.shadowing, spec.quad));
}

MeasurementEnsemble synthesize_campaign(const Deployment& dep, const CampaignSpec& spec,
                                        const JointFadingModel& model) {
  if (spec.n_experiments < 1) throw ArgumentError("n_experiments must be >= 1");
  if (spec.n_frequencies < 1) throw ArgumentError("n_frequencies must be >= 1");
  if (!(spec.freq_noise_db2 >= 0.0)) throw ArgumentError("freq_noise_db2 must be >= 0");
  spec.path_loss.validate();
  spec.shadowing.validate();
  if (model.links.size() != enumerate_links(dep).size())
    throw ArgumentError("fading model does not match the deployment");

  const double noise_sd = std::sqrt(spec.freq_noise_db2);

  std::vector<MeasurementRecord> records;
  records.reserve(static_cast<std::size_t>(spec.n_experiments) * model.links.size() *
                  spec.n_frequencies);
  std::vector<double> noise(static_cast<std::size_t>(spec.n_frequencies));
  for (int m = 0; m < spec.n_experiments; ++m) {
    const auto fading = sample_fading(model, 1, spec.seed,
                                      static_cast<std::uint64_t>(m));
    const auto power = received_power_dbm(dep, spec.path_loss, model.links, fading[0]);
    for (std::size_t k = 0; k < model.links.size(); ++k) {
      // Centered per-frequency noise: the frequency average returns the
      // joint fading draw exactly.
      Rng rng(spec.seed, 0xa5a5000000000000ULL ^
                             (static_cast<std::uint64_t>(m) * 131071ULL + k));
      double mean = 0.0;
      for (int f = 0; f < spec.n_frequencies; ++f) {
        noise[static_cast<std::size_t>(f)] = noise_sd * rng.normal();
        mean += noise[static_cast<std::size_t>(f)];
      }
      mean /= spec.n_frequencies;
      for (int f = 0; f < spec.n_frequencies; ++f) {
        MeasurementRecord rec;
        rec.experiment = m + 1;
        rec.tx = model.links[k].first;
        rec.rx = model.links[k].second;
        rec.freq_index = f;
        rec.rss_dbm = power[k] + (noise[static_cast<std::size_t>(f)] - mean);
        rec.tx_power_dbm = spec.tx_power_dbm;
        rec.battery_mv = spec.battery_mv;
        records.push_back(rec);
      }
    }
  }
  return MeasurementEnsemble(std::move(records));
}

}  // namespace corrshadow
