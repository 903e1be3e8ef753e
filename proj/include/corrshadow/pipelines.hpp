// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace corrshadow {

// Command pipelines behind the CLI subcommands.  Each takes a JSON config
// (unknown keys are rejected, defaults applied, the effective config is
// echoed into every output file) and writes its outputs to the configured
// paths.  Errors surface as corrshadow::Error with the usual kinds.

void run_corr_table(const nlohmann::json& config);
void run_fit(const nlohmann::json& config);
void run_simulate(const nlohmann::json& config);
void run_oracle(const nlohmann::json& config);
void run_failure_sweep(const nlohmann::json& config);
void run_gudmundson_compare(const nlohmann::json& config);
void run_catalog(const nlohmann::json& config);

/// Convenience used by the C API: parse the config text and dispatch to the
/// named pipeline.
void run_command(const std::string& name, const std::string& config_json);

}  // namespace corrshadow
