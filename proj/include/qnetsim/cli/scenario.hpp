// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Scenario runner: versioned config files with environment overrides, seeded
// multi-run execution, CSV emission and aggregate statistics.
//
// Config dialect: a single JSON file with a mandatory integer `schema_version`
// key (currently 1). Top-level keys: scenario, runs, seed, formalism,
// memoize, out, params. Every key can be overridden through the environment
// with the prefix QNETSIM_ and the upper-cased dotted path, e.g.
// QNETSIM_RUNS=20 or QNETSIM_PARAMS_NODES=5; values are parsed as JSON with
// a plain-string fallback.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qnetsim/net/net.hpp"

namespace qnet::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kEnvPrefix = "QNETSIM";

// Counter snapshot of one finished run. All counters are monotone while the
// run executes; wall time is the only non-deterministic field and is kept
// out of the result CSVs.
struct RunStats {
  sim::Statistics engine;
  quant::QuantStats quantum;
  double wall_seconds = 0;
};

struct ScenarioConfig {
  std::string scenario;  // nv-chain | switch | bench-ghz | bench-repchain-qc | bench-chain
  int runs = 1;
  std::uint64_t seed = 1;
  quant::Formalism formalism = quant::Formalism::KET;
  bool memoize = true;
  std::string out_dir = ".";
  nlohmann::json params = nlohmann::json::object();  // scenario-specific section

  void validate() const;  // throws net::ConfigError
};

quant::Formalism parse_formalism(const std::string& name);
const char* formalism_name(quant::Formalism f);

// In-place environment overrides for every key reachable from `root`.
void apply_env_overrides(nlohmann::json& root, const std::string& prefix = kEnvPrefix);

// Builds a config from parsed JSON; applies environment overrides first and
// rejects unknown schema versions.
ScenarioConfig config_from_json(nlohmann::json root);

// Reads, overrides and validates a config file.
ScenarioConfig load_config(const std::string& path);

// Floats in every CSV use 17 significant digits.
std::string csv_double(double v);

struct ScenarioSummary {
  std::vector<std::string> files;         // written files, relative to out_dir
  std::map<std::string, double> metrics;  // deterministic aggregate means
  std::map<std::string, double> stderrs;  // standard errors where defined
  // Wall-clock-derived aggregates; kept out of the deterministic summary.
  std::map<std::string, double> timing_metrics;
  std::vector<RunStats> run_stats;
};

// Executes cfg.runs runs with seeds seed, seed+1, ..., writes the scenario's
// CSV files into out_dir and returns the aggregates. Result CSVs depend only
// on config and seed; wall-clock timings go to a separate timing file.
ScenarioSummary run_scenario(const ScenarioConfig& cfg);

}  // namespace qnet::cli
