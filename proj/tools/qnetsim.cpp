// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line scenario runner. Precedence for every setting: command-line
// flag, then QNETSIM_* environment variable, then config file, then default.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "qnetsim/cli/scenario.hpp"

namespace {

struct Flags {
  std::string config;
  int runs = -1;
  std::int64_t seed = -1;
  std::string formalism;
  std::string out;
  std::string memoize;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "Config file (JSON with schema_version)");
  sub->add_option("--runs", f.runs, "Number of independent runs");
  sub->add_option("--seed", f.seed, "Base seed; run i uses seed + i");
  sub->add_option("--formalism", f.formalism, "ket | dm | stab | gslc")
      ->check(CLI::IsMember({"ket", "dm", "stab", "gslc"}));
  sub->add_option("--out", f.out, "Output directory for CSV files");
  sub->add_option("--memoize", f.memoize, "on | off")->check(CLI::IsMember({"on", "off"}));
}

int run(const std::string& scenario, const Flags& f) {
  qnet::cli::ScenarioConfig cfg;
  if (!f.config.empty()) {
    cfg = qnet::cli::load_config(f.config);
  } else {
    nlohmann::json root = {{"schema_version", qnet::cli::kSchemaVersion},
                           {"scenario", scenario},
                           {"params", nlohmann::json::object()}};
    cfg = qnet::cli::config_from_json(std::move(root));
  }
  cfg.scenario = scenario;
  if (f.runs >= 0) cfg.runs = f.runs;
  if (f.seed >= 0) cfg.seed = static_cast<std::uint64_t>(f.seed);
  if (!f.formalism.empty()) cfg.formalism = qnet::cli::parse_formalism(f.formalism);
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (!f.memoize.empty()) cfg.memoize = f.memoize == "on";
  cfg.validate();

  const qnet::cli::ScenarioSummary s = qnet::cli::run_scenario(cfg);
  std::printf("scenario=%s runs=%d seed=%llu out=%s\n", cfg.scenario.c_str(), cfg.runs,
              static_cast<unsigned long long>(cfg.seed), cfg.out_dir.c_str());
  for (const auto& [key, mean] : s.metrics) {
    const auto it = s.stderrs.find(key);
    if (it != s.stderrs.end() && it->second > 0)
      std::printf("%s = %.17g +- %.17g\n", key.c_str(), mean, it->second);
    else
      std::printf("%s = %.17g\n", key.c_str(), mean);
  }
  for (const auto& [key, value] : s.timing_metrics)
    std::printf("%s = %.17g (timing)\n", key.c_str(), value);
  for (const std::string& file : s.files) std::printf("wrote %s\n", file.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qnetsim: quantum network scenario runner and benchmarks"};
  app.require_subcommand(1);

  const char* names[] = {"nv-chain", "switch", "bench-ghz", "bench-repchain-qc", "bench-chain"};
  const char* descs[] = {
      "Repeater chain on nitrogen-vacancy hardware",
      "Buffered entanglement switch in a star network",
      "GHZ-circuit formalism benchmark",
      "Repeater-chain quantum-computation benchmark",
      "Event-driven repeater chain benchmark",
  };
  Flags flags;
  std::string chosen;
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    add_common(sub, flags);
    sub->callback([&chosen, name = std::string(names[i])] { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);
  try {
    return run(chosen, flags);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
