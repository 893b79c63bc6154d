// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "qnetsim/cli/bench.hpp"
#include "qnetsim/cli/scenario.hpp"
#include "qnetsim/nv/chain.hpp"
#include "qnetsim/qswitch/qswitch.hpp"

namespace qnet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

quant::Formalism parse_formalism(const std::string& name) {
  if (name == "ket") return quant::Formalism::KET;
  if (name == "dm") return quant::Formalism::DM;
  if (name == "stab") return quant::Formalism::STAB;
  if (name == "gslc") return quant::Formalism::GSLC;
  throw net::ConfigError("unknown formalism: " + name);
}

const char* formalism_name(quant::Formalism f) {
  switch (f) {
    case quant::Formalism::KET: return "ket";
    case quant::Formalism::DM: return "dm";
    case quant::Formalism::STAB: return "stab";
    case quant::Formalism::GSLC: return "gslc";
  }
  return "?";
}

std::string csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ScenarioConfig::validate() const {
  static const std::set<std::string> known = {"nv-chain", "switch", "bench-ghz",
                                             "bench-repchain-qc", "bench-chain"};
  if (!known.count(scenario)) throw net::ConfigError("unknown scenario: " + scenario);
  if (runs < 1) throw net::ConfigError("runs must be positive");
  if (!params.is_object()) throw net::ConfigError("params must be a section");
}

// ---------------------------------------------------------------------------
// Config loading

namespace {

std::string upcase_key(const std::string& key) {
  std::string out;
  for (char c : key)
    out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

json parse_env_value(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) return json(text);  // plain-string fallback
  return v;
}

}  // namespace

void apply_env_overrides(json& root, const std::string& prefix) {
  if (!root.is_object()) return;
  const std::string p = prefix + "_";
  for (char** e = environ; *e; ++e) {
    const char* eq = std::strchr(*e, '=');
    if (!eq) continue;
    const std::string name(*e, static_cast<std::size_t>(eq - *e));
    if (name.compare(0, p.size(), p) != 0) continue;
    std::string rest = name.substr(p.size());
    // Descend by the longest existing section whose upper-cased key is a
    // prefix of the variable; set the matched key, or create the remainder
    // (lower-cased) at the deepest section reached.
    json* node = &root;
    for (bool placed = false; !placed;) {
      std::size_t best = 0;
      json* child = nullptr;
      for (auto& [key, value] : node->items()) {
        const std::string uk = upcase_key(key);
        if (rest == uk) {
          value = parse_env_value(eq + 1);
          placed = true;
          break;
        }
        if (value.is_object() && rest.size() > uk.size() + 1 && rest[uk.size()] == '_' &&
            rest.compare(0, uk.size(), uk) == 0 && uk.size() > best) {
          best = uk.size();
          child = &value;
        }
      }
      if (placed) break;
      if (child) {
        rest = rest.substr(best + 1);
        node = child;
        continue;
      }
      std::string leaf;
      for (char c : rest) leaf += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      (*node)[leaf] = parse_env_value(eq + 1);
      placed = true;
    }
  }
}

ScenarioConfig config_from_json(json root) {
  if (!root.is_object()) throw net::ConfigError("config root must be a section");
  if (!root.contains("params")) root["params"] = json::object();
  apply_env_overrides(root);
  if (!root.contains("schema_version") || !root["schema_version"].is_number_integer())
    throw net::ConfigError("config needs an integer schema_version");
  if (root["schema_version"].get<int>() != kSchemaVersion)
    throw net::ConfigError("unsupported schema_version");
  ScenarioConfig cfg;
  try {
    cfg.scenario = root.value("scenario", cfg.scenario);
    cfg.runs = root.value("runs", cfg.runs);
    cfg.seed = root.value("seed", cfg.seed);
    if (root.contains("formalism")) cfg.formalism = parse_formalism(root["formalism"]);
    cfg.memoize = root.value("memoize", cfg.memoize);
    cfg.out_dir = root.value("out", cfg.out_dir);
    if (root.contains("params")) cfg.params = root["params"];
  } catch (const json::exception& e) {
    throw net::ConfigError(std::string("bad config value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw net::ConfigError("cannot open config file: " + path);
  json root = json::parse(in, nullptr, false);
  if (root.is_discarded()) throw net::ConfigError("config file is not valid JSON: " + path);
  return config_from_json(std::move(root));
}

// ---------------------------------------------------------------------------
// CSV plumbing

namespace {

class Csv {
 public:
  Csv(ScenarioSummary& summary, const fs::path& dir, std::string name,
      const std::string& header)
      : path_(dir / name) {
    out_.open(path_);
    if (!out_) throw net::ConfigError("cannot write " + path_.string());
    out_ << header << "\n";
    summary.files.push_back(std::move(name));
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

std::string i64(std::int64_t v) { return std::to_string(v); }
std::string u64(std::uint64_t v) { return std::to_string(v); }

void aggregate(ScenarioSummary& s, const std::string& key, const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= n;
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  s.metrics[key] = mean;
  s.stderrs[key] = xs.size() > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
}

void write_summary(ScenarioSummary& s, const fs::path& dir) {
  Csv csv(s, dir, "summary.csv", "metric,mean,stderr");
  for (const auto& [key, mean] : s.metrics)
    csv.row({key, csv_double(mean), csv_double(s.stderrs.count(key) ? s.stderrs[key] : 0.0)});
  if (!s.timing_metrics.empty()) {
    Csv tcsv(s, dir, "timing_summary.csv", "metric,value");
    for (const auto& [key, value] : s.timing_metrics) tcsv.row({key, csv_double(value)});
  }
}

// Engine and quantum counters plus wall time; wall_seconds is deliberately
// the only column that is not reproducible.
void write_stats(ScenarioSummary& s, const fs::path& dir, std::uint64_t seed_base) {
  Csv csv(s, dir, "stats.csv",
          "run,seed,events_scheduled,events_delivered,events_suppressed,events_processed,"
          "callbacks_run,ops_applied,channels_applied,measurements,merges,splits,conversions,"
          "max_state_qubits,mean_state_qubits,wall_seconds");
  for (std::size_t i = 0; i < s.run_stats.size(); ++i) {
    const RunStats& r = s.run_stats[i];
    csv.row({u64(i), u64(seed_base + i), u64(r.engine.events_scheduled),
             u64(r.engine.events_delivered), u64(r.engine.events_suppressed),
             u64(r.engine.events_processed()), u64(r.engine.callbacks_run),
             u64(r.quantum.ops_applied), u64(r.quantum.channels_applied),
             u64(r.quantum.measurements), u64(r.quantum.merges), u64(r.quantum.splits),
             u64(r.quantum.conversions), u64(r.quantum.max_state_qubits),
             csv_double(r.quantum.mean_state_qubits()), csv_double(r.wall_seconds)});
  }
}

double wall_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Scenario-specific parameter lookups with defaults and type errors.
template <typename T>
T param(const json& p, const std::string& key, T fallback) {
  try {
    return p.value(key, fallback);
  } catch (const json::exception& e) {
    throw net::ConfigError("bad value for params." + key + ": " + e.what());
  }
}

std::vector<int> size_list(const json& p, int lo, int hi, int step) {
  std::vector<int> out;
  if (p.contains("sizes")) {
    for (const auto& v : p["sizes"]) out.push_back(v.get<int>());
  } else {
    for (int n = lo; n <= hi; n += step) out.push_back(n);
  }
  if (out.empty()) throw net::ConfigError("empty size list");
  return out;
}

// ---------------------------------------------------------------------------
// Scenarios

ScenarioSummary run_nv_chain(const ScenarioConfig& cfg, const fs::path& dir) {
  ScenarioSummary s;
  nv::ChainConfig ccfg;
  ccfg.nodes = param(cfg.params, "nodes", 3);
  ccfg.length_km = param(cfg.params, "length_km", 2.0 * (ccfg.nodes - 1));
  ccfg.carbons = param(cfg.params, "carbons", 8);
  ccfg.formalism = cfg.formalism;
  const std::string proto = param<std::string>(cfg.params, "protocol", "swap-asap");
  if (proto == "swap-asap") ccfg.protocol = nv::ChainProtocol::SwapAsap;
  else if (proto == "nested") ccfg.protocol = nv::ChainProtocol::NestedWithDistill;
  else throw net::ConfigError("unknown protocol: " + proto);
  const double kappa = param(cfg.params, "kappa", 1.0);
  nv::NVParams hw = param(cfg.params, "noiseless", false) ? nv::noiseless_params() : nv::NVParams{};
  if (kappa != 1.0) hw = nv::improve(hw, kappa);

  Csv results(s, dir, "results.csv",
              "seed,nodes,length_km,kappa,protocol,formalism,end_fidelity,duration_ns,"
              "attempts,swaps,distill_attempts");
  std::vector<double> fids, durs, atts;
  for (int i = 0; i < cfg.runs; ++i) {
    const std::uint64_t seed = cfg.seed + i;
    const auto t0 = std::chrono::steady_clock::now();
    const nv::RunRecord rec = nv::run_chain(ccfg, hw, seed);
    results.row({u64(seed), i64(ccfg.nodes), csv_double(ccfg.length_km), csv_double(kappa),
                 proto, formalism_name(cfg.formalism), csv_double(rec.end_fidelity),
                 csv_double(rec.duration_ns), u64(rec.attempts), i64(rec.swaps),
                 u64(rec.distills.size())});
    fids.push_back(rec.end_fidelity);
    durs.push_back(rec.duration_ns);
    atts.push_back(static_cast<double>(rec.attempts));
    s.run_stats.push_back({rec.engine_stats, rec.quantum_stats, wall_since(t0)});
  }
  aggregate(s, "end_fidelity", fids);
  aggregate(s, "duration_ns", durs);
  aggregate(s, "attempts", atts);
  return s;
}

ScenarioSummary run_switch_scenario(const ScenarioConfig& cfg, const fs::path& dir) {
  ScenarioSummary s;
  qswitch::SwitchConfig sw;
  sw.leaves = param(cfg.params, "leaves", 2);
  sw.ghz_size = param(cfg.params, "ghz_size", 2);
  sw.buffer = param(cfg.params, "buffer", 1);
  sw.formalism = cfg.formalism;
  if (cfg.params.contains("t2_ns")) sw.t2_ns = cfg.params["t2_ns"].get<double>();
  if (cfg.params.contains("rates_hz")) {
    const json& r = cfg.params["rates_hz"];
    if (r.is_array()) sw.rates_hz = r.get<std::vector<double>>();
    else sw.rates_hz = {r.get<double>()};
  } else {
    sw.rates_hz = {1000.0};
  }
  const double duration_ns = param(cfg.params, "duration_ns", 1e9);

  Csv results(s, dir, "results.csv", "run,seed,produced,capacity_hz,mean_fidelity");
  Csv ghz(s, dir, "ghz.csv", "run,seed,time_ns,outcomes,fidelity");
  std::vector<double> caps, fids;
  for (int i = 0; i < cfg.runs; ++i) {
    const std::uint64_t seed = cfg.seed + i;
    const auto t0 = std::chrono::steady_clock::now();
    const qswitch::SwitchResult res = qswitch::run_switch(sw, duration_ns, seed);
    results.row({u64(i), u64(seed), u64(res.produced), csv_double(res.capacity_hz),
                 csv_double(res.mean_fidelity)});
    for (const qswitch::GhzRecord& r : res.records) {
      std::string bits;
      for (int b : r.outcomes) bits += static_cast<char>('0' + b);
      ghz.row({u64(i), u64(seed), csv_double(r.time_ns), bits, csv_double(r.fidelity)});
    }
    caps.push_back(res.capacity_hz);
    fids.push_back(res.mean_fidelity);
    s.run_stats.push_back({res.engine_stats, res.quantum_stats, wall_since(t0)});
  }
  aggregate(s, "capacity_hz", caps);
  aggregate(s, "mean_fidelity", fids);
  return s;
}

ScenarioSummary run_bench_ghz(const ScenarioConfig& cfg, const fs::path& dir) {
  ScenarioSummary s;
  const std::vector<int> sizes = size_list(cfg.params, param(cfg.params, "n_min", 4),
                                           param(cfg.params, "n_max", 20),
                                           param(cfg.params, "n_step", 1));
  const int iterations = param(cfg.params, "iterations", 30);
  const int repetitions = param(cfg.params, "repetitions", 5);

  Csv results(s, dir, "results.csv", "run,seed,formalism,memoize,n,digest,max_state");
  Csv timing(s, dir, "timing.csv", "run,seed,formalism,memoize,n,seconds");
  std::vector<BenchPoint> first_run;
  for (int i = 0; i < cfg.runs; ++i) {
    const std::uint64_t seed = cfg.seed + i;
    for (int n : sizes) {
      const BenchPoint pt = bench_ghz(n, cfg.formalism, cfg.memoize, iterations, repetitions,
                                      seed);
      results.row({u64(i), u64(seed), formalism_name(cfg.formalism), cfg.memoize ? "on" : "off",
                   i64(n), u64(pt.digest), u64(pt.max_state)});
      timing.row({u64(i), u64(seed), formalism_name(cfg.formalism), cfg.memoize ? "on" : "off",
                  i64(n), csv_double(pt.seconds)});
      if (i == 0) first_run.push_back(pt);
    }
  }
  if (first_run.size() >= 2) s.timing_metrics["log_log_slope"] = log_log_slope(first_run);
  return s;
}

ScenarioSummary run_bench_repchain(const ScenarioConfig& cfg, const fs::path& dir) {
  ScenarioSummary s;
  const std::vector<int> sizes = size_list(cfg.params, param(cfg.params, "n_min", 8),
                                           param(cfg.params, "n_max", 8),
                                           param(cfg.params, "n_step", 2));
  const std::string mode = param<std::string>(cfg.params, "mode", "split");
  if (mode != "split" && mode != "inplace") throw net::ConfigError("mode must be split or inplace");
  const bool split = mode == "split";
  const int iterations = param(cfg.params, "iterations", 30);
  const int repetitions = param(cfg.params, "repetitions", 5);

  Csv results(s, dir, "results.csv",
              "run,seed,formalism,mode,n,digest,max_state,bell_fidelity");
  Csv timing(s, dir, "timing.csv", "run,seed,formalism,mode,n,seconds");
  std::vector<double> fids;
  for (int i = 0; i < cfg.runs; ++i) {
    const std::uint64_t seed = cfg.seed + i;
    for (int n : sizes) {
      const RepchainPoint pt = bench_repchain_qc(n, cfg.formalism, split, cfg.memoize,
                                                 iterations, repetitions, seed);
      results.row({u64(i), u64(seed), formalism_name(cfg.formalism), mode, i64(n),
                   u64(pt.digest), u64(pt.max_state), csv_double(pt.bell_fidelity)});
      timing.row({u64(i), u64(seed), formalism_name(cfg.formalism), mode, i64(n),
                  csv_double(pt.seconds)});
      fids.push_back(pt.bell_fidelity);
    }
  }
  aggregate(s, "bell_fidelity", fids);
  return s;
}

ScenarioSummary run_bench_chain(const ScenarioConfig& cfg, const fs::path& dir) {
  ScenarioSummary s;
  const int nodes = param(cfg.params, "nodes", 10);
  const std::string mode = param<std::string>(cfg.params, "mode", "split");
  if (mode != "split" && mode != "inplace") throw net::ConfigError("mode must be split or inplace");

  Csv results(s, dir, "results.csv",
              "run,seed,nodes,formalism,mode,end_fidelity,corrections,messages,"
              "events_processed,max_state");
  std::vector<double> fids;
  for (int i = 0; i < cfg.runs; ++i) {
    const std::uint64_t seed = cfg.seed + i;
    const ChainBenchResult res = bench_chain(nodes, cfg.formalism, mode == "split", seed);
    results.row({u64(i), u64(seed), i64(nodes), formalism_name(cfg.formalism), mode,
                 csv_double(res.end_fidelity), i64(res.corrections), u64(res.messages),
                 u64(res.engine.events_processed()), u64(res.quantum.max_state_qubits)});
    fids.push_back(res.end_fidelity);
    s.run_stats.push_back({res.engine, res.quantum, res.wall_seconds});
  }
  aggregate(s, "end_fidelity", fids);
  if (!s.run_stats.empty()) {
    std::uint64_t mx = 0;
    for (const RunStats& r : s.run_stats) mx = std::max(mx, r.quantum.max_state_qubits);
    s.metrics["max_state_qubits"] = static_cast<double>(mx);
  }
  return s;
}

}  // namespace

ScenarioSummary run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  ScenarioSummary s;
  if (cfg.scenario == "nv-chain") s = run_nv_chain(cfg, dir);
  else if (cfg.scenario == "switch") s = run_switch_scenario(cfg, dir);
  else if (cfg.scenario == "bench-ghz") s = run_bench_ghz(cfg, dir);
  else if (cfg.scenario == "bench-repchain-qc") s = run_bench_repchain(cfg, dir);
  else s = run_bench_chain(cfg, dir);
  write_summary(s, dir);
  if (!s.run_stats.empty()) write_stats(s, dir, cfg.seed);
  return s;
}

}  // namespace qnet::cli
