// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qnetsim/cli/bench.hpp"
#include "qnetsim/cli/scenario.hpp"

using namespace qnet;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct EnvGuard {
  std::string key;
  EnvGuard(const std::string& k, const std::string& v) : key(k) {
    setenv(k.c_str(), v.c_str(), 1);
  }
  ~EnvGuard() { unsetenv(key.c_str()); }
};

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "qnetsim_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("csv floats round-trip at full precision") {
  CHECK(cli::csv_double(1.0) == "1");
  CHECK(std::stod(cli::csv_double(0.1)) == 0.1);
  CHECK(std::stod(cli::csv_double(2.0 / 3.0)) == 2.0 / 3.0);
}

TEST_CASE("formalism names parse both ways") {
  for (auto f : {quant::Formalism::KET, quant::Formalism::DM, quant::Formalism::STAB,
                 quant::Formalism::GSLC})
    CHECK(cli::parse_formalism(cli::formalism_name(f)) == f);
  CHECK_THROWS_AS(cli::parse_formalism("qubit"), net::ConfigError);
}

TEST_CASE("config parsing validates schema and fields") {
  json good = {{"schema_version", 1}, {"scenario", "nv-chain"}, {"runs", 3}, {"seed", 9}};
  auto cfg = cli::config_from_json(good);
  CHECK(cfg.scenario == "nv-chain");
  CHECK(cfg.runs == 3);
  CHECK(cfg.seed == 9);

  CHECK_THROWS_AS(cli::config_from_json(json::array()), net::ConfigError);
  CHECK_THROWS_AS(cli::config_from_json({{"scenario", "nv-chain"}}), net::ConfigError);
  CHECK_THROWS_AS(cli::config_from_json({{"schema_version", 2}, {"scenario", "nv-chain"}}),
                  net::ConfigError);
  CHECK_THROWS_AS(cli::config_from_json({{"schema_version", 1}, {"scenario", "bogus"}}),
                  net::ConfigError);
  CHECK_THROWS_AS(
      cli::config_from_json({{"schema_version", 1}, {"scenario", "nv-chain"}, {"runs", 0}}),
      net::ConfigError);
  CHECK_THROWS_AS(
      cli::config_from_json({{"schema_version", 1}, {"scenario", "nv-chain"}, {"runs", "x"}}),
      net::ConfigError);
}

TEST_CASE("environment variables override existing and absent keys") {
  SUBCASE("existing scalar") {
    EnvGuard g("QNETSIM_RUNS", "7");
    auto cfg = cli::config_from_json({{"schema_version", 1}, {"scenario", "nv-chain"},
                                      {"runs", 2}});
    CHECK(cfg.runs == 7);
  }
  SUBCASE("existing nested key") {
    EnvGuard g("QNETSIM_PARAMS_NODES", "5");
    auto cfg = cli::config_from_json({{"schema_version", 1}, {"scenario", "nv-chain"},
                                      {"params", {{"nodes", 3}}}});
    CHECK(cfg.params.at("nodes").get<int>() == 5);
  }
  SUBCASE("key absent from the params section is created") {
    EnvGuard g("QNETSIM_PARAMS_NODES", "9");
    auto cfg = cli::config_from_json({{"schema_version", 1}, {"scenario", "nv-chain"}});
    CHECK(cfg.params.at("nodes").get<int>() == 9);
  }
  SUBCASE("values parse as JSON with a string fallback") {
    EnvGuard g1("QNETSIM_PARAMS_RATES_HZ", "[100.0, 200.0]");
    EnvGuard g2("QNETSIM_PARAMS_PROTOCOL", "swap-asap");
    json root = {{"schema_version", 1},
                 {"scenario", "switch"},
                 {"params", {{"rates_hz", 50.0}, {"protocol", "nested"}}}};
    auto cfg = cli::config_from_json(root);
    CHECK(cfg.params.at("rates_hz").is_array());
    CHECK(cfg.params.at("rates_hz")[1].get<double>() == 200.0);
    CHECK(cfg.params.at("protocol").get<std::string>() == "swap-asap");
  }
}

TEST_CASE("repeat runs of a scenario write byte-identical result files") {
  cli::ScenarioConfig cfg;
  cfg.scenario = "switch";
  cfg.runs = 2;
  cfg.seed = 5;
  cfg.params = {{"leaves", 3}, {"ghz_size", 2}, {"buffer", 1}, {"rates_hz", 2000.0},
                {"duration_ns", 2.0e8}};
  const fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
  cfg.out_dir = d1.string();
  auto s1 = cli::run_scenario(cfg);
  cfg.out_dir = d2.string();
  auto s2 = cli::run_scenario(cfg);
  for (const char* f : {"results.csv", "summary.csv", "ghz.csv"}) {
    CAPTURE(f);
    CHECK(slurp(d1 / f) == slurp(d2 / f));
  }
  CHECK(s1.metrics.at("capacity_hz") == s2.metrics.at("capacity_hz"));
  // The stats file exists and its header ends with the wall-clock column.
  const std::string stats = slurp(d1 / "stats.csv");
  CHECK(stats.substr(0, stats.find('\n')).ends_with("wall_seconds"));
}

TEST_CASE("chain scenario records per-run rows keyed by seed") {
  cli::ScenarioConfig cfg;
  cfg.scenario = "nv-chain";
  cfg.runs = 3;
  cfg.seed = 40;
  cfg.params = {{"nodes", 3}, {"noiseless", true}};
  const fs::path dir = fresh_dir("chain");
  cfg.out_dir = dir.string();
  auto s = cli::run_scenario(cfg);
  CHECK(s.metrics.at("end_fidelity") == doctest::Approx(1.0).epsilon(1e-9));
  const std::string rows = slurp(dir / "results.csv");
  CHECK(rows.find("\n40,") != std::string::npos);
  CHECK(rows.find("\n42,") != std::string::npos);
}

TEST_CASE("unknown scenarios and bad parameters are rejected") {
  cli::ScenarioConfig cfg;
  cfg.scenario = "teleport";
  CHECK_THROWS_AS(cfg.validate(), net::ConfigError);
  cfg.scenario = "bench-repchain-qc";
  cfg.out_dir = fresh_dir("bad").string();
  cfg.params = {{"mode", "sideways"}};
  CHECK_THROWS_AS(cli::run_scenario(cfg), net::ConfigError);
}

TEST_CASE("ghz benchmark digests are independent of memoization") {
  auto on = cli::bench_ghz(8, quant::Formalism::KET, true, 3, 1, 11);
  auto off = cli::bench_ghz(8, quant::Formalism::KET, false, 3, 1, 11);
  CHECK(on.digest == off.digest);
  CHECK(on.n == 8);
  CHECK(on.seconds > 0);
  CHECK(on.max_state == 8);
}

TEST_CASE("the repeater-chain circuit ends in a perfect bell pair") {
  for (int n : {4, 6, 8}) {
    CAPTURE(n);
    auto pt = cli::bench_repchain_qc(n, quant::Formalism::KET, true, true, 2, 1, 3);
    CHECK(pt.bell_fidelity == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pt.max_state <= static_cast<std::uint64_t>(n));
  }
  CHECK_THROWS_AS(cli::bench_repchain_qc(5, quant::Formalism::KET, true, true, 1, 1, 1),
                  cli::OddQubitCount);
  CHECK_THROWS_AS(cli::bench_repchain_qc(2, quant::Formalism::KET, true, true, 1, 1, 1),
                  cli::OddQubitCount);
}

TEST_CASE("the event-driven chain benchmark stays small in split mode") {
  auto res = cli::bench_chain(4, quant::Formalism::KET, true, 2);
  CHECK(res.nodes == 4);
  CHECK(res.corrections == 2);
  CHECK(res.quantum.max_state_qubits <= 4);
  CHECK(res.end_fidelity >= 0.0);
  CHECK(res.end_fidelity <= 1.0);
  CHECK(res.messages > 0);
}

TEST_CASE("slope fitting recovers a known power law") {
  std::vector<cli::BenchPoint> pts;
  for (int n : {10, 20, 40, 80}) pts.push_back({n, 1e-6 * n * n * n, 0, 0});
  CHECK(cli::log_log_slope(pts) == doctest::Approx(3.0).epsilon(1e-9));
}
