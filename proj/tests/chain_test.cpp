// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "qnetsim/nv/chain.hpp"

using namespace qnet;

TEST_CASE("a two-node chain is a single link with consistent timing") {
  const auto noiseless = nv::noiseless_params();
  nv::ChainConfig cfg;
  cfg.nodes = 2;
  cfg.length_km = 10.0;
  auto rec = nv::run_chain(cfg, noiseless, 7);
  CHECK(rec.end_fidelity > 1 - 1e-9);
  const double dt = nv::attempt_interval_ns(noiseless, 10.0);
  CHECK(rec.duration_ns ==
        doctest::Approx(static_cast<double>(rec.attempts) * dt).epsilon(1e-6));
  CHECK(rec.swaps == 0);
  CHECK(rec.engine_stats.events_processed() > 0);
}

TEST_CASE("noiseless swap-as-soon-as-possible chains give perfect pairs") {
  const auto noiseless = nv::noiseless_params();
  for (int n : {3, 4, 5}) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      CAPTURE(n);
      CAPTURE(seed);
      nv::ChainConfig cfg;
      cfg.nodes = n;
      cfg.length_km = 2.0 * (n - 1);
      auto rec = nv::run_chain(cfg, noiseless, seed);
      REQUIRE(rec.end_fidelity > 1 - 1e-9);
      CHECK(rec.swaps == n - 2);
    }
  }
}

TEST_CASE("noiseless nested distillation chains give perfect pairs") {
  const auto noiseless = nv::noiseless_params();
  for (int n : {3, 5}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      CAPTURE(n);
      CAPTURE(seed);
      nv::ChainConfig cfg;
      cfg.nodes = n;
      cfg.length_km = 2.0 * (n - 1);
      cfg.protocol = nv::ChainProtocol::NestedWithDistill;
      auto rec = nv::run_chain(cfg, noiseless, seed);
      REQUIRE(rec.end_fidelity > 1 - 1e-9);
      CHECK(!rec.distills.empty());
      for (const auto& d : rec.distills) {
        const int m1 = 1 - 2 * d.m1_bit, m2 = 1 - 2 * d.m2_bit;
        REQUIRE(m2 == m1 * d.b * d.d);
      }
    }
  }
}

TEST_CASE("near-term hardware completes with a sane fidelity") {
  nv::ChainConfig cfg;
  cfg.nodes = 3;
  cfg.length_km = 4.0;
  auto rec = nv::run_chain(cfg, nv::NVParams{}, 3);
  CHECK(rec.end_fidelity > 0.25);
  CHECK(rec.end_fidelity <= 1.0);
  CHECK(rec.attempts > 0);
  CHECK(rec.duration_ns > 0);
}

TEST_CASE("every formalism that supports the run agrees noiselessly") {
  const auto noiseless = nv::noiseless_params();
  for (auto f : {quant::Formalism::KET, quant::Formalism::DM}) {
    nv::ChainConfig cfg;
    cfg.nodes = 3;
    cfg.formalism = f;
    auto rec = nv::run_chain(cfg, noiseless, 5);
    CHECK(rec.end_fidelity > 1 - 1e-9);
  }
}

TEST_CASE("configuration errors are rejected up front") {
  const auto noiseless = nv::noiseless_params();
  nv::ChainConfig cfg;
  cfg.nodes = 1;
  CHECK_THROWS_AS(nv::run_chain(cfg, noiseless, 1), net::ConfigError);
  cfg = {};
  cfg.length_km = -1.0;
  CHECK_THROWS_AS(nv::run_chain(cfg, noiseless, 1), net::ConfigError);
  cfg = {};
  cfg.nodes = 4;  // the nested protocol needs a power-of-two segment count
  cfg.protocol = nv::ChainProtocol::NestedWithDistill;
  CHECK_THROWS_AS(nv::run_chain(cfg, noiseless, 1), net::ConfigError);
  cfg = {};
  cfg.nodes = 5;
  cfg.protocol = nv::ChainProtocol::NestedWithDistill;
  cfg.carbons = 4;  // too few storage positions for two levels
  CHECK_THROWS_AS(nv::run_chain(cfg, noiseless, 1), net::ConfigError);
  cfg = {};
  cfg.carbons = 1;
  CHECK_THROWS_AS(nv::run_chain(cfg, noiseless, 1), net::ConfigError);
}
