// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Timed benchmark circuits: GHZ generation, the repeater-chain quantum
// computation, and a full event-driven repeater chain run.

#pragma once

#include <cstdint>
#include <vector>

#include "qnetsim/net/net.hpp"

namespace qnet::cli {

struct OddQubitCount : net::ConfigError {
  OddQubitCount() : ConfigError("this circuit requires an even qubit count of at least 4") {}
};

// One timed circuit-family point. `seconds` is the per-iteration mean of the
// fastest repetition; `digest` hashes every measurement outcome of the first
// repetition, so equal digests mean identical measured outputs.
struct BenchPoint {
  int n = 0;
  double seconds = 0;
  std::uint64_t digest = 0;
  std::uint64_t max_state = 0;
};

// GHZ generation on n qubits: H on the first, a CNOT from it to every other,
// then sequential standard-basis measurements that split the measured qubit.
// Each repetition reseeds and times a block of `iterations` circuits.
BenchPoint bench_ghz(int n, quant::Formalism f, bool memoize, int iterations, int repetitions,
                     std::uint64_t seed);

struct RepchainPoint {
  int n = 0;
  double seconds = 0;
  std::uint64_t digest = 0;
  std::uint64_t max_state = 0;
  // Best Bell-state overlap of the corrected end pair, from one untimed
  // verification pass.
  double bell_fidelity = 0;
};

// Repeater-chain quantum computation on n qubits (n even, >= 4): entangle
// adjacent pairs, a deterministic cycled Pauli on every qubit, Bell-state
// measurements on the middle qubits, and classically controlled X/Z
// corrections on the last qubit. `split` selects whether measured qubits are
// detached from their shared state.
RepchainPoint bench_repchain_qc(int n, quant::Formalism f, bool split, bool memoize,
                                int iterations, int repetitions, std::uint64_t seed);

// Least-squares slope of log(seconds) against log(n): the degree estimate
// for a power-law runtime.
double log_log_slope(const std::vector<BenchPoint>& pts);

struct ChainBenchResult {
  int nodes = 0;
  double end_fidelity = 0;  // corrected end-to-end pair vs (|00> + |11>)/sqrt(2)
  int corrections = 0;      // swap-correction messages received by the end node
  std::uint64_t messages = 0;  // port deliveries initiated (qubits + corrections)
  double wall_seconds = 0;
  sim::Statistics engine;
  quant::QuantStats quantum;
};

// Event-driven repeater chain: nodes at 20 km spacing, synchronized perfect
// 100 kHz pair sources between neighbours, fibre-delay channels, entanglement
// swaps at every intermediate node, and corrections sent over direct
// classical fibres to the far end node, which applies them. Memories and
// channels depolarise on a 0.1 s timescale and gates dephase on 0.04 s. The
// run ends when the end-to-end pair is corrected.
ChainBenchResult bench_chain(int nodes, quant::Formalism f, bool split, std::uint64_t seed);

}  // namespace qnet::cli
