// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Buffered entanglement switch at the centre of a star network: exponential
// pair arrivals per leaf, drop-oldest buffers, multipartite measurement that
// fuses stored pairs into a GHZ-class state, and a continuous-time Markov
// occupancy oracle for the production capacity.

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "qnetsim/net/net.hpp"

namespace qnet::qswitch {

struct InsufficientLinks : net::NetError {
  InsufficientLinks() : NetError("fewer stored pairs than the measurement needs") {}
};
struct StateSpaceTooLarge : net::NetError {
  StateSpaceTooLarge() : NetError("occupancy chain is too large to solve") {}
};

struct SwitchConfig {
  int leaves = 2;    // k
  int ghz_size = 2;  // n, between 2 and k
  std::vector<double> rates_hz;  // one per leaf; a single entry is broadcast
  int buffer = 1;    // stored pairs per leaf at the switch
  double t2_ns = std::numeric_limits<double>::infinity();
  quant::Formalism formalism = quant::Formalism::KET;

  void validate() const;  // throws ConfigError
  double rate(int leaf) const {
    return rates_hz.size() == 1 ? rates_hz[0] : rates_hz.at(leaf);
  }
};

// Exponential inter-arrival sample for a source of the given rate (Hz),
// returned in ns.
double next_arrival_ns(double rate_hz, std::mt19937_64& rng);

// Measurement program fusing the switch-side halves: CNOTs from the first
// qubit to every other, H on the first, then a standard-basis readout of
// each. Outcome bits select the produced GHZ basis element.
std::vector<int> ghz_measure(quant::Context& ctx, const std::vector<quant::QubitPtr>& qubits);

// The GHZ basis element |0 b2..bn> + (-1)^{b1} |1 ~b2..~bn> (normalised).
Eigen::VectorXcd ghz_reference(const std::vector<int>& outcomes);

// Fidelity of the leaf-side state with the outcome-conditioned reference,
// computed as a trace-normalised quadratic form so a perfect state reports
// exactly 1.
double ghz_fidelity(const std::vector<quant::QubitPtr>& leaf_qubits,
                    const std::vector<int>& outcomes);

struct GhzRecord {
  double time_ns = 0;
  std::vector<int> outcomes;
  double fidelity = 0;
};

struct SwitchResult {
  std::uint64_t produced = 0;
  double capacity_hz = 0;     // produced states per simulated second
  double mean_fidelity = 0;
  std::vector<GhzRecord> records;
  // Counter snapshots taken when the run completes.
  sim::Statistics engine_stats;
  quant::QuantStats quantum_stats;
};

// Event-driven run over the given simulated duration. Pairs arrive per leaf
// on exponential clocks with zero channel delay; stored halves dephase with
// their storage age when the measurement touches them; the switch operations
// themselves are noiseless and take no time.
SwitchResult run_switch(const SwitchConfig& cfg, double duration_ns, std::uint64_t seed);

// Stationary capacity of the occupancy chain (memory decoherence ignored).
// Because a measurement fires the instant n leaves are occupied, reachable
// occupancies have at most n-1 nonempty leaves and the chain closes over
// counts alone.
double markov_oracle(const SwitchConfig& cfg);

}  // namespace qnet::qswitch
