// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Repeater chain scenario on NV hardware: generate-and-swap-immediately, and
// the nested scheme with distillation at every level. Corrections are
// tracked classically per qubit instead of being applied to the hardware.

#pragma once

#include <cstdint>
#include <vector>

#include "qnetsim/nv/nv.hpp"

namespace qnet::nv {

enum class ChainProtocol { SwapAsap, NestedWithDistill };

struct ChainConfig {
  int nodes = 3;
  double length_km = 2.0;  // end to end; equal spacing
  ChainProtocol protocol = ChainProtocol::SwapAsap;
  quant::Formalism formalism = quant::Formalism::DM;
  // Storage positions per node. The nested protocol can hold two distilled
  // pairs per level plus four raw pairs at a middle node.
  int carbons = 16;
};

// One noiseless-oracle record per distillation attempt: outcome bits of the
// two nodes, the expected Bell labels of the circuit inputs derived from the
// tracked corrections, and the success verdict.
struct DistillRecord {
  int m1_bit = 0;  // initiator
  int m2_bit = 0;  // responder
  int b = 0;       // electron-pair label after the tracked-Pauli application
  int d = 0;       // kept-pair label
  bool success = false;
};

struct RunRecord {
  double end_fidelity = 0;
  double duration_ns = 0;       // until both end nodes know the final pair
  std::uint64_t attempts = 0;   // summed generation attempts
  int swaps = 0;
  std::vector<DistillRecord> distills;
  // Counter snapshots taken when the run completes.
  sim::Statistics engine_stats;
  quant::QuantStats quantum_stats;
};

// Runs one chain realisation to completion (both end nodes share one pair
// and have received the final correction messages).
RunRecord run_chain(const ChainConfig& cfg, const NVParams& params, std::uint64_t seed);

}  // namespace qnet::nv
