// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Quantum processor: gate programs executed against memory positions, with
// per-instruction durations, gate noise and connectivity constraints.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qnetsim/net/net.hpp"

namespace qnet::net {

// Instruction tags understood by the processor. Each tag used by a program
// must be mapped to a PhysicalInstruction, otherwise UnmappedInstruction.
//   init                 fresh |0> at the position (discards any occupant)
//   x y z h s sdg        fixed single-qubit gates
//   rx ry rz             single-qubit rotations by the step angle
//   crx                  controlled rotation, positions {control, target}:
//                        R_X(+angle) on target for control |0>, R_X(-angle)
//                        for control |1>
//   cnot cz              fixed two-qubit gates
//   measure              computational-basis readout, outcome recorded under
//                        the step's key; the post-measurement qubit stays
struct PhysicalInstruction {
  std::string tag;
  // Primitive the tag maps to (one of the tags above); empty means the tag
  // itself. Lets one device expose e.g. "init_e" and "init_c" with different
  // timing and noise.
  std::string op;
  double duration_ns = 0;
  // Depolarising parameter applied to each target after the perfect op.
  double depol_p = 0;
  // Readout fidelities (measure only).
  double readout_f0 = 1;
  double readout_f1 = 1;
  // Connectivity: allowed positions (single-qubit) or ordered position pairs
  // (two-qubit). Empty means unrestricted.
  std::vector<int> positions;
  std::vector<std::pair<int, int>> pairs;
};

struct ProgramStep {
  std::string tag;
  std::vector<int> pos;
  double angle = 0;
  std::string record_as;
  // Execute this step only when a previously recorded outcome equals the
  // given value; skipped steps contribute no duration.
  std::optional<std::pair<std::string, int>> cond;
};

struct QuantumProgram {
  std::vector<ProgramStep> steps;

  QuantumProgram& add(std::string tag, std::vector<int> pos, double angle = 0) {
    steps.push_back({std::move(tag), std::move(pos), angle, {}, std::nullopt});
    return *this;
  }
  QuantumProgram& add_measure(int pos, std::string record_as) {
    steps.push_back({"measure", {pos}, 0, std::move(record_as), std::nullopt});
    return *this;
  }
  QuantumProgram& add_cond(std::string key, int value, std::string tag, std::vector<int> pos,
                           double angle = 0) {
    steps.push_back({std::move(tag), std::move(pos), angle, {}, {{std::move(key), value}}});
    return *this;
  }
  QuantumProgram& append(const QuantumProgram& other) {
    steps.insert(steps.end(), other.steps.begin(), other.steps.end());
    return *this;
  }
};

using Outcomes = std::map<std::string, int>;

struct ProgramRun {
  Outcomes outcomes;
  double duration_ns = 0;
  sim::EventId done;  // kProgramDone event from the processor's entity
};

// Executes programs against its own memory. Gate effects are computed when
// execute() is called; the kProgramDone event fires after the summed duration
// of the executed steps, and every occupied position accrues its T1/T2 noise
// for that interval.
class QuantumProcessor : public Component {
 public:
  QuantumProcessor(Runtime& rt, std::string name, int positions, quant::Formalism f,
                   noise::T1T2 default_noise = {});

  QuantumMemory& memory() { return memory_; }
  sim::EntityId entity() const { return entity_; }
  quant::Formalism formalism() const { return formalism_; }

  void map_instruction(PhysicalInstruction pi);
  bool has_instruction(const std::string& tag) const { return instr_.count(tag) > 0; }

  ProgramRun execute(const QuantumProgram& prog);
  bool busy() const { return busy_; }
  const Outcomes& last_outcomes() const { return last_outcomes_; }

  sim::EventExpression done_expression() const {
    return sim::EventExpression::atomic({kProgramDone, entity_, std::nullopt});
  }

 private:
  const PhysicalInstruction& lookup(const ProgramStep& step) const;
  void check_topology(const PhysicalInstruction& pi, const ProgramStep& step) const;
  int run_measure(const PhysicalInstruction& pi, int pos);

  QuantumMemory memory_;
  quant::Formalism formalism_;
  sim::EntityId entity_;
  std::map<std::string, PhysicalInstruction> instr_;
  Outcomes last_outcomes_;
  bool busy_ = false;
};

}  // namespace qnet::net
