// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnetsim/net/processor.hpp"

#include <algorithm>

namespace qnet::net {

namespace quant_api = quant::api;

QuantumProcessor::QuantumProcessor(Runtime& rt, std::string name, int positions,
                                   quant::Formalism f, noise::T1T2 default_noise)
    : Component(rt, std::move(name)),
      memory_(rt, positions, default_noise),
      formalism_(f) {
  entity_ = rt_->engine.create_entity();
  rt_->engine.register_handler(
      sim::MatchSpec{kProgramDone, entity_, std::nullopt},
      [this](const sim::Event&) { busy_ = false; },
      /*collector=*/true, entity_);
}

void QuantumProcessor::map_instruction(PhysicalInstruction pi) {
  if (pi.duration_ns < 0) throw ConfigError("instruction duration must be >= 0");
  instr_[pi.tag] = std::move(pi);
}

const PhysicalInstruction& QuantumProcessor::lookup(const ProgramStep& step) const {
  auto it = instr_.find(step.tag);
  if (it == instr_.end())
    throw UnmappedInstruction("no physical instruction for '" + step.tag + "'");
  return it->second;
}

void QuantumProcessor::check_topology(const PhysicalInstruction& pi,
                                      const ProgramStep& step) const {
  for (int p : step.pos)
    if (p < 0 || p >= memory_.size())
      throw TopologyViolation("position out of range in '" + step.tag + "'");
  if (step.pos.size() == 1) {
    if (!pi.positions.empty() &&
        std::find(pi.positions.begin(), pi.positions.end(), step.pos[0]) == pi.positions.end())
      throw TopologyViolation("'" + step.tag + "' not available at this position");
  } else if (step.pos.size() == 2) {
    if (step.pos[0] == step.pos[1])
      throw TopologyViolation("'" + step.tag + "' needs two distinct positions");
    if (!pi.pairs.empty()) {
      const std::pair<int, int> want{step.pos[0], step.pos[1]};
      if (std::find(pi.pairs.begin(), pi.pairs.end(), want) == pi.pairs.end())
        throw TopologyViolation("'" + step.tag + "' not available on this pair");
    }
  }
}

int QuantumProcessor::run_measure(const PhysicalInstruction& pi, int pos) {
  const quant::QubitPtr& q = memory_.access(pos);
  quant::Context& ctx = rt_->quantum;
  if (pi.readout_f0 == 1 && pi.readout_f1 == 1)
    return quant_api::measure(ctx, q, quant::MeasureMode::Inplace).outcome;
  const quant::Formalism f = q->state().formalism();
  if (f == quant::Formalism::DM || f == quant::Formalism::KET) {
    auto [m0, m1] = noise::readout_povm(pi.readout_f0, pi.readout_f1);
    return quant_api::measure_povm(ctx, q, m0, m1).outcome;
  }
  // Stabiliser backends: projective measurement with a classically flipped
  // report. Outcome statistics match the readout POVM; the post-measurement
  // state is the projective one.
  const int truth = quant_api::measure(ctx, q, quant::MeasureMode::Inplace).outcome;
  const double keep = truth == 0 ? pi.readout_f0 : pi.readout_f1;
  return ctx.uniform() < keep ? truth : 1 - truth;
}

ProgramRun QuantumProcessor::execute(const QuantumProgram& prog) {
  if (busy_) throw ConfigError("processor '" + name_ + "' is busy");
  quant::Context& ctx = rt_->quantum;
  // Age every occupied position up to the program start time.
  for (int p = 0; p < memory_.size(); ++p)
    if (memory_.occupied(p)) memory_.access(p);

  ProgramRun run;
  for (const ProgramStep& step : prog.steps) {
    if (step.cond) {
      auto it = run.outcomes.find(step.cond->first);
      if (it == run.outcomes.end())
        throw ConfigError("branch on unrecorded outcome '" + step.cond->first + "'");
      if (it->second != step.cond->second) continue;
    }
    const PhysicalInstruction& pi = lookup(step);
    check_topology(pi, step);
    run.duration_ns += pi.duration_ns;
    const std::string& opcode = pi.op.empty() ? step.tag : pi.op;

    if (opcode == "init") {
      if (step.pos.size() != 1) throw ConfigError("init takes one position");
      if (memory_.occupied(step.pos[0])) quant_api::discard(ctx, memory_.pop(step.pos[0]));
      memory_.put(step.pos[0], quant_api::create_qubits(ctx, 1, formalism_)[0]);
    } else if (opcode == "measure") {
      if (step.pos.size() != 1) throw ConfigError("measure takes one position");
      const int outcome = run_measure(pi, step.pos[0]);
      if (!step.record_as.empty()) run.outcomes[step.record_as] = outcome;
      continue;  // no gate noise after readout
    } else {
      std::vector<quant::QubitPtr> targets;
      for (int p : step.pos) targets.push_back(memory_.access(p));
      const quant::Operator* op = nullptr;
      quant::Operator rot = quant::ops::identity();
      if (opcode == "x") op = &quant::ops::x();
      else if (opcode == "y") op = &quant::ops::y();
      else if (opcode == "z") op = &quant::ops::z();
      else if (opcode == "h") op = &quant::ops::h();
      else if (opcode == "s") op = &quant::ops::s();
      else if (opcode == "sdg") op = &quant::ops::sdg();
      else if (opcode == "cnot") op = &quant::ops::cnot();
      else if (opcode == "cz") op = &quant::ops::cz();
      else if (opcode == "rx") { rot = quant::ops::rx(step.angle); op = &rot; }
      else if (opcode == "ry") { rot = quant::ops::ry(step.angle); op = &rot; }
      else if (opcode == "rz") { rot = quant::ops::rz(step.angle); op = &rot; }
      else if (opcode == "crx") { rot = quant::ops::crx(step.angle); op = &rot; }
      else throw UnmappedInstruction("unknown primitive '" + opcode + "'");
      if (op->arity() != static_cast<int>(targets.size()))
        throw ConfigError("'" + step.tag + "' target count");
      quant_api::apply(ctx, *op, targets);
    }
    if (pi.depol_p > 0) {
      const quant::Channel depol = noise::depolarize_channel(pi.depol_p);
      for (int p : step.pos) quant_api::apply_channel(ctx, depol, {memory_.access(p)});
    }
  }

  // Every position occupied at completion decoheres for the whole program.
  for (int p = 0; p < memory_.size(); ++p)
    if (memory_.occupied(p)) memory_.advance(p, run.duration_ns);

  run.done = rt_->engine.schedule(entity_, run.duration_ns, kProgramDone);
  busy_ = true;
  last_outcomes_ = run.outcomes;
  return run;
}

}  // namespace qnet::net
