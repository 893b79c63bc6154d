// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "qnetsim/nv/nv.hpp"

namespace qnet::nv {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

net::QuantumProcessor* make_nv_processor(net::Runtime& rt, std::string name, int carbons,
                                         quant::Formalism f, const NVParams& p) {
  p.validate();
  if (carbons < 1) throw net::ConfigError("NV processor needs at least one carbon");
  auto* proc = new net::QuantumProcessor(rt, std::move(name), carbons + 1, f);
  proc->memory().set_noise(kElectron, noise::T1T2(p.electron_t1_ns, p.electron_t2_ns));
  std::vector<int> carbon_pos;
  std::vector<std::pair<int, int>> star;
  for (int c = 1; c <= carbons; ++c) {
    proc->memory().set_noise(c, noise::T1T2(p.carbon_t1_ns, p.carbon_t2_ns));
    carbon_pos.push_back(c);
    star.emplace_back(kElectron, c);
  }
  const std::vector<int> electron_pos{kElectron};
  using GK = noise::GateNoiseKind;
  const double p_einit = noise::fidelity_to_depol(GK::Init, p.f_electron_init);
  const double p_cinit = noise::fidelity_to_depol(GK::Init, p.f_carbon_init);
  const double p_egate = noise::fidelity_to_depol(GK::Rotation, p.f_electron_gate);
  const double p_crz = noise::fidelity_to_depol(GK::Rotation, p.f_carbon_rz);
  const double p_ec = noise::fidelity_to_depol(GK::TwoQubitEC, p.f_ec);

  proc->map_instruction({"init_e", "init", p.d_electron_init_ns, p_einit, 1, 1, electron_pos, {}});
  proc->map_instruction({"init_c", "init", p.d_carbon_init_ns, p_cinit, 1, 1, carbon_pos, {}});
  for (const char* g : {"rx_e", "ry_e", "rz_e", "h_e", "x_e", "y_e", "z_e"}) {
    std::string tag(g);
    std::string opc = tag.substr(0, tag.size() - 2);
    proc->map_instruction(
        {tag, opc, p.d_electron_gate_ns, p_egate, 1, 1, electron_pos, {}});
  }
  proc->map_instruction({"rz_c", "rz", p.d_carbon_rz_ns, p_crz, 1, 1, carbon_pos, {}});
  proc->map_instruction({"crx", "crx", p.d_ec_ns, p_ec, 1, 1, {}, star});
  proc->map_instruction(
      {"measure", "measure", p.d_readout_ns, 0, p.f_readout0, p.f_readout1, electron_pos, {}});
  return proc;
}

net::QuantumProgram store_block(int carbon) {
  net::QuantumProgram prog;
  prog.add("init_c", {carbon});
  prog.add("rz_c", {carbon}, -kHalfPi);
  prog.add("crx", {kElectron, carbon}, kHalfPi);
  prog.add("rz_c", {carbon}, kHalfPi);
  prog.add("rx_e", {kElectron}, kHalfPi);
  prog.add("crx", {kElectron, carbon}, kHalfPi);
  prog.add("ry_e", {kElectron}, -kHalfPi);
  return prog;
}

net::QuantumProgram retrieve_block(int carbon) {
  net::QuantumProgram prog;
  prog.add("init_e", {kElectron});
  prog.add("ry_e", {kElectron}, kHalfPi);
  prog.add("crx", {kElectron, carbon}, -kHalfPi);
  prog.add("rx_e", {kElectron}, -kHalfPi);
  prog.add("rz_c", {carbon}, -kHalfPi);
  prog.add("crx", {kElectron, carbon}, -kHalfPi);
  prog.add("rz_c", {carbon}, kHalfPi);
  return prog;
}

net::QuantumProgram distill_block(int carbon) {
  net::QuantumProgram prog;
  prog.add("ry_e", {kElectron}, kHalfPi);
  prog.add("crx", {kElectron, carbon}, -kHalfPi);
  prog.add("rx_e", {kElectron}, kHalfPi);
  prog.add_measure(kElectron, "m");
  return prog;
}

net::QuantumProgram swap_block(int carbon) {
  net::QuantumProgram prog;
  prog.add("rz_c", {carbon}, kHalfPi);
  prog.add("crx", {kElectron, carbon}, kHalfPi);
  prog.add("rz_c", {carbon}, -kHalfPi);
  prog.add("ry_e", {kElectron}, kHalfPi);
  prog.add_measure(kElectron, "m_earlier");
  prog.append(retrieve_block(carbon));
  prog.add("h_e", {kElectron});
  prog.add_measure(kElectron, "m_later");
  return prog;
}

}  // namespace qnet::nv
