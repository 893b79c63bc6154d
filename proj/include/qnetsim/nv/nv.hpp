// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Nitrogen-vacancy hardware model: parameter set with uniform improvement,
// elementary-link state sampling, Pauli correction tracking, and the
// five building-block gate programs.

#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "qnetsim/net/processor.hpp"
#include "qnetsim/quant/types.hpp"

namespace qnet::nv {

struct ZeroSuccessProbability : net::NetError {
  ZeroSuccessProbability() : NetError("link success probability is zero") {}
};

// Hardware parameter set; defaults are the near-term values. Times in ns,
// rates in Hz.
struct NVParams {
  // Elementary link.
  double alpha = 0.1;              // bright-state population
  double visibility = 0.9;         // photon indistinguishability
  double p_dexc = 0.06;            // double-excitation probability
  double gamma_db_per_km = 0.2;    // fibre transmission loss
  double lambda_dark_hz = 1.0;     // detector dark-count rate
  double t_window_ns = 25.0;       // midpoint detection window
  double p_det_nofibre = 0.0046;   // detection probability at zero length
  double sigma_phase = 0.35;       // interferometric phase uncertainty (rad)
  double n_1e = 1400.0;            // pumping cycles to 1/e nuclear coherence
  double t_emission_ns = 3800.0;   // photon emission delay

  // Memory coherence.
  double electron_t1_ns = 3600.0e9;   // 1 h
  double electron_t2_ns = 1.46e9;     // T2*
  double carbon_t1_ns = 36000.0e9;    // 10 h
  double carbon_t2_ns = 1.0e9;

  // Gate and readout fidelities.
  double f_carbon_init = 0.997;
  double f_carbon_rz = 0.999;
  double f_ec = 0.97;           // electron-carbon controlled-RX
  double f_electron_init = 0.99;
  double f_electron_gate = 1.0;
  double f_readout0 = 0.95;
  double f_readout1 = 0.995;

  // Durations (not affected by improvement).
  double d_carbon_init_ns = 310.0e3;
  double d_carbon_rz_ns = 20.0e3;
  double d_ec_ns = 500.0e3;
  double d_electron_init_ns = 2.0e3;
  double d_electron_gate_ns = 5.0;
  double d_readout_ns = 3700.0;

  // Fibre light speed, km per ns (vacuum speed over refractive index 1.44).
  double c_fibre_km_per_ns = 299792.458e-9 / 1.44;

  void validate() const;  // throws ConfigError
};

// All noiseless: infinite coherence, unit fidelities, zero dark counts and
// phase noise, no double excitation, perfect visibility.
NVParams noiseless_params();

// Uniform hardware improvement: every error probability p is mapped so that
// its no-error probability q becomes q^{1/kappa}; coherence times scale as
// kappa*T; loss (dB/km) and durations are unchanged.
NVParams improve(const NVParams& p, double kappa);

// Single-attempt click probabilities for one elementary-link generation
// attempt over internode distance L.
struct LinkProbs {
  double p_det = 0;
  double p_dc = 0;
  double p00 = 0, p01 = 0, p10 = 0, p11 = 0;
  double p_succ = 0;
};
LinkProbs link_probabilities(const NVParams& p, double length_km);

// One successful generation: attempt count, detector sign, the produced
// two-qubit density matrix (with double-excitation and phase dephasing
// already applied), the elapsed time including heralding, and the
// accumulated dephasing probability for storage qubits at either node.
struct LinkSample {
  std::uint64_t k = 1;
  int sign = +1;  // which detector clicked
  quant::Mat rho;
  double elapsed_ns = 0;
  double storage_dephase_p = 0;
};
LinkSample sample_link(const NVParams& p, double length_km, std::mt19937_64& rng);

// Generation interval per attempt: t_emission + L / c_fibre.
double attempt_interval_ns(const NVParams& p, double length_km);

// ---------------------------------------------------------------------------
// Pauli correction tracking

namespace frame {

enum class P : std::uint8_t { I, X, Y, Z };

// Product modulo phase.
P mul(P a, P b);
char name(P p);

// Correction after generation: '+' click needs none; '-' click puts Z on the
// node with the higher chain index.
P entgen_correction(int sign, bool higher_index);

// Measured-Bell correction factor Q for swap outcome (a, b).
P swap_q(int a, int b);

// What the swapping node sends to the far (higher-index) end.
inline P swap_correction(P pm_a, P pm_b, int a, int b) {
  return mul(mul(pm_a, pm_b), swap_q(a, b));
}

// Successful distillation: the lower-index node resets to I; the other node
// gets Y exactly when one of the two prior nuclear Paulis was in {X, Y}.
P distill_correction(P pa_nuclear, P pb_nuclear);

// Success test: adjacent nodes need both outcome bits 0; remote nodes need
// equal bits.
bool distill_success(bool adjacent, int m1_bit, int m2_bit);

}  // namespace frame

// Initiator span in the nested protocol: on 2^n + 1 nodes, node k acts only
// on entanglement spanning f(n, k) segments.
int f_span(int n, int k);

// ---------------------------------------------------------------------------
// Building-block programs and processor

// Positions: 0 is the electron, 1..C are carbons.
inline constexpr int kElectron = 0;

// A processor with the NV star topology and the parameter set's gate noise:
// electron single-qubit gates, carbon init/RZ, electron-carbon controlled-RX,
// electron readout.
net::QuantumProcessor* make_nv_processor(net::Runtime& rt, std::string name, int carbons,
                                         quant::Formalism f, const NVParams& p);

// Electron state onto a freshly initialised carbon (in the H-rotated basis).
net::QuantumProgram store_block(int carbon);
// Inverse of store: carbon back onto a freshly initialised electron.
net::QuantumProgram retrieve_block(int carbon);
// Local distillation half: rotations, one controlled gate, electron readout
// recorded as "m".
net::QuantumProgram distill_block(int carbon);
// Bell-state measurement of electron and carbon: outcomes "m_earlier" and
// "m_later"; a = -m_earlier*m_later, b = m_later in sign convention.
net::QuantumProgram swap_block(int carbon);

}  // namespace qnet::nv
