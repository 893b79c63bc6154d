// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include "qnetsim/nv/nv.hpp"

namespace qnet::nv {

namespace {

void check_prob(double v, const char* what) {
  if (!(v >= 0.0) || v > 1.0) throw net::ConfigError(std::string(what) + " outside [0,1]");
}

// No-error exponent rule: q -> q^(1/kappa) on the no-error probability q.
double improve_ne(double q, double kappa) { return std::pow(q, 1.0 / kappa); }

}  // namespace

void NVParams::validate() const {
  if (!(alpha > 0.0) || alpha >= 1.0) throw net::ConfigError("alpha outside (0,1)");
  check_prob(visibility, "visibility");
  check_prob(p_dexc, "p_dexc");
  check_prob(p_det_nofibre, "p_det_nofibre");
  check_prob(f_carbon_init, "carbon init fidelity");
  check_prob(f_carbon_rz, "carbon RZ fidelity");
  check_prob(f_ec, "controlled-RX fidelity");
  check_prob(f_electron_init, "electron init fidelity");
  check_prob(f_electron_gate, "electron gate fidelity");
  check_prob(f_readout0, "readout fidelity f0");
  check_prob(f_readout1, "readout fidelity f1");
  if (lambda_dark_hz < 0 || gamma_db_per_km < 0 || sigma_phase < 0)
    throw net::ConfigError("negative rate or loss parameter");
  if (!(n_1e > 0)) throw net::ConfigError("n_1e must be positive");
}

NVParams noiseless_params() {
  NVParams p;
  const double inf = std::numeric_limits<double>::infinity();
  // The produced link state approaches an exact Bell state only as the
  // bright-state population vanishes; keep it tiny but nonzero so the
  // success probability stays positive.
  p.alpha = 1e-12;
  p.visibility = 1.0;
  p.p_dexc = 0.0;
  p.lambda_dark_hz = 0.0;
  p.sigma_phase = 0.0;
  p.n_1e = inf;
  p.electron_t1_ns = inf;
  p.electron_t2_ns = inf;
  p.carbon_t1_ns = inf;
  p.carbon_t2_ns = inf;
  p.f_carbon_init = 1.0;
  p.f_carbon_rz = 1.0;
  p.f_ec = 1.0;
  p.f_electron_init = 1.0;
  p.f_electron_gate = 1.0;
  p.f_readout0 = 1.0;
  p.f_readout1 = 1.0;
  return p;
}

NVParams improve(const NVParams& p, double kappa) {
  if (!(kappa >= 1.0)) throw net::ConfigError("improvement factor must be >= 1");
  p.validate();
  NVParams out = p;

  // Error probabilities with no-error probability 1 - p.
  out.p_dexc = 1.0 - improve_ne(1.0 - p.p_dexc, kappa);
  // Dark counts: no-error e^{-t_w lambda}, equivalent to lambda / kappa.
  out.lambda_dark_hz = p.lambda_dark_hz / kappa;
  // Success probabilities improved directly.
  out.p_det_nofibre = improve_ne(p.p_det_nofibre, kappa);
  out.visibility = improve_ne(p.visibility, kappa);
  // Phase uncertainty through its dephasing probability.
  if (p.sigma_phase > 0) {
    const double ph = 0.5 * (1.0 - std::exp(-p.sigma_phase * p.sigma_phase / 2.0));
    const double ph2 = 1.0 - improve_ne(1.0 - ph, kappa);
    out.sigma_phase = std::sqrt(-2.0 * std::log(1.0 - 2.0 * ph2));
  }
  // Nuclear dephasing through the per-cycle probability.
  if (std::isfinite(p.n_1e)) {
    const double pc = 0.5 * (1.0 - std::exp(-1.0 / p.n_1e));
    const double pc2 = 1.0 - improve_ne(1.0 - pc, kappa);
    out.n_1e = -1.0 / std::log(1.0 - 2.0 * pc2);
  }
  // Coherence times scale linearly.
  out.electron_t1_ns = p.electron_t1_ns * kappa;
  out.electron_t2_ns = p.electron_t2_ns * kappa;
  out.carbon_t1_ns = p.carbon_t1_ns * kappa;
  out.carbon_t2_ns = p.carbon_t2_ns * kappa;
  // Gate fidelities through their channel no-error probabilities.
  const auto via = [kappa](double ne) { return improve_ne(ne, kappa); };
  out.f_carbon_init = (1.0 + via(2.0 * p.f_carbon_init - 1.0)) / 2.0;
  out.f_carbon_rz = (3.0 * via((4.0 * p.f_carbon_rz - 1.0) / 3.0) + 1.0) / 4.0;
  {
    const double root = (3.0 * via((4.0 * std::sqrt(p.f_ec) - 1.0) / 3.0) + 1.0) / 4.0;
    out.f_ec = root * root;
  }
  out.f_electron_init = (1.0 + via(2.0 * p.f_electron_init - 1.0)) / 2.0;
  out.f_electron_gate = (3.0 * via((4.0 * p.f_electron_gate - 1.0) / 3.0) + 1.0) / 4.0;
  out.f_readout0 = improve_ne(p.f_readout0, kappa);
  out.f_readout1 = improve_ne(p.f_readout1, kappa);
  return out;
}

}  // namespace qnet::nv
