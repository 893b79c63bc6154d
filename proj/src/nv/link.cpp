// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "qnetsim/nv/nv.hpp"

namespace qnet::nv {

namespace {

// Z on one side of a 2-qubit density matrix: index bit 0 is the second qubit.
void dephase_qubit(quant::Mat& rho, int qubit, double p) {
  if (p <= 0) return;
  quant::Mat z = rho;
  const int bit = qubit == 0 ? 2 : 1;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const int si = (i & bit) ? -1 : 1;
      const int sj = (j & bit) ? -1 : 1;
      z(i, j) *= si * sj;
    }
  rho = (1.0 - p) * rho + p * z;
}

}  // namespace

double attempt_interval_ns(const NVParams& p, double length_km) {
  return p.t_emission_ns + length_km / p.c_fibre_km_per_ns;
}

LinkProbs link_probabilities(const NVParams& p, double length_km) {
  if (length_km < 0) throw net::ConfigError("negative link length");
  LinkProbs out;
  // Each photon crosses half the internode distance.
  out.p_det = p.p_det_nofibre * std::pow(10.0, -(length_km / 2.0) * p.gamma_db_per_km / 10.0);
  out.p_dc = 1.0 - std::exp(-(p.t_window_ns * 1e-9) * p.lambda_dark_hz);
  const double pd = out.p_det, dc = out.p_dc, a = p.alpha, v = p.visibility;
  out.p00 = a * a *
            (2.0 * pd * (1.0 - pd) * (1.0 - dc) + 2.0 * dc * (1.0 - dc) * (1.0 - pd) * (1.0 - pd) +
             pd * pd * (1.0 - dc) * 0.5 * (1.0 + v));
  out.p10 = a * (1.0 - a) * ((1.0 - dc) * pd + 2.0 * dc * (1.0 - dc) * (1.0 - pd));
  // Symmetric emitters: the mirror-click probability equals p10.
  out.p01 = out.p10;
  out.p11 = (1.0 - a) * (1.0 - a) * dc;
  out.p_succ = out.p00 + out.p01 + out.p10 + out.p11;
  return out;
}

LinkSample sample_link(const NVParams& p, double length_km, std::mt19937_64& rng) {
  const LinkProbs lp = link_probabilities(p, length_km);
  if (!(lp.p_succ > 0)) throw ZeroSuccessProbability();
  LinkSample s;
  // Draw order: attempt count, then detector sign.
  std::geometric_distribution<std::uint64_t> geo(lp.p_succ);
  s.k = geo(rng) + 1;
  s.sign = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5 ? +1 : -1;

  quant::Mat rho = quant::Mat::Zero(4, 4);
  rho(0, 0) = lp.p00;
  rho(1, 1) = lp.p01;
  rho(2, 2) = lp.p10;
  rho(3, 3) = lp.p11;
  const double off = s.sign * std::sqrt(p.visibility * lp.p01 * lp.p10);
  rho(1, 2) = off;
  rho(2, 1) = off;
  rho /= lp.p_succ;
  // Double-excitation dephasing on both qubits, then optical-phase dephasing
  // on one.
  dephase_qubit(rho, 0, p.p_dexc / 2.0);
  dephase_qubit(rho, 1, p.p_dexc / 2.0);
  if (p.sigma_phase > 0) {
    const double ph = 0.5 * (1.0 - std::exp(-p.sigma_phase * p.sigma_phase / 2.0));
    dephase_qubit(rho, 0, ph);
  }
  s.rho = rho;

  s.elapsed_ns = static_cast<double>(s.k) * attempt_interval_ns(p, length_km);
  const double p_single =
      std::isfinite(p.n_1e) ? (1.0 - p.alpha) * (1.0 - std::exp(-1.0 / p.n_1e)) : 0.0;
  s.storage_dephase_p =
      p_single > 0 ? (1.0 - std::pow(1.0 - 2.0 * p_single, static_cast<double>(s.k))) / 2.0 : 0.0;
  return s;
}

}  // namespace qnet::nv
