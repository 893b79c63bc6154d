// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Noise and parameter algebra: T1/T2 relaxation-dephasing, depolarising and
// dephasing channels, fidelity-to-parameter conversions, readout POVM.

#pragma once

#include <limits>
#include <utility>

#include "qnetsim/quant/api.hpp"

namespace qnet::noise {

struct InvalidParams : quant::QuantError {
  using QuantError::QuantError;
};

inline constexpr double kDisabled = std::numeric_limits<double>::infinity();

// Relaxation (T1) and dephasing (T2) times in ns; infinity disables a term.
// The combined map is CPTP for all elapsed times iff T2 <= 2 T1.
struct T1T2 {
  double t1 = kDisabled;
  double t2 = kDisabled;

  T1T2() = default;
  T1T2(double t1_ns, double t2_ns);
  bool disabled() const { return t1 == kDisabled && t2 == kDisabled; }
};

// Amplitude damping with p1 = 1 - exp(-dt/T1) followed by dephasing with
// p2 = (1 - exp(-dt/T2) exp(dt/(2 T1))) / 2, as one Kraus set.
quant::Channel t1t2_channel(double dt, const T1T2& p);

// rho -> (1 - 3p/4) rho + p/4 (X rho X + Y rho Y + Z rho Z).
quant::Channel depolarize_channel(double p);
// rho -> (1 - p) rho + p Z rho Z.
quant::Channel dephase_channel(double p);

// Applies T1/T2 noise for an elapsed interval; dt = 0 or disabled params are
// a strict no-op (no RNG consumed).
void t1t2_apply(quant::Context& ctx, const quant::QubitPtr& q, double dt, const T1T2& p);

enum class GateNoiseKind { Rotation, Init, TwoQubitEC };

// Depolarising parameter for a gate of the given fidelity:
// rotation p = 4(1-F)/3; init p = 2(1-F); EC gate p = 4(1-sqrt(F))/3,
// applied independently to both qubits.
double fidelity_to_depol(GateNoiseKind kind, double f);

// M0 = diag(sqrt(f0), sqrt(1-f1)), M1 = diag(sqrt(1-f0), sqrt(f1)).
std::pair<quant::Mat, quant::Mat> readout_povm(double f0, double f1);

}  // namespace qnet::noise
