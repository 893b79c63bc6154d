// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnetsim/noise/noise.hpp"

#include <cmath>
#include <vector>

namespace qnet::noise {

using quant::Channel;
using quant::Mat;
using quant::Pauli;

T1T2::T1T2(double t1_ns, double t2_ns) : t1(t1_ns), t2(t2_ns) {
  if (!(t1 > 0) || !(t2 > 0)) throw InvalidParams("T1 and T2 must be positive");
  if (t2 != kDisabled && t2 > 2 * t1) throw InvalidParams("T2 > 2 T1 is not CPTP");
}

namespace {

double damp_p(double dt, const T1T2& p) {
  return p.t1 == kDisabled ? 0.0 : 1.0 - std::exp(-dt / p.t1);
}

double deph_p(double dt, const T1T2& p) {
  if (p.t2 == kDisabled) return 0.0;
  // One exponent: separate factors underflow/overflow to 0 * inf for large dt.
  const double expo = -dt / p.t2 + (p.t1 == kDisabled ? 0.0 : dt / (2 * p.t1));
  return 0.5 * (1.0 - std::exp(expo));
}

}  // namespace

Channel t1t2_channel(double dt, const T1T2& p) {
  if (dt < 0) throw InvalidParams("negative elapsed time");
  const double p1 = damp_p(dt, p);
  const double p2 = deph_p(dt, p);
  if (p1 == 0.0) {
    return dephase_channel(p2);
  }
  Mat e0(2, 2), e1(2, 2);
  e0 << 1, 0, 0, std::sqrt(1 - p1);
  e1 << 0, std::sqrt(p1), 0, 0;
  const Mat z = quant::pauli_matrix(Pauli::Z);
  std::vector<Mat> ks;
  ks.push_back(std::sqrt(1 - p2) * e0);
  ks.push_back(std::sqrt(1 - p2) * e1);
  ks.push_back(std::sqrt(p2) * (z * e0));
  ks.push_back(std::sqrt(p2) * (z * e1));
  return Channel::kraus("t1t2", 1, std::move(ks));
}

Channel depolarize_channel(double p) {
  if (p < 0 || p > 4.0 / 3.0) throw quant::OutOfRange("depolarise parameter");
  return Channel::pauli_mixture("depol", 1,
                                {{1 - 3 * p / 4, {Pauli::I}},
                                 {p / 4, {Pauli::X}},
                                 {p / 4, {Pauli::Y}},
                                 {p / 4, {Pauli::Z}}});
}

Channel dephase_channel(double p) {
  if (p < 0 || p > 1) throw quant::OutOfRange("dephase parameter");
  return Channel::pauli_mixture("dephase", 1, {{1 - p, {Pauli::I}}, {p, {Pauli::Z}}});
}

void t1t2_apply(quant::Context& ctx, const quant::QubitPtr& q, double dt, const T1T2& p) {
  if (dt == 0.0 || p.disabled()) return;
  const Channel ch = t1t2_channel(dt, p);
  if (ch.is_pauli_mixture() && ch.mixture()[0].first == 1.0) return;  // exact identity
  quant::api::apply_channel(ctx, ch, {q});
}

double fidelity_to_depol(GateNoiseKind kind, double f) {
  if (!(f > 0) || f > 1) throw quant::OutOfRange("gate fidelity");
  switch (kind) {
    case GateNoiseKind::Rotation: return 4 * (1 - f) / 3;
    case GateNoiseKind::Init: return 2 * (1 - f);
    case GateNoiseKind::TwoQubitEC:
      if (f < 1.0 / 16.0) throw quant::OutOfRange("EC fidelity below domain");
      return 4 * (1 - std::sqrt(f)) / 3;
  }
  throw quant::OutOfRange("gate noise kind");
}

std::pair<Mat, Mat> readout_povm(double f0, double f1) {
  if (f0 < 0 || f0 > 1 || f1 < 0 || f1 > 1) throw quant::OutOfRange("readout fidelity");
  Mat m0 = Mat::Zero(2, 2), m1 = Mat::Zero(2, 2);
  m0(0, 0) = std::sqrt(f0);
  m0(1, 1) = std::sqrt(1 - f1);
  m1(0, 0) = std::sqrt(1 - f0);
  m1(1, 1) = std::sqrt(f1);
  return {m0, m1};
}

}  // namespace qnet::noise
