// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"
#include "qnetsim/noise/noise.hpp"

using namespace qnet;
using namespace qnet::noise;

namespace {

quant::Mat channel_on(const quant::Channel& ch, const quant::Mat& rho) {
  quant::Mat out = quant::Mat::Zero(rho.rows(), rho.cols());
  for (const auto& k : ch.kraus_ops()) out += k * rho * k.adjoint();
  return out;
}

}  // namespace

TEST_CASE("relaxation-dephasing channels are trace preserving") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double t1 = 1.0 + 1e6 * ud(gen);
    const double t2 = std::min(2.0 * t1, 1.0 + 1e6 * ud(gen));
    const double dt = 1e5 * ud(gen);
    auto ch = t1t2_channel(dt, T1T2(t1, t2));
    REQUIRE(ch.completeness_residual() < 1e-12);
  }
}

TEST_CASE("aging composes: two short intervals equal one long one") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double t1 = 10.0 + 1e5 * ud(gen);
    const double t2 = std::min(2.0 * t1, 10.0 + 1e5 * ud(gen));
    const double ta = 1e4 * ud(gen), tb = 1e4 * ud(gen);
    const T1T2 p(t1, t2);
    // A generic single-qubit state.
    quant::Mat rho(2, 2);
    rho << 0.7, std::complex<double>(0.2, -0.1), std::complex<double>(0.2, 0.1), 0.3;
    const quant::Mat split = channel_on(t1t2_channel(tb, p), channel_on(t1t2_channel(ta, p), rho));
    const quant::Mat joint = channel_on(t1t2_channel(ta + tb, p), rho);
    REQUIRE((split - joint).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("t2 above 2 t1 is rejected") {
  CHECK_THROWS_AS(T1T2(100.0, 201.0), InvalidParams);
  CHECK_NOTHROW(T1T2(100.0, 200.0));
  CHECK_THROWS_AS(T1T2(-5.0, 1.0), InvalidParams);
}

TEST_CASE("depolarising and dephasing channels act as advertised") {
  quant::Mat rho(2, 2);
  rho << 0.6, std::complex<double>(0.1, 0.2), std::complex<double>(0.1, -0.2), 0.4;
  SUBCASE("depolarise") {
    const double p = 0.3;
    auto ch = depolarize_channel(p);
    CHECK(ch.completeness_residual() < 1e-12);
    quant::Mat want = (1 - p) * rho + p * 0.5 * quant::Mat::Identity(2, 2);
    CHECK((channel_on(ch, rho) - want).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("dephase") {
    const double p = 0.2;
    auto ch = dephase_channel(p);
    quant::Mat z = quant::Mat::Identity(2, 2);
    z(1, 1) = -1;
    quant::Mat want = (1 - p) * rho + p * z * rho * z;
    CHECK((channel_on(ch, rho) - want).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("invalid probabilities") {
    CHECK_THROWS_AS(depolarize_channel(-0.1), quant::OutOfRange);
    CHECK_THROWS_AS(dephase_channel(1.5), quant::OutOfRange);
  }
}

TEST_CASE("lazy aging matches the closed-form dephasing fidelity") {
  quant::Context ctx(6);
  auto qs = quant::api::create_qubits(ctx, 1, quant::Formalism::DM);
  quant::api::apply(ctx, quant::ops::h(), {qs[0]});
  t1t2_apply(ctx, qs[0], 500.0, T1T2(kDisabled, 1000.0));
  Eigen::Vector2cd plus(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
  const double f = quant::api::fidelity({qs[0]}, plus);
  CHECK(f == doctest::Approx(0.5 * (1 + std::exp(-0.5))).epsilon(1e-12));
}

TEST_CASE("zero elapsed time or disabled noise is a strict no-op") {
  quant::Context ctx(6);
  auto qs = quant::api::create_qubits(ctx, 1, quant::Formalism::DM);
  quant::api::apply(ctx, quant::ops::h(), {qs[0]});
  const auto before = ctx.stats.channels_applied;
  t1t2_apply(ctx, qs[0], 0.0, T1T2(1000.0, 1000.0));
  t1t2_apply(ctx, qs[0], 50.0, T1T2());
  CHECK(ctx.stats.channels_applied == before);
}

TEST_CASE("gate fidelity converts to the matching depolarising parameter") {
  CHECK(fidelity_to_depol(GateNoiseKind::Rotation, 1.0) == doctest::Approx(0.0));
  CHECK(fidelity_to_depol(GateNoiseKind::Rotation, 0.97) == doctest::Approx(4 * 0.03 / 3));
  CHECK(fidelity_to_depol(GateNoiseKind::Init, 0.99) == doctest::Approx(0.02));
  CHECK(fidelity_to_depol(GateNoiseKind::TwoQubitEC, 0.97) ==
        doctest::Approx(4 * (1 - std::sqrt(0.97)) / 3));
}

TEST_CASE("readout operators form a complete pair with the right statistics") {
  auto [m0, m1] = readout_povm(0.95, 0.995);
  quant::Mat total = m0.adjoint() * m0 + m1.adjoint() * m1;
  CHECK((total - quant::Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  // On |0>, outcome 0 with probability f0.
  quant::Mat rho = quant::Mat::Zero(2, 2);
  rho(0, 0) = 1;
  CHECK(std::real((m0 * rho * m0.adjoint()).trace()) == doctest::Approx(0.95));
}
