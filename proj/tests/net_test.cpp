// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "qnetsim/net/processor.hpp"

using namespace qnet;

TEST_CASE("fibre delivery uses the light-speed delay and keeps FIFO order") {
  net::Runtime rt(7);
  net::Port a(rt, "a"), b(rt, "b");
  net::FibreChannel fibre(rt, 20.0);
  const double d = fibre.delay_ns();
  CHECK(d == doctest::Approx(20.0 * 1.44 / 299792.458e-9).epsilon(1e-12));
  fibre.transmit(b, {"hello", {std::int64_t{42}}});
  rt.engine.run();
  CHECK(rt.engine.now() == doctest::Approx(d));
  REQUIRE(b.has_input());
  auto m = b.rx();
  CHECK(m.header == "hello");
  CHECK(std::get<std::int64_t>(m.items[0]) == 42);

  a.connect(b);
  a.tx({"m1", {}});
  a.tx({"m2", {}});
  rt.engine.run();
  CHECK(b.rx().header == "m1");
  CHECK(b.rx().header == "m2");
}

TEST_CASE("connecting a connected port throws") {
  net::Runtime rt(1);
  net::Port a(rt, "a"), b(rt, "b"), c(rt, "c");
  a.connect(b);
  CHECK_THROWS_AS(a.connect(c), net::AlreadyConnected);
}

TEST_CASE("port forwarding re-posts each delivery exactly once") {
  net::Runtime rt(2);
  net::Port inner(rt, "inner"), outer(rt, "outer");
  inner.forward_to(outer);
  int got = 0;
  outer.on_rx([&](net::Message m) {
    ++got;
    CHECK(m.header == "fwd");
  });
  inner.post({"fwd", {}}, 5.0);
  rt.engine.run();
  CHECK(got == 1);
  CHECK(!inner.has_input());
}

TEST_CASE("lossy fibres drop messages silently") {
  net::Runtime rt(13);
  net::Port b(rt, "b");
  net::FibreChannel fibre(rt, 1.0);
  fibre.set_loss_probability(1.0);
  fibre.transmit(b, {"gone", {}});
  rt.engine.run();
  CHECK(!b.has_input());
  fibre.set_loss_probability(0.0);
  fibre.transmit(b, {"kept", {}});
  rt.engine.run();
  CHECK(b.has_input());
}

TEST_CASE("fibre qubit noise is applied to transmitted qubits") {
  net::Runtime rt(21);
  net::Port b(rt, "b");
  net::FibreChannel fibre(rt, 1.0);
  fibre.set_qubit_noise(quant::Channel::pauli_mixture("flip", 1, {{1.0, {quant::Pauli::X}}}));
  auto qs = quant::api::create_qubits(rt.quantum, 1, quant::Formalism::DM);
  fibre.transmit(b, {"q", {qs[0]}});
  rt.engine.run();
  auto m = b.rx();
  const auto q = std::get<quant::QubitPtr>(m.items[0]);
  const quant::Mat r = quant::api::peek_reduced({q});
  CHECK(std::real(r(1, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("memory aging matches closed-form dephasing and tracks put times") {
  net::Runtime rt(3);
  net::QuantumMemory mem(rt, 2, noise::T1T2(noise::kDisabled, 1000.0));
  auto qs = quant::api::create_qubits(rt.quantum, 1, quant::Formalism::DM);
  quant::api::apply(rt.quantum, quant::ops::h(), {qs[0]});
  mem.put(0, qs[0]);
  CHECK(mem.occupied(0));
  CHECK_THROWS_AS(mem.put(0, qs[0]), net::OccupiedPosition);
  rt.engine.run_until(500.0);
  CHECK(mem.stored_since(0) == 0.0);  // put at t = 0
  auto q = mem.pop(0);
  CHECK(!mem.occupied(0));
  CHECK_THROWS_AS(mem.pop(0), net::EmptyPosition);
  Eigen::Vector2cd plus(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
  const double f = quant::api::fidelity({q}, plus);
  CHECK(f == doctest::Approx(0.5 * (1 + std::exp(-0.5))).epsilon(1e-12));
}

TEST_CASE("advance ages a position into the simulated future") {
  net::Runtime rt(3);
  net::QuantumMemory mem(rt, 1, noise::T1T2(noise::kDisabled, 1000.0));
  auto qs = quant::api::create_qubits(rt.quantum, 1, quant::Formalism::DM);
  quant::api::apply(rt.quantum, quant::ops::h(), {qs[0]});
  mem.put(0, qs[0]);
  mem.advance(0, 300.0);
  // Accessing again at t = 300 must not double-apply the noise.
  rt.engine.run_until(300.0);
  auto q = mem.pop(0);
  Eigen::Vector2cd plus(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
  CHECK(quant::api::fidelity({q}, plus) ==
        doctest::Approx(0.5 * (1 + std::exp(-0.3))).epsilon(1e-12));
}

TEST_CASE("pair source emits the requested state, triggered or clocked") {
  net::Runtime rt(19);
  net::QSource src(rt, quant::Formalism::KET);
  auto [q1, q2] = src.trigger();
  Eigen::Vector4cd bell;
  bell << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
  CHECK(quant::api::fidelity({q1, q2}, bell) == doctest::Approx(1.0).epsilon(1e-12));

  int emitted = 0;
  src.start_clock(1e6, [&](quant::QubitPtr, quant::QubitPtr) {
    if (++emitted == 50) src.stop_clock();
  });
  rt.engine.run();
  CHECK(emitted == 50);
  // Mean interval for 1 MHz is 1000 ns; 50 draws stay within a loose band.
  CHECK(rt.engine.now() / 50.0 == doctest::Approx(1000.0).epsilon(0.6));
}

TEST_CASE("processor programs take their mapped durations and honour topology") {
  net::Runtime rt(11);
  net::QuantumProcessor proc(rt, "proc", 2, quant::Formalism::STAB);
  proc.map_instruction({"init", "", 100, 0, 1, 1, {}, {}});
  proc.map_instruction({"h", "", 10, 0, 1, 1, {}, {}});
  proc.map_instruction({"cnot", "", 500, 0, 1, 1, {}, {{0, 1}}});
  proc.map_instruction({"measure", "", 300, 0, 1, 1, {}, {}});
  net::QuantumProgram prog;
  prog.add("init", {0}).add("init", {1}).add("h", {0}).add("cnot", {0, 1});
  prog.add_measure(0, "m0").add_measure(1, "m1");
  auto run = proc.execute(prog);
  CHECK(run.duration_ns == 100 + 100 + 10 + 500 + 300 + 300);
  CHECK(run.outcomes.at("m0") == run.outcomes.at("m1"));
  CHECK(proc.busy());
  rt.engine.run();
  CHECK(!proc.busy());
  CHECK(rt.engine.now() == doctest::Approx(run.duration_ns));

  net::QuantumProgram bad;
  bad.add("cnot", {1, 0});
  CHECK_THROWS_AS(proc.execute(bad), net::TopologyViolation);
  net::QuantumProgram unknown;
  unknown.add("toffoli", {0});
  CHECK_THROWS_AS(proc.execute(unknown), net::UnmappedInstruction);
}

TEST_CASE("component properties are typed and freezable") {
  net::Runtime rt(1);
  net::Node node(rt, "n0", 0);
  node.set_property("length", 2.5);
  CHECK(std::get<double>(node.property("length")) == 2.5);
  node.set_property("length", 3.5);
  CHECK_THROWS_AS(node.set_property("length", std::string("x")), net::NetError);
  node.freeze_properties();
  CHECK_THROWS_AS(node.set_property("length", 4.0), net::NetError);
  CHECK(node.has_property("length"));
  CHECK(!node.has_property("missing"));
}
