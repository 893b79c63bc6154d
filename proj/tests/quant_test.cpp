// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"
#include "qnetsim/quant/api.hpp"
#include "qnetsim/quant/convert.hpp"

using namespace qnet::quant;

namespace {

Vec bell() {
  Vec v(4);
  v << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
  return v;
}

constexpr Formalism kAll[] = {Formalism::KET, Formalism::DM, Formalism::STAB, Formalism::GSLC};

}  // namespace

TEST_CASE("bell pair has unit fidelity in every formalism") {
  for (Formalism f : kAll) {
    CAPTURE(static_cast<int>(f));
    Context ctx(1);
    auto qs = api::create_qubits(ctx, 2, f);
    api::apply(ctx, ops::h(), {qs[0]});
    api::apply(ctx, ops::cnot(), {qs[0], qs[1]});
    CHECK(api::fidelity(qs, bell()) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("random clifford circuits agree with the density-matrix backend") {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(gen() % 4);
    std::vector<std::pair<int, std::pair<int, int>>> circ;
    const int depth = 5 + static_cast<int>(gen() % 20);
    for (int d = 0; d < depth; ++d) {
      const int g = static_cast<int>(gen() % 8);
      const int a = static_cast<int>(gen() % n);
      int b = static_cast<int>(gen() % n);
      if (b == a) b = (a + 1) % n;
      circ.push_back({g, {a, b}});
    }
    Mat rhos[3];
    int k = 0;
    for (Formalism f : {Formalism::DM, Formalism::STAB, Formalism::GSLC}) {
      Context ctx(7);
      auto qs = api::create_qubits(ctx, n, f);
      for (auto& [g, ab] : circ) {
        auto [a, b] = ab;
        switch (g) {
          case 0: api::apply(ctx, ops::h(), {qs[a]}); break;
          case 1: api::apply(ctx, ops::s(), {qs[a]}); break;
          case 2: api::apply(ctx, ops::sdg(), {qs[a]}); break;
          case 3: api::apply(ctx, ops::x(), {qs[a]}); break;
          case 4: api::apply(ctx, ops::y(), {qs[a]}); break;
          case 5: api::apply(ctx, ops::z(), {qs[a]}); break;
          case 6: api::apply(ctx, ops::cnot(), {qs[a], qs[b]}); break;
          case 7: api::apply(ctx, ops::cz(), {qs[a], qs[b]}); break;
        }
      }
      rhos[k++] = api::peek_reduced(qs);
    }
    for (int i = 1; i < 3; ++i) {
      const double err = (rhos[i] - rhos[0]).cwiseAbs().maxCoeff();
      CAPTURE(trial);
      CAPTURE(i);
      REQUIRE(err < 1e-9);
    }
  }
}

TEST_CASE("conversion chain preserves the reduced state") {
  Context ctx(3);
  auto qs = api::create_qubits(ctx, 3, Formalism::KET);
  api::apply(ctx, ops::h(), {qs[0]});
  api::apply(ctx, ops::cnot(), {qs[0], qs[1]});
  api::apply(ctx, ops::s(), {qs[1]});
  api::apply(ctx, ops::cz(), {qs[1], qs[2]});
  const Mat before = api::peek_reduced(qs);
  int steps = 0;
  for (Formalism f : {Formalism::STAB, Formalism::GSLC, Formalism::DM, Formalism::STAB,
                      Formalism::KET, Formalism::GSLC, Formalism::KET}) {
    api::convert(ctx, qs[0], f);
    const double err = (api::peek_reduced(qs) - before).cwiseAbs().maxCoeff();
    CAPTURE(static_cast<int>(f));
    REQUIRE(err < 1e-8);
    ++steps;
  }
  CHECK(ctx.stats.conversions >= static_cast<std::uint64_t>(steps));
}

TEST_CASE("graph-state bell measurements are perfectly correlated") {
  int ones = 0;
  for (int shot = 0; shot < 2000; ++shot) {
    Context ctx(1000 + shot);
    auto qs = api::create_qubits(ctx, 2, Formalism::GSLC);
    api::apply(ctx, ops::h(), {qs[0]});
    api::apply(ctx, ops::cnot(), {qs[0], qs[1]});
    auto r0 = api::measure(ctx, qs[0]);
    auto r1 = api::measure(ctx, qs[1]);
    REQUIRE(r0.outcome == r1.outcome);
    REQUIRE(r0.probability == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(r1.probability == doctest::Approx(1.0).epsilon(1e-12));
    ones += r0.outcome;
  }
  // 2000 fair coin flips; 6 sigma is about 134.
  CHECK(std::abs(ones - 1000) < 140);
}

TEST_CASE("random mid-circuit measurements and channels keep unit trace") {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 250; ++trial) {
    for (Formalism f : kAll) {
      Context ctx(100 + trial);
      const int n = 3 + static_cast<int>(gen() % 4);
      auto qs = api::create_qubits(ctx, n, f);
      const int depth = 10 + static_cast<int>(gen() % 25);
      for (int d = 0; d < depth; ++d) {
        const int g = static_cast<int>(gen() % 10);
        const int a = static_cast<int>(gen() % n);
        int b = static_cast<int>(gen() % n);
        if (b == a) b = (a + 1) % n;
        if (!qs[a]->alive() || !qs[b]->alive()) continue;
        switch (g) {
          case 0: api::apply(ctx, ops::h(), {qs[a]}); break;
          case 1: api::apply(ctx, ops::s(), {qs[a]}); break;
          case 2: api::apply(ctx, ops::x(), {qs[a]}); break;
          case 3: api::apply(ctx, ops::z(), {qs[a]}); break;
          case 4:
          case 5: api::apply(ctx, ops::cnot(), {qs[a], qs[b]}); break;
          case 6: api::apply(ctx, ops::cz(), {qs[a], qs[b]}); break;
          case 7: {
            auto r = api::measure(ctx, qs[a], MeasureMode::Split);
            if (f != Formalism::DM)
              REQUIRE((std::abs(r.probability - 0.5) < 1e-9 ||
                       std::abs(r.probability - 1.0) < 1e-9));
            break;
          }
          case 8: {
            auto r = api::measure(ctx, qs[a], MeasureMode::Inplace);
            if (f != Formalism::DM)
              REQUIRE((std::abs(r.probability - 0.5) < 1e-9 ||
                       std::abs(r.probability - 1.0) < 1e-9));
            break;
          }
          case 9: {
            Channel dep = Channel::pauli_mixture(
                "dep", 1, {{0.7, {Pauli::I}}, {0.1, {Pauli::X}}, {0.1, {Pauli::Y}},
                           {0.1, {Pauli::Z}}});
            api::apply_channel(ctx, dep, {qs[a]});
            break;
          }
        }
      }
      for (auto& q : qs) {
        if (!q->alive()) continue;
        const Mat r = api::peek_reduced({q});
        REQUIRE(std::abs(std::real(r.trace()) - 1.0) < 1e-9);
      }
    }
  }
}

TEST_CASE("memoization does not change results") {
  for (bool memo : {true, false}) {
    Context ctx(5);
    ctx.memo_enabled = memo;
    auto qs = api::create_qubits(ctx, 6, Formalism::KET);
    api::apply(ctx, ops::h(), {qs[0]});
    for (int i = 1; i < 6; ++i) api::apply(ctx, ops::cnot(), {qs[0], qs[i]});
    auto r = api::measure(ctx, qs[0]);
    // All qubits collapse together.
    for (int i = 1; i < 6; ++i) CHECK(api::measure(ctx, qs[i]).outcome == r.outcome);
  }
}

TEST_CASE("two-outcome kraus measurement follows the generalised born rule") {
  // Biased projective pair on |+>: M0 = sqrt(0.9)|0><0|, M1 completes it.
  Mat m0 = Mat::Zero(2, 2), m1 = Mat::Zero(2, 2);
  m0(0, 0) = std::sqrt(0.9);
  m1(0, 0) = std::sqrt(0.1);
  m1(1, 1) = 1.0;
  int zeros = 0;
  const int shots = 4000;
  for (int s = 0; s < shots; ++s) {
    Context ctx(50 + s);
    auto qs = api::create_qubits(ctx, 1, Formalism::DM);
    api::apply(ctx, ops::h(), {qs[0]});
    auto r = api::measure_povm(ctx, qs[0], m0, m1);
    if (r.outcome == 0) {
      ++zeros;
      CHECK(r.probability == doctest::Approx(0.45).epsilon(1e-9));
    }
  }
  CHECK(std::abs(zeros / double(shots) - 0.45) < 0.03);
}

TEST_CASE("assign_dm installs an exact density matrix") {
  Context ctx(2);
  auto qs = api::create_qubits(ctx, 2, Formalism::DM);
  Vec psi = bell();
  Mat rho = psi * psi.adjoint();
  api::assign_dm(ctx, qs, rho);
  CHECK((api::peek_reduced(qs) - rho).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("discard removes a qubit without disturbing the others") {
  Context ctx(4);
  auto qs = api::create_qubits(ctx, 2, Formalism::KET);
  api::apply(ctx, ops::h(), {qs[0]});
  api::apply(ctx, ops::cnot(), {qs[0], qs[1]});
  const int m = api::discard(ctx, qs[0]);
  CHECK(!qs[0]->alive());
  // The partner collapsed consistently.
  const Mat r = api::peek_reduced({qs[1]});
  CHECK(std::real(r(m, m)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("statistics count merges, splits and measurements") {
  Context ctx(8);
  auto qs = api::create_qubits(ctx, 3, Formalism::KET);
  api::apply(ctx, ops::cnot(), {qs[0], qs[1]});
  api::apply(ctx, ops::cnot(), {qs[1], qs[2]});
  CHECK(ctx.stats.merges == 2);
  CHECK(ctx.stats.max_state_qubits == 3);
  api::measure(ctx, qs[0], MeasureMode::Split);
  CHECK(ctx.stats.measurements >= 1);
  CHECK(ctx.stats.splits >= 1);
}
