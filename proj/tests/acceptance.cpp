// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance checks, one printed verdict per criterion. Each
// criterion is validated against an oracle that is independent of the code
// under test: a standalone ket simulator with measurement branching, closed
// form channel algebra, frozen published parameter tables, the Markov
// occupancy oracle and byte-level file comparison.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qnetsim/cli/bench.hpp"
#include "qnetsim/cli/scenario.hpp"
#include "qnetsim/noise/noise.hpp"
#include "qnetsim/nv/chain.hpp"
#include "qnetsim/qswitch/qswitch.hpp"

using namespace qnet;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int idx, bool ok, const std::string& detail) {
  std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", idx, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// ---------------------------------------------------------------------------
// Criterion 1: formalism equivalence against an independent ket oracle.

struct CircuitOp {
  int kind;  // 0 H, 1 S, 2 Sdg, 3 X, 4 Y, 5 Z, 6 CNOT, 7 CZ, 8 measure
  int a = 0;
  int b = 0;
};

// Standalone statevector simulator; measurement branches instead of sampling,
// so it yields the exact joint outcome distribution.
struct Oracle {
  struct Branch {
    Eigen::VectorXcd v;
    std::string bits;
  };
  int n;
  std::vector<Branch> branches;

  explicit Oracle(int qubits) : n(qubits) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1 << n);
    v(0) = 1.0;
    branches.push_back({v, ""});
  }

  void one_qubit(int a, std::complex<double> u00, std::complex<double> u01,
                 std::complex<double> u10, std::complex<double> u11) {
    const int mask = 1 << a;
    for (auto& br : branches)
      for (int i = 0; i < br.v.size(); ++i) {
        if (i & mask) continue;
        const auto v0 = br.v(i), v1 = br.v(i | mask);
        br.v(i) = u00 * v0 + u01 * v1;
        br.v(i | mask) = u10 * v0 + u11 * v1;
      }
  }

  void apply(const CircuitOp& op) {
    const std::complex<double> im(0, 1);
    const double r = 1.0 / std::sqrt(2.0);
    switch (op.kind) {
      case 0: one_qubit(op.a, r, r, r, -r); break;
      case 1: one_qubit(op.a, 1, 0, 0, im); break;
      case 2: one_qubit(op.a, 1, 0, 0, -im); break;
      case 3: one_qubit(op.a, 0, 1, 1, 0); break;
      case 4: one_qubit(op.a, 0, -im, im, 0); break;
      case 5: one_qubit(op.a, 1, 0, 0, -1); break;
      case 6: {
        const int ma = 1 << op.a, mb = 1 << op.b;
        for (auto& br : branches)
          for (int i = 0; i < br.v.size(); ++i)
            if ((i & ma) && !(i & mb)) std::swap(br.v(i), br.v(i | mb));
        break;
      }
      case 7: {
        const int ma = 1 << op.a, mb = 1 << op.b;
        for (auto& br : branches)
          for (int i = 0; i < br.v.size(); ++i)
            if ((i & ma) && (i & mb)) br.v(i) = -br.v(i);
        break;
      }
      case 8: {
        const int mask = 1 << op.a;
        std::vector<Branch> next;
        for (auto& br : branches) {
          Branch b0{br.v, br.bits + "0"}, b1{br.v, br.bits + "1"};
          for (int i = 0; i < br.v.size(); ++i)
            ((i & mask) ? b0 : b1).v(i) = 0.0;
          if (b0.v.squaredNorm() > 1e-15) next.push_back(std::move(b0));
          if (b1.v.squaredNorm() > 1e-15) next.push_back(std::move(b1));
        }
        branches = std::move(next);
        break;
      }
    }
  }

  std::map<std::string, double> distribution() const {
    std::map<std::string, double> dist;
    for (const auto& br : branches) dist[br.bits] += br.v.squaredNorm();
    return dist;
  }
};

void run_library_circuit(quant::Context& ctx, quant::Formalism f, int n,
                         const std::vector<CircuitOp>& circ, std::string& bits) {
  auto qs = quant::api::create_qubits(ctx, n, f);
  bits.clear();
  for (const auto& op : circ) {
    switch (op.kind) {
      case 0: quant::api::apply(ctx, quant::ops::h(), {qs[op.a]}); break;
      case 1: quant::api::apply(ctx, quant::ops::s(), {qs[op.a]}); break;
      case 2: quant::api::apply(ctx, quant::ops::sdg(), {qs[op.a]}); break;
      case 3: quant::api::apply(ctx, quant::ops::x(), {qs[op.a]}); break;
      case 4: quant::api::apply(ctx, quant::ops::y(), {qs[op.a]}); break;
      case 5: quant::api::apply(ctx, quant::ops::z(), {qs[op.a]}); break;
      case 6: quant::api::apply(ctx, quant::ops::cnot(), {qs[op.a], qs[op.b]}); break;
      case 7: quant::api::apply(ctx, quant::ops::cz(), {qs[op.a], qs[op.b]}); break;
      case 8:
        bits += static_cast<char>(
            '0' + quant::api::measure(ctx, qs[op.a], quant::MeasureMode::Inplace).outcome);
        break;
    }
  }
}

void criterion1() {
  const auto t0 = Clock::now();
  constexpr int kCircuits = 100;
  constexpr int kShots = 10000;
  std::mt19937_64 gen(20260825);
  double worst_tv = 0;
  int worst_circuit = -1;
  const quant::Formalism forms[] = {quant::Formalism::KET, quant::Formalism::DM,
                                    quant::Formalism::STAB, quant::Formalism::GSLC};
  for (int ci = 0; ci < kCircuits; ++ci) {
    const int n = 2 + static_cast<int>(gen() % 5);  // up to 6 qubits
    const int gates = 1 + static_cast<int>(gen() % 30);
    const int measures = 1 + static_cast<int>(gen() % 4);
    std::vector<CircuitOp> circ;
    for (int g = 0; g < gates; ++g) {
      CircuitOp op;
      op.kind = static_cast<int>(gen() % 8);
      op.a = static_cast<int>(gen() % n);
      op.b = static_cast<int>(gen() % n);
      if (op.b == op.a) op.b = (op.a + 1) % n;
      circ.push_back(op);
    }
    for (int m = 0; m < measures; ++m) {
      CircuitOp op;
      op.kind = 8;
      op.a = static_cast<int>(gen() % n);
      const std::size_t at = gen() % (circ.size() + 1);
      circ.insert(circ.begin() + static_cast<std::ptrdiff_t>(at), op);
    }

    Oracle oracle(n);
    for (const auto& op : circ) oracle.apply(op);
    const auto exact = oracle.distribution();

    for (int fi = 0; fi < 4; ++fi) {
      std::map<std::string, int> counts;
      std::string bits;
      for (int shot = 0; shot < kShots; ++shot) {
        quant::Context ctx(static_cast<std::uint64_t>(ci) * 1000003 + fi * 10007 + shot);
        run_library_circuit(ctx, forms[fi], n, circ, bits);
        counts[bits]++;
      }
      double tv = 0;
      for (const auto& [key, p] : exact)
        tv += std::abs(p - counts[key] / static_cast<double>(kShots));
      for (const auto& [key, c] : counts)
        if (!exact.count(key)) tv += c / static_cast<double>(kShots);
      tv *= 0.5;
      if (tv > worst_tv) {
        worst_tv = tv;
        worst_circuit = ci;
      }
    }
  }
  const double el = seconds_since(t0);
  const bool ok = worst_tv < 0.05 && el < 300.0;
  report(1, ok,
         fmt("formalism equivalence, 100 circuits x 4 formalisms x 1e4 shots: "
             "worst total variation %.4f (circuit %d, limit 0.05), %.1fs (limit 300s)",
             worst_tv, worst_circuit, el));
}

// ---------------------------------------------------------------------------
// Criterion 2: channel completeness and the relaxation-dephasing semigroup.

quant::Mat channel_on(const quant::Channel& ch, const quant::Mat& rho) {
  quant::Mat out = quant::Mat::Zero(rho.rows(), rho.cols());
  for (const auto& k : ch.kraus_ops()) out += k * rho * k.adjoint();
  return out;
}

void criterion2() {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  double worst_residual = 0, worst_semigroup = 0;
  for (int i = 0; i < 1000; ++i) {
    const double t1 = 1.0 + 1e6 * ud(gen);
    const double t2 = std::min(2.0 * t1, 1.0 + 1e6 * ud(gen));
    const double d1 = 1e5 * ud(gen), d2 = 1e5 * ud(gen);
    const noise::T1T2 p(t1, t2);
    const auto ca = noise::t1t2_channel(d1, p);
    const auto cb = noise::t1t2_channel(d2, p);
    const auto cab = noise::t1t2_channel(d1 + d2, p);
    worst_residual = std::max({worst_residual, ca.completeness_residual(),
                               cb.completeness_residual(), cab.completeness_residual(),
                               noise::depolarize_channel(ud(gen)).completeness_residual(),
                               noise::dephase_channel(ud(gen)).completeness_residual()});
    // Random single-qubit density matrix.
    quant::Mat a(2, 2);
    a << std::complex<double>(ud(gen), ud(gen)), std::complex<double>(ud(gen), ud(gen)),
        std::complex<double>(ud(gen), ud(gen)), std::complex<double>(ud(gen), ud(gen));
    quant::Mat rho = a * a.adjoint();
    rho /= rho.trace();
    const quant::Mat split = channel_on(cb, channel_on(ca, rho));
    const quant::Mat joint = channel_on(cab, rho);
    worst_semigroup = std::max(worst_semigroup, (split - joint).cwiseAbs().maxCoeff());
  }
  const bool ok = worst_residual < 1e-12 && worst_semigroup < 1e-9;
  report(2, ok,
         fmt("channel algebra over 1e3 draws: worst completeness residual %.2e "
             "(limit 1e-12), worst semigroup deviation %.2e (limit 1e-9)",
             worst_residual, worst_semigroup));
}

// ---------------------------------------------------------------------------
// Criterion 3: noiseless chain correctness for both protocols.

void criterion3() {
  const auto t0 = Clock::now();
  const auto noiseless = nv::noiseless_params();
  double min_f = 1.0;
  std::uint64_t distill_checks = 0;
  bool rule_ok = true;
  int runs = 0;
  for (int n : {3, 5, 9}) {
    for (auto proto : {nv::ChainProtocol::SwapAsap, nv::ChainProtocol::NestedWithDistill}) {
      for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        nv::ChainConfig cfg;
        cfg.nodes = n;
        cfg.length_km = 2.0 * (n - 1);
        cfg.protocol = proto;
        const auto rec = nv::run_chain(cfg, noiseless, seed);
        min_f = std::min(min_f, rec.end_fidelity);
        for (const auto& d : rec.distills) {
          ++distill_checks;
          const int m1 = 1 - 2 * d.m1_bit, m2 = 1 - 2 * d.m2_bit;
          if (m2 != m1 * d.b * d.d) rule_ok = false;
        }
        ++runs;
      }
    }
  }
  const double el = seconds_since(t0);
  const bool ok = min_f >= 1.0 - 1e-9 && rule_ok && el < 120.0;
  report(3, ok,
         fmt("noiseless chains N in {3,5,9}, both protocols, 200 runs each (%d runs): "
             "min end fidelity %.12f (limit 1-1e-9), %llu distillation outcomes all "
             "obeying m2 = m1*b*d: %s, %.1fs (limit 120s)",
             runs, min_f, static_cast<unsigned long long>(distill_checks),
             rule_ok ? "yes" : "no", el));
}

// ---------------------------------------------------------------------------
// Criterion 4: elementary-link attempt statistics.

void criterion4() {
  nv::NVParams p;
  double worst_rel = 0, worst_trace = 0;
  for (double L : {10.0, 50.0, 100.0}) {
    const auto lp = nv::link_probabilities(p, L);
    std::mt19937_64 rng(static_cast<std::uint64_t>(L));
    double sum = 0;
    constexpr int kSamples = 100000;
    for (int i = 0; i < kSamples; ++i) {
      const auto s = nv::sample_link(p, L, rng);
      sum += static_cast<double>(s.k);
      worst_trace = std::max(worst_trace, std::abs(std::real(s.rho.trace()) - 1.0) +
                                              std::abs(std::imag(s.rho.trace())));
    }
    const double mean = sum / kSamples;
    worst_rel = std::max(worst_rel, std::abs(mean * lp.p_succ - 1.0));
  }
  const bool ok = worst_rel < 0.02 && worst_trace < 1e-12;
  report(4, ok,
         fmt("link statistics at L in {10,50,100} km over 1e5 samples: worst "
             "|mean*p_succ - 1| = %.4f (limit 0.02), worst trace deviation %.2e "
             "(limit 1e-12)",
             worst_rel, worst_trace));
}

// ---------------------------------------------------------------------------
// Criterion 5: the hardware-improvement transform against the published table.

bool two_sig_figs(double x, double table) {
  // One unit in the table's second significant digit.
  const double tol = std::pow(10.0, std::floor(std::log10(std::abs(table))) - 1.0);
  return std::abs(x - table) <= tol;
}

void criterion5() {
  nv::NVParams near;
  const auto p3 = nv::improve(near, 3.0);
  const auto p10 = nv::improve(near, 10.0);
  bool ok = true;
  std::string bad;
  auto row = [&](const char* name, double x, double table) {
    if (!two_sig_figs(x, table)) {
      ok = false;
      bad += fmt(" %s=%.6g(table %.3g)", name, x, table);
    }
  };
  row("V3", p3.visibility, 0.97);
  row("V10", p10.visibility, 0.99);
  row("pdet3", p3.p_det_nofibre, 0.16);
  row("pdet10", p10.p_det_nofibre, 0.58);
  row("sigma3", p3.sigma_phase, 0.20);
  row("sigma10", p10.sigma_phase, 0.11);
  row("f0_3", p3.f_readout0, 0.983);
  row("f0_10", p10.f_readout0, 0.995);
  row("f1_3", p3.f_readout1, 0.9983);
  row("f1_10", p10.f_readout1, 0.9995);
  row("cinit3", p3.f_carbon_init, 0.999);
  row("cinit10", p10.f_carbon_init, 0.9997);
  row("ec3", p3.f_ec, 0.990);
  row("ec10", p10.f_ec, 0.997);
  // Rows with documented typos follow the stated no-error-probability rule.
  auto rule_err = [&](const char* name, double x, double want, double rel) {
    if (std::abs(x - want) > rel * std::abs(want)) {
      ok = false;
      bad += fmt(" %s=%.6g(rule %.6g)", name, x, want);
    }
  };
  rule_err("pdexc3", p3.p_dexc, 1.0 - std::pow(1.0 - near.p_dexc, 1.0 / 3.0), 1e-9);
  rule_err("pdexc10", p10.p_dexc, 1.0 - std::pow(1.0 - near.p_dexc, 1.0 / 10.0), 1e-9);
  const double pdc1 = nv::link_probabilities(near, 0.0).p_dc;
  rule_err("pdc3", nv::link_probabilities(p3, 0.0).p_dc,
           1.0 - std::pow(1.0 - pdc1, 1.0 / 3.0), 1e-3);
  rule_err("pdc10", nv::link_probabilities(p10, 0.0).p_dc,
           1.0 - std::pow(1.0 - pdc1, 1.0 / 10.0), 1e-3);
  rule_err("eT1_3", p3.electron_t1_ns, 3.0 * near.electron_t1_ns, 1e-12);
  rule_err("cT1_10", p10.carbon_t1_ns, 10.0 * near.carbon_t1_ns, 1e-12);
  report(5, ok,
         ok ? "improvement transform matches the published 3x/10x table to two "
              "significant figures; typo rows follow the no-error rule"
            : "improvement transform mismatch:" + bad);
}

// ---------------------------------------------------------------------------
// Criterion 6: dark counts raise the perceived success probability.

void criterion6() {
  nv::NVParams p;
  p.p_det_nofibre *= 1e-6;
  double last = -1;
  bool increasing = true;
  std::string vals;
  for (double dark : {0.1, 1.0, 10.0}) {
    p.lambda_dark_hz = dark;
    const double s = nv::link_probabilities(p, 25.0).p_succ;
    vals += fmt(" %.3e", s);
    if (s <= last) increasing = false;
    last = s;
  }
  report(6, increasing,
         "with detection suppressed to 1e-6, p_succ is strictly increasing in the "
         "dark-count rate over {0.1, 1, 10} Hz:" + vals);
}

// ---------------------------------------------------------------------------
// Criteria 7 and 8: switch capacity against the occupancy oracle.

void criterion7() {
  bool ok = true;
  std::string detail;
  for (int k : {2, 3, 4}) {
    for (int B : {1, 2}) {
      qswitch::SwitchConfig cfg;
      cfg.leaves = k;
      cfg.buffer = B;
      cfg.rates_hz = {5000.0};
      const double oracle = qswitch::markov_oracle(cfg);
      const auto res = qswitch::run_switch(cfg, 8.0e9, 11 + k + B);
      const double rel = std::abs(res.capacity_hz - oracle) / oracle;
      bool exact = true;
      for (const auto& r : res.records)
        if (r.fidelity != 1.0) exact = false;
      if (res.produced < 10000 || rel >= 0.05 || !exact) ok = false;
      detail += fmt(" k=%d,B=%d:%.1f%%/%llu", k, B, 100 * rel,
                    static_cast<unsigned long long>(res.produced));
    }
  }
  report(7, ok,
         "switch capacity within 5% of the occupancy oracle over >= 1e4 produced "
         "states per cell, all fidelities exactly 1:" + detail);
}

void criterion8() {
  double last = 0;
  bool ok = true;
  std::string detail;
  for (double t2_ms : {0.5, 5.0, 50.0}) {
    qswitch::SwitchConfig cfg;
    cfg.leaves = 9;
    cfg.ghz_size = 4;
    cfg.buffer = 2;
    cfg.t2_ns = t2_ms * 1e6;
    cfg.formalism = quant::Formalism::DM;
    for (int l = 0; l < 9; ++l) cfg.rates_hz.push_back(600.0 + 130.0 * l);
    const auto res = qswitch::run_switch(cfg, 4.0e9, 4);
    detail += fmt(" T2=%.1fms:cap=%.0fHz,F=%.4f", t2_ms, res.capacity_hz, res.mean_fidelity);
    if (res.produced < 100 || !(res.mean_fidelity < 1.0) || !(res.mean_fidelity > last))
      ok = false;
    last = res.mean_fidelity;
  }
  report(8, ok,
         "heterogeneous 9-leaf switch producing 4-party states completes with "
         "fidelity < 1, monotone in T2:" + detail);
}

// ---------------------------------------------------------------------------
// Criterion 9: large-chain scalability with bounded state size.

void criterion9() {
  const auto t0 = Clock::now();
  const auto res = cli::bench_chain(1000, quant::Formalism::KET, true, 1);
  const double el = seconds_since(t0);
  const bool ok = el < 600.0 && res.quantum.max_state_qubits <= 4;
  report(9, ok,
         fmt("event-driven chain with 1000 nodes (ket, split): %.1fs (limit 600s), "
             "max tracked state %llu qubits (limit 4), %d corrections applied",
             el, static_cast<unsigned long long>(res.quantum.max_state_qubits),
             res.corrections));
}

// ---------------------------------------------------------------------------
// Criterion 10: benchmark scaling shapes and memoization gain.

void criterion10() {
  // Ket per-qubit runtime doubles per added qubit: least-squares slope of
  // log2(seconds / n) against n, exponentiated back to a ratio. Memoization
  // is off so cache evictions near the largest sizes cannot skew the fit;
  // its effect is measured separately below.
  std::vector<cli::BenchPoint> ket;
  for (int n = 18; n <= 24; ++n)
    ket.push_back(cli::bench_ghz(n, quant::Formalism::KET, false, 3, 3, 5));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& pt : ket) {
    const double x = pt.n, y = std::log2(pt.seconds / pt.n);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(ket.size());
  const double ratio = std::exp2((m * sxy - sx * sy) / (m * sxx - sx * sx));

  // Stabiliser runtime stays polynomial of low degree.
  std::vector<cli::BenchPoint> stab;
  for (int n = 10; n <= 200; n += 10)
    stab.push_back(cli::bench_ghz(n, quant::Formalism::STAB, true, 5, 3, 5));
  const double slope = cli::log_log_slope(stab);

  // Memoization changes speed, never outputs.
  const auto on = cli::bench_ghz(20, quant::Formalism::KET, true, 30, 5, 7);
  const auto off = cli::bench_ghz(20, quant::Formalism::KET, false, 30, 5, 7);
  const double speedup = off.seconds / on.seconds;

  const bool ok = ratio >= 1.7 && ratio <= 2.3 && slope <= 3.0 &&
                  on.digest == off.digest && speedup >= 1.5;
  report(10, ok,
         fmt("scaling shapes: ket per-qubit runtime ratio %.2f over n in [18,24] "
             "(limit 2 +- 0.3), stabiliser power-law exponent %.2f over n in "
             "[10,200] (limit 3), memoization outputs identical: %s, speedup "
             "%.2fx at n=20 (limit 1.5x)",
             ratio, slope, on.digest == off.digest ? "yes" : "no", speedup));
}

// ---------------------------------------------------------------------------
// Criterion 11: byte-identical result files on re-run.

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion11() {
  bool ok = true;
  std::string detail;
  const fs::path base = fs::temp_directory_path() / "qnetsim_acceptance";
  fs::remove_all(base);

  struct Case {
    const char* name;
    cli::ScenarioConfig cfg;
    std::vector<const char*> files;
  };
  std::vector<Case> cases;
  {
    cli::ScenarioConfig c;
    c.scenario = "switch";
    c.runs = 2;
    c.seed = 5;
    c.params = {{"leaves", 3}, {"rates_hz", 2000.0}, {"duration_ns", 2.0e8}};
    cases.push_back({"switch", c, {"results.csv", "summary.csv", "ghz.csv"}});
  }
  {
    cli::ScenarioConfig c;
    c.scenario = "nv-chain";
    c.runs = 5;
    c.seed = 11;
    c.formalism = quant::Formalism::DM;
    c.params = {{"nodes", 3}};
    cases.push_back({"nv-chain", c, {"results.csv", "summary.csv"}});
  }
  {
    cli::ScenarioConfig c;
    c.scenario = "bench-chain";
    c.runs = 2;
    c.seed = 3;
    c.params = {{"nodes", 20}};
    cases.push_back({"bench-chain", c, {"results.csv", "summary.csv"}});
  }
  for (auto& cs : cases) {
    const fs::path d1 = base / (std::string(cs.name) + "-1");
    const fs::path d2 = base / (std::string(cs.name) + "-2");
    cs.cfg.out_dir = d1.string();
    cli::run_scenario(cs.cfg);
    cs.cfg.out_dir = d2.string();
    cli::run_scenario(cs.cfg);
    for (const char* f : cs.files) {
      const bool same = slurp(d1 / f) == slurp(d2 / f);
      if (!same) {
        ok = false;
        detail += fmt(" %s/%s differs", cs.name, f);
      }
    }
  }
  report(11, ok,
         ok ? "re-running switch, nv-chain and bench-chain scenarios with identical "
              "config and seed reproduces byte-identical result CSVs"
            : "determinism failure:" + detail);
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  std::printf("%d of 11 criteria passed in %.1fs\n", 11 - g_failures, seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
