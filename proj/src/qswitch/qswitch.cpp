// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>

#include "qnetsim/qswitch/qswitch.hpp"

namespace qnet::qswitch {

namespace api = quant::api;

void SwitchConfig::validate() const {
  if (leaves < 2) throw net::ConfigError("switch needs at least two leaves");
  if (ghz_size < 2 || ghz_size > leaves)
    throw net::ConfigError("target state size must be between 2 and the leaf count");
  if (buffer < 1) throw net::ConfigError("buffer must hold at least one pair");
  if (rates_hz.empty() ||
      (rates_hz.size() != 1 && rates_hz.size() != static_cast<std::size_t>(leaves)))
    throw net::ConfigError("need one rate, or one per leaf");
  for (double r : rates_hz)
    if (!(r > 0)) throw net::ConfigError("arrival rates must be positive");
  if (!(t2_ns > 0)) throw net::ConfigError("coherence time must be positive");
}

double next_arrival_ns(double rate_hz, std::mt19937_64& rng) {
  std::exponential_distribution<double> dist(rate_hz * 1e-9);
  return dist(rng);
}

std::vector<int> ghz_measure(quant::Context& ctx, const std::vector<quant::QubitPtr>& qubits) {
  if (qubits.size() < 2) throw InsufficientLinks();
  for (std::size_t j = 1; j < qubits.size(); ++j)
    api::apply(ctx, quant::ops::cnot(), {qubits[0], qubits[j]});
  api::apply(ctx, quant::ops::h(), {qubits[0]});
  std::vector<int> out;
  out.reserve(qubits.size());
  for (const auto& q : qubits)
    out.push_back(api::measure(ctx, q, quant::MeasureMode::Split).outcome);
  return out;
}

namespace {

// Support of |0 b2..bn> + (-1)^{b1} |1 ~b2..~bn>: the two basis indices and
// the relative sign, first qubit most significant.
void ghz_support(const std::vector<int>& outcomes, long long& i0, long long& i1, int& sign) {
  const int n = static_cast<int>(outcomes.size());
  i0 = 0;
  i1 = 1LL << (n - 1);
  for (int j = 1; j < n; ++j) {
    const long long bit = 1LL << (n - 1 - j);
    if (outcomes[j]) i0 |= bit;
    else i1 |= bit;
  }
  sign = outcomes[0] ? -1 : 1;
}

}  // namespace

Eigen::VectorXcd ghz_reference(const std::vector<int>& outcomes) {
  long long i0 = 0, i1 = 0;
  int sign = 1;
  ghz_support(outcomes, i0, i1, sign);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1LL << outcomes.size());
  const double s = 1.0 / std::sqrt(2.0);
  v(i0) = s;
  v(i1) = sign * s;
  return v;
}

double ghz_fidelity(const std::vector<quant::QubitPtr>& leaf_qubits,
                    const std::vector<int>& outcomes) {
  long long i0 = 0, i1 = 0;
  int sign = 1;
  ghz_support(outcomes, i0, i1, sign);
  const quant::Mat rho = api::peek_reduced(leaf_qubits);
  // <r|rho|r> / tr(rho) with the exact +-1/2 coefficients of the reference
  // projector; the extended-precision ratio keeps a perfect state at 1.
  long double tr = 0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) tr += static_cast<long double>(rho(i, i).real());
  const long double num =
      0.5L * (static_cast<long double>(rho(i0, i0).real()) +
              static_cast<long double>(rho(i1, i1).real()) +
              2.0L * sign * static_cast<long double>(rho(i0, i1).real()));
  return static_cast<double>(num / tr);
}

namespace {

struct StoredPair {
  quant::QubitPtr at_switch;
  quant::QubitPtr at_leaf;
  double created_ns = 0;
  int leaf = 0;
};

}  // namespace

SwitchResult run_switch(const SwitchConfig& cfg, double duration_ns, std::uint64_t seed) {
  cfg.validate();
  if (!(duration_ns > 0)) throw net::ConfigError("run duration must be positive");
  net::Runtime rt(seed);
  const int k = cfg.leaves, n = cfg.ghz_size;
  std::vector<std::deque<StoredPair>> ledger(k);
  SwitchResult res;
  double fid_sum = 0;

  auto dephase_by_age = [&](const quant::QubitPtr& q, double age) {
    if (!std::isfinite(cfg.t2_ns)) return;
    const double p = 0.5 * (1.0 - std::exp(-age / cfg.t2_ns));
    if (p > 0) api::apply_channel(rt.quantum, noise::dephase_channel(p), {q});
  };

  auto try_measure = [&] {
    std::vector<const StoredPair*> fronts;
    for (const auto& q : ledger)
      if (!q.empty()) fronts.push_back(&q.front());
    if (static_cast<int>(fronts.size()) < n) return;
    // the oldest stored pair of each occupied leaf competes; take the n oldest
    std::sort(fronts.begin(), fronts.end(), [](const StoredPair* a, const StoredPair* b) {
      return a->created_ns < b->created_ns;
    });
    fronts.resize(n);
    const double now = rt.engine.now();
    std::vector<StoredPair> picked;
    for (const StoredPair* f : fronts) {
      picked.push_back(*f);
      ledger[f->leaf].pop_front();
    }
    std::vector<quant::QubitPtr> sw, lf;
    for (const StoredPair& p : picked) {
      dephase_by_age(p.at_switch, now - p.created_ns);
      dephase_by_age(p.at_leaf, now - p.created_ns);
      sw.push_back(p.at_switch);
      lf.push_back(p.at_leaf);
    }
    const std::vector<int> outcomes = ghz_measure(rt.quantum, sw);
    const double fid = ghz_fidelity(lf, outcomes);
    ++res.produced;
    fid_sum += fid;
    res.records.push_back({now, outcomes, fid});
    for (const auto& q : lf) api::discard(rt.quantum, q);
  };

  auto on_arrival = [&](int leaf, quant::QubitPtr at_switch, quant::QubitPtr at_leaf) {
    auto& q = ledger[leaf];
    q.push_back({std::move(at_switch), std::move(at_leaf), rt.engine.now(), leaf});
    if (static_cast<int>(q.size()) > cfg.buffer) {
      api::discard(rt.quantum, q.front().at_switch);
      api::discard(rt.quantum, q.front().at_leaf);
      q.pop_front();
    }
    try_measure();
  };

  std::vector<std::unique_ptr<net::QSource>> sources;
  for (int l = 0; l < k; ++l) {
    sources.push_back(std::make_unique<net::QSource>(rt, cfg.formalism));
    sources.back()->start_clock(cfg.rate(l), [&, l](quant::QubitPtr a, quant::QubitPtr b) {
      on_arrival(l, std::move(a), std::move(b));
    });
  }
  rt.engine.run_until(duration_ns);
  for (auto& s : sources) s->stop_clock();

  res.capacity_hz = res.produced / (duration_ns * 1e-9);
  res.mean_fidelity = res.produced ? fid_sum / res.produced : 0.0;
  res.engine_stats = rt.engine.stats();
  res.quantum_stats = rt.quantum.stats;
  return res;
}

}  // namespace qnet::qswitch
