// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Stationary capacity of the switch occupancy chain. A measurement fires the
// instant n leaves hold pairs, so every reachable occupancy vector has at
// most n-1 nonempty leaves and both the saturated arrival (drop-oldest keeps
// the count at the buffer bound) and the post-measurement decrement are
// functions of the counts alone.

#include <cmath>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "qnetsim/qswitch/qswitch.hpp"

namespace qnet::qswitch {

namespace {

using State = std::vector<int>;

int nonempty(const State& s) {
  int c = 0;
  for (int q : s) c += q > 0;
  return c;
}

}  // namespace

double markov_oracle(const SwitchConfig& cfg) {
  cfg.validate();
  const int k = cfg.leaves, n = cfg.ghz_size, B = cfg.buffer;
  if (k * std::log1p(B) > std::log(1e6)) throw StateSpaceTooLarge();

  // Enumerate reachable states (at most n-1 nonempty leaves) breadth-first.
  std::map<State, int> index;
  std::vector<State> states;
  auto intern = [&](const State& s) {
    auto [it, fresh] = index.emplace(s, static_cast<int>(states.size()));
    if (fresh) {
      states.push_back(s);
      if (states.size() > 30000) throw StateSpaceTooLarge();
    }
    return it->second;
  };
  intern(State(k, 0));

  struct Edge {
    int from, to;
    double rate;
  };
  std::vector<Edge> edges;
  std::vector<double> production;  // triggered arrival rate per state
  for (std::size_t si = 0; si < states.size(); ++si) {
    production.resize(states.size(), 0.0);
    for (int l = 0; l < k; ++l) {
      State s = states[si];
      s[l] = std::min(s[l] + 1, B);
      if (nonempty(s) >= n) {
        // measurement: every occupied leaf loses its oldest pair
        for (int j = 0; j < k; ++j)
          if (s[j] > 0) --s[j];
        production[si] += cfg.rate(l);
      }
      edges.push_back({static_cast<int>(si), intern(s), cfg.rate(l)});
    }
  }
  production.resize(states.size(), 0.0);

  const int m = static_cast<int>(states.size());
  // pi Q = 0 with sum(pi) = 1; solve Q^T pi = 0 with the last row replaced.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (const Edge& e : edges) {
    if (e.from != e.to) {
      a(e.to, e.from) += e.rate;
      a(e.from, e.from) -= e.rate;
    }
  }
  a.row(m - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  b(m - 1) = 1.0;
  const Eigen::VectorXd pi = a.fullPivLu().solve(b);

  double capacity = 0;
  for (int s = 0; s < m; ++s) capacity += pi(s) * production[s];
  return capacity;
}

}  // namespace qnet::qswitch
