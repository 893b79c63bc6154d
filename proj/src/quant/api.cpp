// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnetsim/quant/api.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "qnetsim/quant/backends.hpp"
#include "qnetsim/quant/convert.hpp"

namespace qnet::quant {

StatePtr make_state(Formalism f, int n) {
  switch (f) {
    case Formalism::KET: return std::make_shared<KetState>(n);
    case Formalism::DM: return std::make_shared<DmState>(n);
    case Formalism::STAB: return std::make_shared<StabState>(n);
    case Formalism::GSLC: return std::make_shared<GslcState>(n);
  }
  throw UnsupportedFormalism();
}

}  // namespace qnet::quant

namespace qnet::quant::api {

namespace {

void check_alive(const std::vector<QubitPtr>& qs) {
  for (const auto& q : qs)
    if (!q || !q->alive()) throw DeadQubit();
}

// Merges all targets into one shared state (tensor on the right, in first
// appearance order) and returns it.
StatePtr merge(Context& ctx, const std::vector<QubitPtr>& targets) {
  StatePtr base = targets[0]->state_ptr();
  for (const auto& q : targets) {
    StatePtr other = q->state_ptr();
    if (other == base) continue;
    base->absorb(*other);
    ++ctx.stats.merges;
  }
  ctx.stats.note_size(base->num_qubits());
  return base;
}

std::vector<int> positions(const std::vector<QubitPtr>& targets) {
  std::vector<int> pos;
  pos.reserve(targets.size());
  for (const auto& q : targets) pos.push_back(q->pos());
  std::set<int> uniq(pos.begin(), pos.end());
  if (uniq.size() != pos.size()) throw ArityMismatch("duplicate target qubit");
  return pos;
}

// Detaches the measured qubit into its own 1-qubit |outcome> state.
void split_off(Context& ctx, const QubitPtr& q, int outcome) {
  StatePtr old = q->state_ptr();
  const Formalism f = old->formalism();
  old->detach(q->pos());
  old->remove(q->pos());
  StatePtr fresh = make_state(f, 1);
  q->rebind(fresh, 0);
  fresh->attach(q.get(), 0);
  if (outcome == 1) fresh->apply(ops::x(), {0}, ctx);
  ++ctx.stats.splits;
}

}  // namespace

QubitPtr make_qubit(StatePtr s, int pos) {
  auto q = std::make_shared<Qubit>(s, pos);
  s->attach(q.get(), pos);
  return q;
}

std::vector<QubitPtr> create_qubits(Context& ctx, int n, Formalism f) {
  if (n < 1) throw OutOfRange("create_qubits needs n >= 1");
  std::vector<QubitPtr> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(make_qubit(make_state(f, 1), 0));
  ctx.stats.note_size(1);
  return out;
}

void apply(Context& ctx, const Operator& op, const std::vector<QubitPtr>& targets) {
  check_alive(targets);
  if (op.arity() != static_cast<int>(targets.size())) throw ArityMismatch(op.key());
  StatePtr s = merge(ctx, targets);
  s->apply(op, positions(targets), ctx);
  ++ctx.stats.ops_applied;
}

MeasureResult measure(Context& ctx, const QubitPtr& q, MeasureMode mode) {
  check_alive({q});
  StatePtr s = q->state_ptr();
  ctx.stats.note_size(s->num_qubits());
  const MeasureResult r = s->measure(q->pos(), ctx);
  ++ctx.stats.measurements;
  if (mode == MeasureMode::Split && s->num_qubits() > 1) split_off(ctx, q, r.outcome);
  return r;
}

MeasureResult measure_povm(Context& ctx, const QubitPtr& q, const Mat& m0, const Mat& m1) {
  check_alive({q});
  StatePtr s = q->state_ptr();
  const MeasureResult r = s->measure_kraus_pair(m0, m1, q->pos(), ctx);
  ++ctx.stats.measurements;
  return r;
}

void apply_channel(Context& ctx, const Channel& ch, const std::vector<QubitPtr>& targets) {
  check_alive(targets);
  if (ch.arity() != static_cast<int>(targets.size())) throw ArityMismatch(ch.name());
  StatePtr s = merge(ctx, targets);
  const std::vector<int> pos = positions(targets);
  const Formalism f = s->formalism();
  if (f == Formalism::DM) {
    s->apply_kraus(ch.kraus_ops(), pos, ctx);
  } else if (ch.is_pauli_mixture()) {
    // Trajectory semantics: sample one Pauli term.
    double u = ctx.uniform();
    const auto& mix = ch.mixture();
    std::size_t pick = mix.size() - 1;
    double acc = 0;
    for (std::size_t i = 0; i < mix.size(); ++i) {
      acc += mix[i].first;
      if (u < acc) { pick = i; break; }
    }
    s->apply_pauli(mix[pick].second, pos);
  } else if (f == Formalism::KET) {
    s->apply_kraus(ch.kraus_ops(), pos, ctx);
  } else {
    throw NonPauliChannelOnStabiliser(ch.name());
  }
  ++ctx.stats.channels_applied;
}

Mat peek_reduced(const std::vector<QubitPtr>& qubits) {
  check_alive(qubits);
  // Group by shared state, in first-appearance order; the joint DM is the
  // Kronecker product of the per-state reductions, then reordered to the
  // requested qubit order.
  std::vector<State*> states;
  std::vector<std::vector<int>> group_pos;    // per group, positions in state
  std::vector<std::vector<int>> group_slots;  // per group, indices into `qubits`
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    State* s = &qubits[i]->state();
    std::size_t g = 0;
    for (; g < states.size(); ++g)
      if (states[g] == s) break;
    if (g == states.size()) {
      states.push_back(s);
      group_pos.emplace_back();
      group_slots.emplace_back();
    }
    group_pos[g].push_back(qubits[i]->pos());
    group_slots[g].push_back(static_cast<int>(i));
  }
  Mat rho = Mat::Identity(1, 1);
  std::vector<int> order;  // qubit index at each kron slot
  for (std::size_t g = 0; g < states.size(); ++g) {
    rho = kron(rho, states[g]->reduced_dm(group_pos[g]));
    for (int idx : group_slots[g]) order.push_back(idx);
  }
  const int n = static_cast<int>(qubits.size());
  bool sorted = true;
  for (int i = 0; i < n; ++i)
    if (order[i] != i) sorted = false;
  if (sorted) return rho;
  // Permute: slot i currently holds requested qubit order[i]; build the
  // matrix with requested qubit j at bit position j.
  const std::int64_t dim = std::int64_t{1} << n;
  Mat out = Mat::Zero(dim, dim);
  auto remap = [&](std::int64_t idx) {
    std::int64_t r = 0;
    for (int i = 0; i < n; ++i) {
      const int bit = static_cast<int>((idx >> (n - 1 - i)) & 1);
      r |= static_cast<std::int64_t>(bit) << (n - 1 - order[i]);
    }
    return r;
  };
  for (std::int64_t i = 0; i < dim; ++i)
    for (std::int64_t j = 0; j < dim; ++j) out(remap(i), remap(j)) = rho(i, j);
  return out;
}

double fidelity(const std::vector<QubitPtr>& qubits, const Vec& reference) {
  if (reference.size() != (std::int64_t{1} << qubits.size()))
    throw SizeMismatch("fidelity reference dimension");
  const Mat rho = peek_reduced(qubits);
  const double f = std::real((reference.adjoint() * rho * reference)(0, 0));
  return std::clamp(f, 0.0, 1.0);
}

void convert(Context& ctx, const QubitPtr& q, Formalism target) {
  check_alive({q});
  StatePtr s = q->state_ptr();
  if (s->formalism() == target) return;
  StatePtr fresh = convert_state(*s, target);
  const int n = s->num_qubits();
  for (int p = 0; p < n; ++p) {
    Qubit* h = s->slot(p);
    if (!h) continue;
    h->rebind(fresh, p);
    fresh->attach(h, p);
  }
  ++ctx.stats.conversions;
}

int discard(Context& ctx, const QubitPtr& q) {
  const MeasureResult r = measure(ctx, q, MeasureMode::Split);
  q->kill();
  return r.outcome;
}

void assign_dm(Context& ctx, const std::vector<QubitPtr>& qubits, const Mat& rho) {
  check_alive(qubits);
  StatePtr s = merge(ctx, qubits);
  const int n = s->num_qubits();
  if (static_cast<int>(qubits.size()) != n)
    throw SizeMismatch("assign_dm qubits must form their whole state");
  if (rho.rows() != (std::int64_t{1} << n) || rho.cols() != rho.rows())
    throw SizeMismatch("assign_dm dimension");
  // Map requested order onto state positions: requested qubit i (bit i of
  // rho) must land at its state position.
  std::vector<int> pos = positions(qubits);
  Mat arranged = rho;
  {
    bool sorted = true;
    for (int i = 0; i < n; ++i)
      if (pos[i] != i) sorted = false;
    if (!sorted) {
      const std::int64_t dim = std::int64_t{1} << n;
      arranged = Mat::Zero(dim, dim);
      auto remap = [&](std::int64_t idx) {
        std::int64_t r = 0;
        for (int i = 0; i < n; ++i) {
          const int bit = static_cast<int>((idx >> (n - 1 - i)) & 1);
          r |= static_cast<std::int64_t>(bit) << (n - 1 - pos[i]);
        }
        return r;
      };
      for (std::int64_t i = 0; i < dim; ++i)
        for (std::int64_t j = 0; j < dim; ++j) arranged(remap(i), remap(j)) = rho(i, j);
    }
  }
  const Formalism f = s->formalism();
  if (f == Formalism::DM) {
    dynamic_cast<DmState&>(*s).rho() = arranged;
    return;
  }
  // Pure-component sampling for the trajectory formalisms.
  Eigen::SelfAdjointEigenSolver<Mat> es(arranged);
  if (es.info() != Eigen::Success) throw InvalidKrausSet("assign_dm eigensolver failed");
  const auto& w = es.eigenvalues();
  const double u = ctx.uniform();
  double acc = 0;
  int pick = static_cast<int>(w.size()) - 1;
  for (int i = static_cast<int>(w.size()) - 1; i >= 0; --i) {  // descending weight
    acc += std::max(0.0, w[i]);
    if (u < acc) { pick = i; break; }
  }
  Vec psi = es.eigenvectors().col(pick);
  psi.normalize();
  if (f == Formalism::KET) {
    dynamic_cast<KetState&>(*s).amp() = psi;
    return;
  }
  // STAB/GSLC: the sampled component must be a stabiliser state.
  const auto gens = ket_stabiliser_generators(psi);
  if (f == Formalism::STAB) {
    dynamic_cast<StabState&>(*s).set_from_generators(gens);
    return;
  }
  // Rebuild a graph state and swap the payload in by rebinding handles.
  KetState tmp(psi);
  StatePtr fresh = convert_state(tmp, Formalism::GSLC);
  for (int p = 0; p < n; ++p) {
    Qubit* h = s->slot(p);
    if (!h) continue;
    h->rebind(fresh, p);
    fresh->attach(h, p);
  }
}

}  // namespace qnet::quant::api
