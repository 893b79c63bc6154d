// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "qnetsim/quant/backends.hpp"

namespace qnet::quant {

// --------------------------------------------------------------------------
// Base-class slot bookkeeping and defaults

void State::attach(Qubit* q, int pos) {
  if (pos >= static_cast<int>(slots_.size())) slots_.resize(pos + 1, nullptr);
  slots_[pos] = q;
}

void State::move_slot(int from, int to) {
  slots_[to] = slots_[from];
  slots_[from] = nullptr;
  if (slots_[to]) slots_[to]->set_pos(to);
}

void State::append_slots(State& other) {
  const int base = num_qubits();
  for (int i = 0; i < other.num_qubits(); ++i) {
    Qubit* q = other.slots_[i];
    slots_.push_back(q);
    if (q) {
      q->rebind(shared_from_this(), base + i);
    }
  }
  other.slots_.clear();
}

void State::pop_slot() { slots_.pop_back(); }

MeasureResult State::measure_kraus_pair(const Mat&, const Mat&, int, Context&) {
  throw UnsupportedFormalism();
}

Qubit::Qubit(StatePtr state, int pos) : state_(std::move(state)), pos_(pos) {
  state_->attach(this, pos_);
}

Qubit::~Qubit() {
  // Orphan the position: the physical column is carried along untouched,
  // which leaves every other qubit's reduced state unchanged.
  if (state_) state_->detach(pos_);
}

void Qubit::rebind(StatePtr s, int pos) {
  state_ = std::move(s);
  pos_ = pos;
}

// --------------------------------------------------------------------------
// Shared helpers

namespace {

// Removes the slot at `pos`; qubits after it shift down by one.
void shift_slots_down(State& s, int pos) {
  // Implemented via the protected helpers exposed on State.
  for (int i = pos + 1; i < s.num_qubits(); ++i) s.move_slot(i, i - 1);
  s.pop_slot();
}

std::shared_ptr<const SparseOp> expansion(Context& ctx, const std::string& key, const Mat& u,
                                          const std::vector<int>& pos, int n) {
  if (ctx.memo_enabled) return ctx.memo.get_or_build(key, pos, n, u);
  return build_expansion(u, pos, n);
}

}  // namespace

// --------------------------------------------------------------------------
// KetState

KetState::KetState(int n) {
  amp_ = Vec::Zero(std::int64_t{1} << n);
  amp_[0] = 1;
  slots_.resize(n, nullptr);
}

KetState::KetState(Vec amp) : amp_(std::move(amp)) {
  int n = 0;
  while ((std::int64_t{1} << n) < amp_.size()) ++n;
  if ((std::int64_t{1} << n) != amp_.size()) throw SizeMismatch();
  slots_.resize(n, nullptr);
}

void KetState::apply(const Operator& op, const std::vector<int>& pos, Context& ctx) {
  if (op.arity() != static_cast<int>(pos.size())) throw ArityMismatch();
  auto sp = expansion(ctx, op.key(), op.matrix(), pos, num_qubits());
  Vec out(amp_.size());
  sp->apply_vec(amp_.data(), out.data());
  amp_.swap(out);
  ++ctx.stats.ops_applied;
  ctx.stats.note_size(num_qubits());
}

void KetState::apply_pauli(const PauliString& p, const std::vector<int>& pos) {
  const std::int64_t dim = amp_.size();
  for (std::size_t t = 0; t < p.size(); ++t) {
    const std::int64_t mask = std::int64_t{1} << shift(pos[t]);
    switch (p[t]) {
      case Pauli::I:
        break;
      case Pauli::X:
        for (std::int64_t r = 0; r < dim; ++r)
          if (!(r & mask)) std::swap(amp_[r], amp_[r | mask]);
        break;
      case Pauli::Y:
        for (std::int64_t r = 0; r < dim; ++r)
          if (!(r & mask)) {
            cd a0 = amp_[r], a1 = amp_[r | mask];
            amp_[r] = cd(0, -1) * a1;
            amp_[r | mask] = cd(0, 1) * a0;
          }
        break;
      case Pauli::Z:
        for (std::int64_t r = 0; r < dim; ++r)
          if (r & mask) amp_[r] = -amp_[r];
        break;
    }
  }
}

MeasureResult KetState::measure(int pos, Context& ctx) {
  const std::int64_t dim = amp_.size();
  const std::int64_t mask = std::int64_t{1} << shift(pos);
  double p0 = 0;
  for (std::int64_t r = 0; r < dim; ++r)
    if (!(r & mask)) p0 += std::norm(amp_[r]);
  const double u = ctx.uniform();
  const int outcome = u < p0 ? 0 : 1;
  const double p = outcome == 0 ? p0 : 1.0 - p0;
  const double scale = 1.0 / std::sqrt(p);
  for (std::int64_t r = 0; r < dim; ++r) {
    if (((r & mask) != 0) != (outcome == 1)) {
      amp_[r] = 0;
    } else {
      amp_[r] *= scale;
    }
  }
  ++ctx.stats.measurements;
  ctx.stats.note_size(num_qubits());
  return {outcome, p};
}

MeasureResult KetState::measure_kraus_pair(const Mat& m0, const Mat& m1, int pos, Context& ctx) {
  auto s0 = build_expansion(m0, {pos}, num_qubits());
  auto s1 = build_expansion(m1, {pos}, num_qubits());
  Vec out(amp_.size());
  s0->apply_vec(amp_.data(), out.data());
  const double w0 = out.squaredNorm();
  const double u = ctx.uniform();
  int outcome = 0;
  double w = w0;
  if (u >= w0) {
    outcome = 1;
    s1->apply_vec(amp_.data(), out.data());
    w = out.squaredNorm();
  }
  amp_ = out / std::sqrt(w);
  ++ctx.stats.measurements;
  return {outcome, w};
}

void KetState::remove(int pos) {
  const int sh = shift(pos);
  const std::int64_t mask = std::int64_t{1} << sh;
  // The qubit is collapsed; find which branch carries the support.
  double p0 = 0;
  for (std::int64_t r = 0; r < amp_.size(); ++r)
    if (!(r & mask)) p0 += std::norm(amp_[r]);
  const int outcome = p0 > 0.5 ? 0 : 1;
  Vec out(amp_.size() / 2);
  const std::int64_t low = mask - 1;
  for (std::int64_t r2 = 0; r2 < out.size(); ++r2) {
    const std::int64_t r = ((r2 & ~low) << 1) | (static_cast<std::int64_t>(outcome) << sh) |
                           (r2 & low);
    out[r2] = amp_[r];
  }
  out /= out.norm();
  amp_.swap(out);
  shift_slots_down(*this, pos);
}

void KetState::apply_kraus(const std::vector<Mat>& ks, const std::vector<int>& pos, Context& ctx) {
  // Sample one branch with probability <psi|K^dag K|psi>.
  std::vector<double> w(ks.size());
  Vec tmp(amp_.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    auto sp = build_expansion(ks[i], pos, num_qubits());
    sp->apply_vec(amp_.data(), tmp.data());
    w[i] = tmp.squaredNorm();
  }
  double u = ctx.uniform();
  std::size_t pick = ks.size() - 1;
  double acc = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    acc += w[i];
    if (u < acc) {
      pick = i;
      break;
    }
  }
  auto sp = build_expansion(ks[pick], pos, num_qubits());
  sp->apply_vec(amp_.data(), tmp.data());
  amp_ = tmp / std::sqrt(w[pick]);
  ++ctx.stats.channels_applied;
  ctx.stats.note_size(num_qubits());
}

Mat KetState::reduced_dm(const std::vector<int>& pos) const {
  const int n = num_qubits();
  const int m = static_cast<int>(pos.size());
  const std::int64_t kdim = std::int64_t{1} << m;
  std::uint64_t kept = 0;
  for (int t = 0; t < m; ++t) kept |= std::uint64_t{1} << (n - 1 - pos[t]);
  // Enumerate environment indices by scattering a counter over non-kept bits.
  std::vector<int> env_shifts;
  for (int b = 0; b < n; ++b)
    if (!(kept & (std::uint64_t{1} << b))) env_shifts.push_back(b);
  std::vector<std::uint64_t> scat(kdim, 0);
  for (std::int64_t j = 0; j < kdim; ++j)
    for (int t = 0; t < m; ++t)
      if ((j >> (m - 1 - t)) & 1) scat[j] |= std::uint64_t{1} << (n - 1 - pos[t]);
  Mat out = Mat::Zero(kdim, kdim);
  const std::int64_t edim = std::int64_t{1} << env_shifts.size();
  for (std::int64_t e = 0; e < edim; ++e) {
    std::uint64_t env = 0;
    for (std::size_t t = 0; t < env_shifts.size(); ++t)
      if ((e >> t) & 1) env |= std::uint64_t{1} << env_shifts[t];
    for (std::int64_t a = 0; a < kdim; ++a)
      for (std::int64_t b = 0; b < kdim; ++b)
        out(a, b) += amp_[env | scat[a]] * std::conj(amp_[env | scat[b]]);
  }
  return out;
}

Vec KetState::to_ket() const { return amp_; }
Mat KetState::to_dm() const { return amp_ * amp_.adjoint(); }

void KetState::absorb(State& other) {
  auto& o = dynamic_cast<KetState&>(other);
  Vec out(amp_.size() * o.amp_.size());
  for (std::int64_t i = 0; i < amp_.size(); ++i)
    out.segment(i * o.amp_.size(), o.amp_.size()) = amp_[i] * o.amp_;
  amp_.swap(out);
  append_slots(other);
}

// --------------------------------------------------------------------------
// DmState

DmState::DmState(int n) {
  const std::int64_t dim = std::int64_t{1} << n;
  rho_ = Mat::Zero(dim, dim);
  rho_(0, 0) = 1;
  slots_.resize(n, nullptr);
}

DmState::DmState(Mat rho) : rho_(std::move(rho)) {
  int n = 0;
  while ((std::int64_t{1} << n) < rho_.rows()) ++n;
  if ((std::int64_t{1} << n) != rho_.rows() || rho_.rows() != rho_.cols()) throw SizeMismatch();
  slots_.resize(n, nullptr);
}

void DmState::apply(const Operator& op, const std::vector<int>& pos, Context& ctx) {
  if (op.arity() != static_cast<int>(pos.size())) throw ArityMismatch();
  auto sp = expansion(ctx, op.key(), op.matrix(), pos, num_qubits());
  Mat t(rho_.rows(), rho_.cols());
  sp->apply_left(rho_, t);
  Mat ta = t.adjoint();
  sp->apply_left(ta, rho_);
  ++ctx.stats.ops_applied;
  ctx.stats.note_size(num_qubits());
}

void DmState::apply_pauli(const PauliString& p, const std::vector<int>& pos) {
  // Build the full local unitary on the targets and conjugate exactly.
  Mat u = Mat::Identity(1, 1);
  for (Pauli q : p) u = kron(u, pauli_matrix(q));
  auto sp = build_expansion(u, pos, num_qubits());
  Mat t(rho_.rows(), rho_.cols());
  sp->apply_left(rho_, t);
  Mat ta = t.adjoint();
  sp->apply_left(ta, rho_);
}

MeasureResult DmState::measure(int pos, Context& ctx) {
  const std::int64_t dim = rho_.rows();
  const std::int64_t mask = std::int64_t{1} << shift(pos);
  double p0 = 0;
  for (std::int64_t r = 0; r < dim; ++r)
    if (!(r & mask)) p0 += rho_(r, r).real();
  const double u = ctx.uniform();
  const int outcome = u < p0 ? 0 : 1;
  const double p = outcome == 0 ? p0 : 1.0 - p0;
  for (std::int64_t r = 0; r < dim; ++r) {
    const bool keep_r = ((r & mask) != 0) == (outcome == 1);
    for (std::int64_t c = 0; c < dim; ++c) {
      const bool keep_c = ((c & mask) != 0) == (outcome == 1);
      if (keep_r && keep_c) {
        rho_(r, c) /= p;
      } else {
        rho_(r, c) = 0;
      }
    }
  }
  ++ctx.stats.measurements;
  ctx.stats.note_size(num_qubits());
  return {outcome, p};
}

MeasureResult DmState::measure_kraus_pair(const Mat& m0, const Mat& m1, int pos, Context& ctx) {
  auto s0 = build_expansion(m0, {pos}, num_qubits());
  auto s1 = build_expansion(m1, {pos}, num_qubits());
  Mat t(rho_.rows(), rho_.cols());
  s0->apply_left(rho_, t);
  Mat ta = t.adjoint();
  Mat r0(rho_.rows(), rho_.cols());
  s0->apply_left(ta, r0);
  const double w0 = r0.real().trace();
  const double u = ctx.uniform();
  if (u < w0) {
    rho_ = r0 / w0;
    ++ctx.stats.measurements;
    return {0, w0};
  }
  s1->apply_left(rho_, t);
  ta = t.adjoint();
  s1->apply_left(ta, r0);
  const double w1 = r0.real().trace();
  rho_ = r0 / w1;
  ++ctx.stats.measurements;
  return {1, w1};
}

void DmState::remove(int pos) {
  std::vector<int> keep;
  for (int i = 0; i < num_qubits(); ++i)
    if (i != pos) keep.push_back(i);
  Mat red = reduced_dm(keep);
  rho_.swap(red);
  shift_slots_down(*this, pos);
}

void DmState::apply_kraus(const std::vector<Mat>& ks, const std::vector<int>& pos, Context& ctx) {
  Mat acc = Mat::Zero(rho_.rows(), rho_.cols());
  Mat t(rho_.rows(), rho_.cols());
  Mat r(rho_.rows(), rho_.cols());
  for (const Mat& k : ks) {
    auto sp = build_expansion(k, pos, num_qubits());
    sp->apply_left(rho_, t);
    Mat ta = t.adjoint();
    sp->apply_left(ta, r);
    acc += r;
  }
  rho_.swap(acc);
  ++ctx.stats.channels_applied;
  ctx.stats.note_size(num_qubits());
}

Mat DmState::reduced_dm(const std::vector<int>& pos) const {
  const int n = num_qubits();
  const int m = static_cast<int>(pos.size());
  const std::int64_t kdim = std::int64_t{1} << m;
  std::uint64_t kept = 0;
  for (int t = 0; t < m; ++t) kept |= std::uint64_t{1} << (n - 1 - pos[t]);
  std::vector<int> env_shifts;
  for (int b = 0; b < n; ++b)
    if (!(kept & (std::uint64_t{1} << b))) env_shifts.push_back(b);
  std::vector<std::uint64_t> scat(kdim, 0);
  for (std::int64_t j = 0; j < kdim; ++j)
    for (int t = 0; t < m; ++t)
      if ((j >> (m - 1 - t)) & 1) scat[j] |= std::uint64_t{1} << (n - 1 - pos[t]);
  Mat out = Mat::Zero(kdim, kdim);
  const std::int64_t edim = std::int64_t{1} << env_shifts.size();
  for (std::int64_t e = 0; e < edim; ++e) {
    std::uint64_t env = 0;
    for (std::size_t t = 0; t < env_shifts.size(); ++t)
      if ((e >> t) & 1) env |= std::uint64_t{1} << env_shifts[t];
    for (std::int64_t a = 0; a < kdim; ++a)
      for (std::int64_t b = 0; b < kdim; ++b)
        out(a, b) += rho_(env | scat[a], env | scat[b]);
  }
  return out;
}

Vec DmState::to_ket() const {
  const double purity = (rho_ * rho_).real().trace();
  if (std::abs(purity - 1.0) > 1e-9) throw MixedStateToPure();
  Eigen::SelfAdjointEigenSolver<Mat> es(rho_);
  // Dominant eigenvector (eigenvalues ascending).
  return es.eigenvectors().col(rho_.rows() - 1);
}

Mat DmState::to_dm() const { return rho_; }

void DmState::absorb(State& other) {
  auto& o = dynamic_cast<DmState&>(other);
  Mat out = kron(rho_, o.rho_);
  rho_.swap(out);
  append_slots(other);
}

}  // namespace qnet::quant
