// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Stabiliser tableau backend. Rows are generators over (X|Z) bit blocks with
// one sign bit; x=z=1 at a site means a literal Y factor. A cached
// row-echelon form makes runs of deterministic measurements quadratic
// instead of cubic; it is invalidated by gates and random collapses.

#include <bit>
#include <cassert>

#include "qnetsim/quant/backends.hpp"

namespace qnet::quant {

namespace {

// i-exponent (mod 4, as -1/0/+1 per bit) of the per-site phase picked up by
// the Pauli product (first * second), accumulated wordwise.
inline int phase_exponent_word(std::uint64_t x1, std::uint64_t z1, std::uint64_t x2,
                               std::uint64_t z2) {
  const std::uint64_t plus = (x1 & z1 & ~x2 & z2) | (x1 & ~z1 & x2 & z2) | (~x1 & z1 & x2 & ~z2);
  const std::uint64_t minus = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & ~x2 & z2) | (~x1 & z1 & x2 & z2);
  return std::popcount(plus) - std::popcount(minus);
}

}  // namespace

struct StabState::Echelon {
  int words = 0;
  int cols = 0;
  std::vector<std::uint64_t> x, z;
  std::vector<std::uint8_t> sign;
  // Pivot column keys in ascending order (key < cols: X block, else Z block),
  // one per row after full reduction.
  std::vector<int> keys;

  std::uint64_t* xr(int r) { return &x[static_cast<std::size_t>(r) * words]; }
  std::uint64_t* zr(int r) { return &z[static_cast<std::size_t>(r) * words]; }
  const std::uint64_t* xr(int r) const { return &x[static_cast<std::size_t>(r) * words]; }
  const std::uint64_t* zr(int r) const { return &z[static_cast<std::size_t>(r) * words]; }
  bool bit(int r, int key) const {
    const int c = key < cols ? key : key - cols;
    const std::uint64_t* w = key < cols ? xr(r) : zr(r);
    return (w[c >> 6] >> (c & 63)) & 1;
  }
  void mul(int dst, int src) {
    int g = 0;
    for (int w = 0; w < words; ++w) g += phase_exponent_word(xr(dst)[w], zr(dst)[w], xr(src)[w], zr(src)[w]);
    const int total = ((2 * sign[dst] + 2 * sign[src] + g) % 4 + 4) % 4;
    assert(total % 2 == 0);
    sign[dst] = static_cast<std::uint8_t>(total / 2);
    for (int w = 0; w < words; ++w) {
      xr(dst)[w] ^= xr(src)[w];
      zr(dst)[w] ^= zr(src)[w];
    }
  }
};

StabState::StabState(int n) {
  cols_ = n;
  words_ = (n + 63) / 64;
  xbits_.assign(static_cast<std::size_t>(n) * words_, 0);
  zbits_.assign(static_cast<std::size_t>(n) * words_, 0);
  sign_.assign(n, 0);
  for (int i = 0; i < n; ++i) zrow(i)[i >> 6] |= std::uint64_t{1} << (i & 63);
  phys_.resize(n);
  for (int i = 0; i < n; ++i) phys_[i] = i;
  dead_.assign(n, 0);
  slots_.resize(n, nullptr);
}

void StabState::invalidate() { ech_.reset(); }

void StabState::mul_row(int dst, int src) {
  int g = 0;
  for (int w = 0; w < words_; ++w)
    g += phase_exponent_word(xrow(dst)[w], zrow(dst)[w], xrow(src)[w], zrow(src)[w]);
  const int total = ((2 * sign_[dst] + 2 * sign_[src] + g) % 4 + 4) % 4;
  assert(total % 2 == 0);
  sign_[dst] = static_cast<std::uint8_t>(total / 2);
  for (int w = 0; w < words_; ++w) {
    xrow(dst)[w] ^= xrow(src)[w];
    zrow(dst)[w] ^= zrow(src)[w];
  }
}

void StabState::apply_cliff(CliffGate g, int a, int b) {
  auto xb = [&](int r, int c) -> bool { return xbit(r, c); };
  auto zb = [&](int r, int c) -> bool { return zbit(r, c); };
  auto setx = [&](int r, int c, bool v) {
    std::uint64_t m = std::uint64_t{1} << (c & 63);
    if (v) xrow(r)[c >> 6] |= m; else xrow(r)[c >> 6] &= ~m;
  };
  auto setz = [&](int r, int c, bool v) {
    std::uint64_t m = std::uint64_t{1} << (c & 63);
    if (v) zrow(r)[c >> 6] |= m; else zrow(r)[c >> 6] &= ~m;
  };
  switch (g) {
    case CliffGate::H:
      for (int r = 0; r < rows(); ++r) {
        const bool x = xb(r, a), z = zb(r, a);
        sign_[r] ^= static_cast<std::uint8_t>(x && z);
        setx(r, a, z);
        setz(r, a, x);
      }
      break;
    case CliffGate::S:
      for (int r = 0; r < rows(); ++r) {
        const bool x = xb(r, a), z = zb(r, a);
        sign_[r] ^= static_cast<std::uint8_t>(x && z);
        setz(r, a, x != z);
      }
      break;
    case CliffGate::Sdg:
      apply_cliff(CliffGate::S, a);
      apply_cliff(CliffGate::Z, a);
      return;
    case CliffGate::X:
      for (int r = 0; r < rows(); ++r) sign_[r] ^= static_cast<std::uint8_t>(zb(r, a));
      break;
    case CliffGate::Y:
      for (int r = 0; r < rows(); ++r)
        sign_[r] ^= static_cast<std::uint8_t>(xb(r, a) != zb(r, a));
      break;
    case CliffGate::Z:
      for (int r = 0; r < rows(); ++r) sign_[r] ^= static_cast<std::uint8_t>(xb(r, a));
      break;
    case CliffGate::CNOT:
      for (int r = 0; r < rows(); ++r) {
        const bool xc = xb(r, a), zc = zb(r, a), xt = xb(r, b), zt = zb(r, b);
        sign_[r] ^= static_cast<std::uint8_t>(xc && zt && (xt == zc));
        setx(r, b, xt != xc);
        setz(r, a, zc != zt);
      }
      break;
    case CliffGate::CZ:
      apply_cliff(CliffGate::H, b);
      apply_cliff(CliffGate::CNOT, a, b);
      apply_cliff(CliffGate::H, b);
      return;
  }
  invalidate();
}

void StabState::apply(const Operator& op, const std::vector<int>& pos, Context& ctx) {
  if (op.arity() != static_cast<int>(pos.size())) throw ArityMismatch();
  if (!op.is_clifford()) throw NonCliffordOnStabiliser();
  for (const CliffStep& st : op.clifford()) {
    apply_cliff(st.g, phys_[pos[st.a]], st.b >= 0 ? phys_[pos[st.b]] : -1);
  }
  ++ctx.stats.ops_applied;
  ctx.stats.note_size(num_qubits());
}

void StabState::apply_pauli(const PauliString& p, const std::vector<int>& pos) {
  for (std::size_t t = 0; t < p.size(); ++t) {
    const int c = phys_[pos[t]];
    switch (p[t]) {
      case Pauli::I: break;
      case Pauli::X:
        for (int r = 0; r < rows(); ++r) sign_[r] ^= static_cast<std::uint8_t>(zbit(r, c));
        break;
      case Pauli::Y:
        for (int r = 0; r < rows(); ++r)
          sign_[r] ^= static_cast<std::uint8_t>(xbit(r, c) != zbit(r, c));
        break;
      case Pauli::Z:
        for (int r = 0; r < rows(); ++r) sign_[r] ^= static_cast<std::uint8_t>(xbit(r, c));
        break;
    }
  }
  invalidate();
}

const StabState::Echelon& StabState::echelon() {
  if (ech_) return *ech_;
  auto e = std::make_shared<Echelon>();
  e->words = words_;
  e->cols = cols_;
  e->x = xbits_;
  e->z = zbits_;
  e->sign = sign_;
  const int n = rows();
  int rank = 0;
  for (int key = 0; key < 2 * cols_ && rank < n; ++key) {
    int pivot = -1;
    for (int r = rank; r < n; ++r) {
      if (e->bit(r, key)) { pivot = r; break; }
    }
    if (pivot < 0) continue;
    if (pivot != rank) {
      for (int w = 0; w < words_; ++w) {
        std::swap(e->xr(pivot)[w], e->xr(rank)[w]);
        std::swap(e->zr(pivot)[w], e->zr(rank)[w]);
      }
      std::swap(e->sign[pivot], e->sign[rank]);
    }
    for (int r = 0; r < n; ++r) {
      if (r != rank && e->bit(r, key)) e->mul(r, rank);
    }
    e->keys.push_back(key);
    ++rank;
  }
  ech_ = std::move(e);
  return *ech_;
}

MeasureResult StabState::measure(int pos, Context& ctx) {
  const int c = phys_[pos];
  int pivot = -1;
  for (int r = 0; r < rows(); ++r) {
    if (xbit(r, c)) { pivot = r; break; }
  }
  ++ctx.stats.measurements;
  ctx.stats.note_size(num_qubits());
  if (pivot >= 0) {
    // Random outcome: eliminate the anticommuting rows, then replace the
    // pivot generator by +/- Z_c.
    for (int r = pivot + 1; r < rows(); ++r) {
      if (xbit(r, c)) mul_row(r, pivot);
    }
    const int outcome = ctx.uniform() < 0.5 ? 0 : 1;
    for (int w = 0; w < words_; ++w) {
      xrow(pivot)[w] = 0;
      zrow(pivot)[w] = 0;
    }
    zrow(pivot)[c >> 6] |= std::uint64_t{1} << (c & 63);
    sign_[pivot] = static_cast<std::uint8_t>(outcome);
    invalidate();
    return {outcome, 0.5};
  }
  // Deterministic: express Z_c over the echelon basis and accumulate signs.
  const Echelon& e = echelon();
  std::vector<std::uint64_t> tx(words_, 0), tz(words_, 0);
  tz[c >> 6] |= std::uint64_t{1} << (c & 63);
  std::vector<std::uint64_t> ax(words_, 0), az(words_, 0);
  int phase = 0;  // i-exponent, mod 4
  for (std::size_t i = 0; i < e.keys.size(); ++i) {
    const int key = e.keys[i];
    const int cc = key < cols_ ? key : key - cols_;
    const std::uint64_t bit = std::uint64_t{1} << (cc & 63);
    const bool set = key < cols_ ? (tx[cc >> 6] & bit) : (tz[cc >> 6] & bit);
    if (!set) continue;
    int g = 0;
    for (int w = 0; w < words_; ++w) {
      g += phase_exponent_word(ax[w], az[w], e.xr(static_cast<int>(i))[w],
                               e.zr(static_cast<int>(i))[w]);
      ax[w] ^= e.xr(static_cast<int>(i))[w];
      az[w] ^= e.zr(static_cast<int>(i))[w];
      tx[w] ^= e.xr(static_cast<int>(i))[w];
      tz[w] ^= e.zr(static_cast<int>(i))[w];
    }
    phase = ((phase + g + 2 * e.sign[i]) % 4 + 4) % 4;
  }
#ifndef NDEBUG
  for (int w = 0; w < words_; ++w) assert(tx[w] == 0 && tz[w] == 0);
#endif
  assert(phase % 2 == 0);
  return {phase / 2 == 1 ? 1 : 0, 1.0};
}

void StabState::remove(int pos) {
  dead_[phys_[pos]] = 1;
  phys_.erase(phys_.begin() + pos);
  for (int i = pos + 1; i < num_qubits(); ++i) move_slot(i, i - 1);
  pop_slot();
}

void StabState::compact() {
  int d = 0;
  for (std::uint8_t v : dead_) d += v;
  if (d == 0) return;
  // Full reduction with dead columns keyed last; the bottom d rows become
  // literal +/- Z generators on the dead columns and are dropped.
  const int n = rows();
  std::vector<int> keyof(2 * cols_);
  {
    int next = 0;
    for (int c = 0; c < cols_; ++c) if (!dead_[c]) keyof[c] = next++;
    for (int c = 0; c < cols_; ++c) if (!dead_[c]) keyof[cols_ + c] = next++;
    for (int c = 0; c < cols_; ++c) if (dead_[c]) keyof[c] = next++;
    for (int c = 0; c < cols_; ++c) if (dead_[c]) keyof[cols_ + c] = next++;
  }
  std::vector<int> order(2 * cols_);
  for (int k = 0; k < 2 * cols_; ++k) order[keyof[k]] = k;
  auto bit_at = [&](int r, int key) -> bool {
    const int c = key < cols_ ? key : key - cols_;
    return key < cols_ ? xbit(r, c) : zbit(r, c);
  };
  int rank = 0;
  for (int kk = 0; kk < 2 * cols_ && rank < n; ++kk) {
    const int key = order[kk];
    int pivot = -1;
    for (int r = rank; r < n; ++r) {
      if (bit_at(r, key)) { pivot = r; break; }
    }
    if (pivot < 0) continue;
    if (pivot != rank) {
      for (int w = 0; w < words_; ++w) {
        std::swap(xrow(pivot)[w], xrow(rank)[w]);
        std::swap(zrow(pivot)[w], zrow(rank)[w]);
      }
      std::swap(sign_[pivot], sign_[rank]);
    }
    for (int r = 0; r < n; ++r) {
      if (r != rank && bit_at(r, key)) mul_row(r, rank);
    }
    ++rank;
  }
  // Repack live columns and the top n - d rows.
  const int nn = n - d;
  std::vector<int> live;
  for (int c = 0; c < cols_; ++c) if (!dead_[c]) live.push_back(c);
  const int nw = (nn + 63) / 64;
  std::vector<std::uint64_t> nx(static_cast<std::size_t>(nn) * nw, 0),
      nz(static_cast<std::size_t>(nn) * nw, 0);
  std::vector<std::uint8_t> ns(nn);
  for (int r = 0; r < nn; ++r) {
    for (int j = 0; j < nn; ++j) {
      if (xbit(r, live[j])) nx[static_cast<std::size_t>(r) * nw + (j >> 6)] |= std::uint64_t{1} << (j & 63);
      if (zbit(r, live[j])) nz[static_cast<std::size_t>(r) * nw + (j >> 6)] |= std::uint64_t{1} << (j & 63);
    }
    ns[r] = sign_[r];
  }
  cols_ = nn;
  words_ = nw;
  xbits_ = std::move(nx);
  zbits_ = std::move(nz);
  sign_ = std::move(ns);
  dead_.assign(nn, 0);
  phys_.resize(nn);
  for (int i = 0; i < nn; ++i) phys_[i] = i;
  invalidate();
}

void StabState::apply_kraus(const std::vector<Mat>&, const std::vector<int>&, Context&) {
  throw NonPauliChannelOnStabiliser();
}

std::uint64_t StabState::payload_bits() const {
  const std::uint64_t n = num_qubits();
  return n * (2 * n + 1);
}

std::pair<std::string, int> StabState::generator(int row) {
  compact();
  std::string s;
  for (int c = 0; c < cols_; ++c) {
    const bool x = xbit(row, c), z = zbit(row, c);
    s += x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }
  return {s, sign_[row] ? -1 : +1};
}

void StabState::set_from_generators(const std::vector<std::pair<std::string, int>>& gens) {
  const int n = num_qubits();
  if (static_cast<int>(gens.size()) != n) throw NonStabiliserState();
  cols_ = n;
  words_ = (n + 63) / 64;
  xbits_.assign(static_cast<std::size_t>(n) * words_, 0);
  zbits_.assign(static_cast<std::size_t>(n) * words_, 0);
  sign_.assign(n, 0);
  for (int r = 0; r < n; ++r) {
    const auto& [str, sg] = gens[r];
    if (static_cast<int>(str.size()) != n) throw NonStabiliserState();
    for (int c = 0; c < n; ++c) {
      const char ch = str[c];
      if (ch == 'X' || ch == 'Y') xrow(r)[c >> 6] |= std::uint64_t{1} << (c & 63);
      if (ch == 'Z' || ch == 'Y') zrow(r)[c >> 6] |= std::uint64_t{1} << (c & 63);
    }
    sign_[r] = sg < 0 ? 1 : 0;
  }
  dead_.assign(n, 0);
  phys_.resize(n);
  for (int i = 0; i < n; ++i) phys_[i] = i;
  invalidate();
  if (echelon().keys.size() != static_cast<std::size_t>(n)) throw NonStabiliserState();
}

Vec StabState::to_ket() const {
  auto* self = const_cast<StabState*>(this);
  self->compact();
  const int n = num_qubits();
  if (n > 20) throw OutOfRange("stabiliser-to-ket conversion capped at 20 qubits");
  const Echelon& e = self->echelon();
  // Basis seed: satisfy every pure-Z echelon row.
  std::uint64_t seed = 0;
  for (std::size_t i = 0; i < e.keys.size(); ++i) {
    if (e.keys[i] >= n) {
      bool purez = true;
      for (int w = 0; w < words_; ++w)
        if (e.xr(static_cast<int>(i))[w]) { purez = false; break; }
      if (purez && e.sign[i]) seed |= std::uint64_t{1} << (n - 1 - (e.keys[i] - n));
    }
  }
  const std::int64_t dim = std::int64_t{1} << n;
  Vec psi = Vec::Zero(dim);
  psi[static_cast<std::int64_t>(seed)] = 1;
  // Apply (1 + S_r) / 2 for every generator.
  for (int r = 0; r < n; ++r) {
    Vec next = psi;
    for (std::int64_t idx = 0; idx < dim; ++idx) {
      if (psi[idx] == cd(0, 0)) continue;
      std::int64_t out = idx;
      cd phase = sign_[r] ? -1.0 : 1.0;
      for (int c = 0; c < n; ++c) {
        const bool x = xbit(r, c), z = zbit(r, c);
        const std::int64_t m = std::int64_t{1} << (n - 1 - c);
        const bool bit = idx & m;
        if (x) out ^= m;
        if (x && z) phase *= bit ? cd(0, -1) : cd(0, 1);
        else if (z && bit) phase = -phase;
      }
      next[out] += phase * psi[idx];
    }
    psi = next / 2.0;
  }
  const double nrm = psi.norm();
  if (nrm < 1e-12) throw NonStabiliserState();
  return psi / nrm;
}

Mat StabState::to_dm() const {
  Vec k = to_ket();
  return k * k.adjoint();
}

Mat StabState::reduced_dm(const std::vector<int>& pos) const {
  KetState tmp(to_ket());
  return tmp.reduced_dm(pos);
}

void StabState::absorb(State& other) {
  auto& o = dynamic_cast<StabState&>(other);
  compact();
  o.compact();
  const int n1 = num_qubits(), n2 = o.num_qubits();
  const int nn = n1 + n2;
  const int nw = (nn + 63) / 64;
  std::vector<std::uint64_t> nx(static_cast<std::size_t>(nn) * nw, 0),
      nz(static_cast<std::size_t>(nn) * nw, 0);
  std::vector<std::uint8_t> ns(nn, 0);
  auto setbit = [&](std::vector<std::uint64_t>& v, int r, int c) {
    v[static_cast<std::size_t>(r) * nw + (c >> 6)] |= std::uint64_t{1} << (c & 63);
  };
  for (int r = 0; r < n1; ++r) {
    for (int c = 0; c < n1; ++c) {
      if (xbit(r, c)) setbit(nx, r, c);
      if (zbit(r, c)) setbit(nz, r, c);
    }
    ns[r] = sign_[r];
  }
  for (int r = 0; r < n2; ++r) {
    for (int c = 0; c < n2; ++c) {
      if (o.xbit(r, c)) setbit(nx, n1 + r, n1 + c);
      if (o.zbit(r, c)) setbit(nz, n1 + r, n1 + c);
    }
    ns[n1 + r] = o.sign_[r];
  }
  cols_ = nn;
  words_ = nw;
  xbits_ = std::move(nx);
  zbits_ = std::move(nz);
  sign_ = std::move(ns);
  dead_.assign(nn, 0);
  phys_.resize(nn);
  for (int i = 0; i < nn; ++i) phys_[i] = i;
  invalidate();
  append_slots(other);
}

}  // namespace qnet::quant
