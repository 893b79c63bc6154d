// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnetsim/quant/convert.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "qnetsim/quant/backends.hpp"

namespace qnet::quant {

namespace {

// ---------------------------------------------------------------------------
// KET -> stabiliser generators.
//
// A stabiliser state vector has support on an affine subspace c + span(B)
// with amplitudes of equal magnitude and phases in {1, i, -1, -i}. X-type
// generators move along the basis vectors of B; Z-type generators pin the
// affine constraints. Every produced generator is verified directly against
// the vector, so a wrong derivation cannot slip through.

constexpr double kTol = 1e-9;

int phase_quarter(cd r) {
  // r must be a fourth root of unity (within tolerance).
  if (std::abs(r - cd(1, 0)) < 1e-6) return 0;
  if (std::abs(r - cd(0, 1)) < 1e-6) return 1;
  if (std::abs(r + cd(1, 0)) < 1e-6) return 2;
  if (std::abs(r + cd(0, 1)) < 1e-6) return 3;
  throw NonStabiliserState();
}

// Applies the literal Pauli string (x mask, z mask, 'Y' = iXZ) to psi and
// returns the eigenvalue in {+1, -1}; throws if psi is not an eigenvector.
int eigen_sign(const Vec& psi, std::uint64_t xm, std::uint64_t zm, int n) {
  const std::int64_t dim = psi.size();
  // Bit b of the index corresponds to qubit n-1-b (qubit 0 is the
  // high-order bit, matching the dense backends).
  int ys = 0;
  for (int b = 0; b < n; ++b)
    if ((xm >> b) & 1 && (zm >> b) & 1) ++ys;
  const cd ypref = std::pow(cd(0, 1), ys);
  int sign = 0;
  for (std::int64_t i = 0; i < dim; ++i) {
    if (std::abs(psi[i]) < kTol) continue;
    const std::int64_t j = i ^ static_cast<std::int64_t>(xm);
    // (P psi)(j) = i^{#Y} (-1)^{z . i} psi(i); eigenvalue = (P psi)(j) / psi(j).
    cd out = ypref * psi[i];
    if (__builtin_popcountll(static_cast<std::uint64_t>(i) & zm) & 1) out = -out;
    if (std::abs(psi[j]) < kTol) throw NonStabiliserState();
    const cd r = out / psi[j];
    int s;
    if (std::abs(r - cd(1, 0)) < 1e-6) s = 1;
    else if (std::abs(r + cd(1, 0)) < 1e-6) s = -1;
    else throw NonStabiliserState();
    if (sign == 0) sign = s;
    else if (sign != s) throw NonStabiliserState();
  }
  if (sign == 0) throw NonStabiliserState();
  return sign;
}

std::string mask_string(std::uint64_t xm, std::uint64_t zm, int n) {
  std::string s(n, 'I');
  for (int b = 0; b < n; ++b) {
    const bool x = (xm >> b) & 1, z = (zm >> b) & 1;
    // Bit b is qubit n-1-b.
    s[n - 1 - b] = x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }
  return s;
}

}  // namespace

std::vector<std::pair<std::string, int>> ket_stabiliser_generators(const Vec& psi) {
  const std::int64_t dim = psi.size();
  int n = 0;
  while ((std::int64_t{1} << n) < dim) ++n;
  if ((std::int64_t{1} << n) != dim || n > 24) throw NonStabiliserState();

  std::vector<std::uint64_t> support;
  for (std::int64_t i = 0; i < dim; ++i)
    if (std::abs(psi[i]) > kTol) support.push_back(static_cast<std::uint64_t>(i));
  if (support.empty()) throw NonStabiliserState();
  const double mag = std::abs(psi[static_cast<std::int64_t>(support[0])]);
  for (auto s : support)
    if (std::abs(std::abs(psi[static_cast<std::int64_t>(s)]) - mag) > 1e-7)
      throw NonStabiliserState();

  const std::uint64_t c = support[0];
  // F2 basis of the linear part of the support.
  std::vector<std::uint64_t> basis;
  for (auto s : support) {
    std::uint64_t d = s ^ c;
    for (auto b : basis) d = std::min(d, d ^ b);
    if (d) {
      basis.push_back(d);
      std::sort(basis.rbegin(), basis.rend());
    }
  }
  const int k = static_cast<int>(basis.size());
  if (support.size() != (std::uint64_t{1} << k)) throw NonStabiliserState();

  auto amp = [&](std::uint64_t x) { return psi[static_cast<std::int64_t>(x)]; };
  std::vector<std::pair<std::string, int>> gens;

  // X-type: for each basis vector b_j find z-mask a_j with
  // psi(x + b_j)/psi(x) = i^m (-1)^{a_j . x} over the support.
  for (int j = 0; j < k; ++j) {
    const std::uint64_t bj = basis[j];
    const int m0 = phase_quarter(amp(c ^ bj) / amp(c));
    std::vector<int> alpha(k);
    for (int i = 0; i < k; ++i) {
      const int mi = phase_quarter(amp(c ^ basis[i] ^ bj) / amp(c ^ basis[i]));
      const int d = (mi - m0 + 4) % 4;
      if (d & 1) throw NonStabiliserState();
      alpha[i] = d >> 1;
    }
    // Solve a . basis[i] = alpha[i] over F2 (n unknowns, k equations).
    std::uint64_t a = 0;
    {
      std::vector<std::uint64_t> r2(basis);
      std::vector<int> b2(alpha);
      std::vector<int> pivot(k, -1);
      for (int i = 0; i < k; ++i) {
        int pc = -1;
        for (int bit = n - 1; bit >= 0; --bit) {
          if ((r2[i] >> bit) & 1) { pc = bit; break; }
        }
        if (pc < 0) {
          if (b2[i]) throw NonStabiliserState();
          continue;
        }
        pivot[i] = pc;
        for (int i2 = 0; i2 < k; ++i2) {
          if (i2 != i && ((r2[i2] >> pc) & 1)) {
            r2[i2] ^= r2[i];
            b2[i2] ^= b2[i];
          }
        }
      }
      for (int i = 0; i < k; ++i)
        if (pivot[i] >= 0 && b2[i]) a |= std::uint64_t{1} << pivot[i];
    }
    const int sg = eigen_sign(psi, bj, a, n);
    gens.emplace_back(mask_string(bj, a, n), sg);
  }

  // Z-type: a basis of {a : a . b_i = 0 for all i}.
  {
    // Row-echelon of basis to find pivot bits.
    std::vector<std::uint64_t> r2(basis);
    std::vector<int> pivots;
    for (int i = 0; i < k; ++i) {
      int pc = -1;
      for (int bit = n - 1; bit >= 0; --bit)
        if ((r2[i] >> bit) & 1) { pc = bit; break; }
      for (int i2 = 0; i2 < k; ++i2)
        if (i2 != i && pc >= 0 && ((r2[i2] >> pc) & 1)) r2[i2] ^= r2[i];
      if (pc >= 0) pivots.push_back(pc);
    }
    std::uint64_t pivmask = 0;
    for (int p : pivots) pivmask |= std::uint64_t{1} << p;
    for (int bit = 0; bit < n; ++bit) {
      if ((pivmask >> bit) & 1) continue;
      // Free bit: null-space vector with 1 at `bit`, adjusted on pivots.
      std::uint64_t a = std::uint64_t{1} << bit;
      for (std::size_t i = 0; i < r2.size(); ++i) {
        if (!r2[i]) continue;
        if (__builtin_popcountll(r2[i] & a) & 1) {
          int pc = -1;
          for (int b2 = n - 1; b2 >= 0; --b2)
            if ((r2[i] >> b2) & 1) { pc = b2; break; }
          a ^= std::uint64_t{1} << pc;
        }
      }
      const int sg = eigen_sign(psi, 0, a, n);
      gens.emplace_back(mask_string(0, a, n), sg);
    }
  }

  if (static_cast<int>(gens.size()) != n) throw NonStabiliserState();
  return gens;
}

namespace {

// ---------------------------------------------------------------------------
// Tableau -> graph-with-vops. Dense boolean tableau with exact sign
// tracking; the local gates applied to reach graph form become (adjoints of)
// the vertex operators.

struct DenseTableau {
  int n;
  std::vector<std::vector<std::uint8_t>> x, z;  // n rows * n cols
  std::vector<std::uint8_t> sign;               // 1 = negative
  std::vector<std::vector<CliffGate>> word;     // gates applied, per qubit

  explicit DenseTableau(const std::vector<std::pair<std::string, int>>& gens) {
    n = static_cast<int>(gens.size());
    x.assign(n, std::vector<std::uint8_t>(n, 0));
    z.assign(n, std::vector<std::uint8_t>(n, 0));
    sign.assign(n, 0);
    word.resize(n);
    for (int r = 0; r < n; ++r) {
      const auto& [s, sg] = gens[r];
      for (int c = 0; c < n; ++c) {
        if (s[c] == 'X' || s[c] == 'Y') x[r][c] = 1;
        if (s[c] == 'Z' || s[c] == 'Y') z[r][c] = 1;
      }
      sign[r] = sg < 0 ? 1 : 0;
    }
  }

  // row dst *= row src, with the i-exponent phase of the literal Pauli
  // product ('Y' = iXZ convention).
  void mul_row(int dst, int src) {
    int g = 0;
    for (int c = 0; c < n; ++c) {
      const int x1 = x[src][c], z1 = z[src][c], x2 = x[dst][c], z2 = z[dst][c];
      if (x1 & z1 & ~x2 & z2) ++g;
      else if (x1 & ~z1 & x2 & z2) ++g;
      else if (~x1 & z1 & x2 & ~z2) ++g;
      else if (x1 & z1 & x2 & ~z2) --g;
      else if (x1 & ~z1 & ~x2 & z2) --g;
      else if (~x1 & z1 & x2 & z2) --g;
      x[dst][c] ^= x[src][c];
      z[dst][c] ^= z[src][c];
    }
    const int total = ((2 * sign[dst] + 2 * sign[src] + g) % 4 + 4) % 4;
    if (total & 1) throw std::logic_error("anticommuting row product");
    sign[dst] = static_cast<std::uint8_t>(total / 2);
  }

  void swap_rows(int a, int b) {
    std::swap(x[a], x[b]);
    std::swap(z[a], z[b]);
    std::swap(sign[a], sign[b]);
  }

  void gate_h(int c) {
    for (int r = 0; r < n; ++r) {
      sign[r] ^= x[r][c] & z[r][c];
      std::swap(x[r][c], z[r][c]);
    }
    word[c].push_back(CliffGate::H);
  }
  void gate_s(int c) {
    for (int r = 0; r < n; ++r) {
      sign[r] ^= x[r][c] & z[r][c];
      z[r][c] ^= x[r][c];
    }
    word[c].push_back(CliffGate::S);
  }
  void gate_z(int c) {
    for (int r = 0; r < n; ++r) sign[r] ^= x[r][c];
    word[c].push_back(CliffGate::Z);
  }
};

std::shared_ptr<GslcState> generators_to_gslc(
    const std::vector<std::pair<std::string, int>>& gens) {
  DenseTableau t(gens);
  const int n = t.n;

  // Pass 1: X-block rank profile; H on free columns makes it invertible.
  {
    std::vector<std::vector<std::uint8_t>> xc = t.x;
    std::vector<bool> is_pivot(n, false);
    int rank = 0;
    for (int c = 0; c < n && rank < n; ++c) {
      int pr = -1;
      for (int r = rank; r < n; ++r)
        if (xc[r][c]) { pr = r; break; }
      if (pr < 0) continue;
      std::swap(xc[pr], xc[rank]);
      for (int r = 0; r < n; ++r)
        if (r != rank && xc[r][c])
          for (int c2 = 0; c2 < n; ++c2) xc[r][c2] ^= xc[rank][c2];
      is_pivot[c] = true;
      ++rank;
    }
    for (int c = 0; c < n; ++c)
      if (!is_pivot[c]) t.gate_h(c);
  }

  // Pass 2: row-reduce the (now invertible) X block to the identity.
  for (int c = 0; c < n; ++c) {
    int pr = -1;
    for (int r = c; r < n; ++r)
      if (t.x[r][c]) { pr = r; break; }
    if (pr < 0) throw NonStabiliserState();
    t.swap_rows(pr, c);
    for (int r = 0; r < n; ++r)
      if (r != c && t.x[r][c]) t.mul_row(r, c);
  }

  // Z block is now symmetric (rows commute); clear the diagonal with S and
  // the signs with Z.
  for (int c = 0; c < n; ++c)
    if (t.z[c][c]) t.gate_s(c);
  for (int r = 0; r < n; ++r)
    if (t.sign[r]) t.gate_z(r);

  std::vector<std::vector<int>> adj(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (t.z[r][c]) {
        if (!t.z[c][r] || r == c) throw NonStabiliserState();
        adj[r].push_back(c);
      }
  return GslcState::from_graph(std::move(adj), t.word);
}

std::vector<std::pair<std::string, int>> state_generators(const State& s) {
  if (s.formalism() == Formalism::STAB) {
    // generator() compacts, which mutates lazily-removed columns only.
    auto& st = const_cast<StabState&>(dynamic_cast<const StabState&>(s));
    std::vector<std::pair<std::string, int>> gens;
    for (int r = 0; r < st.num_qubits(); ++r) gens.push_back(st.generator(r));
    return gens;
  }
  if (s.formalism() == Formalism::GSLC)
    return dynamic_cast<const GslcState&>(s).stabiliser_generators();
  return ket_stabiliser_generators(s.to_ket());
}

}  // namespace

StatePtr convert_state(const State& s, Formalism target) {
  switch (target) {
    case Formalism::KET:
      return std::make_shared<KetState>(s.to_ket());
    case Formalism::DM:
      return std::make_shared<DmState>(s.to_dm());
    case Formalism::STAB: {
      auto out = std::make_shared<StabState>(s.num_qubits());
      out->set_from_generators(state_generators(s));
      return out;
    }
    case Formalism::GSLC:
      return generators_to_gslc(state_generators(s));
  }
  throw UnsupportedFormalism("unknown conversion target");
}

}  // namespace qnet::quant
