// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Graph states with local Cliffords. A state is a simple graph plus one of
// the 24 single-qubit Cliffords (a "vertex operator") per vertex; the dense
// state it denotes is (tensor of vertex operators) applied to the graph
// state of the adjacency. All group tables are generated numerically at
// startup from 2x2 matrices, so no hand-copied constants can drift.

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qnetsim/quant/backends.hpp"

namespace qnet::quant {

namespace {

using M2 = Eigen::Matrix2cd;
using V2 = Eigen::Vector2cd;
using V4 = Eigen::Vector4cd;

M2 pauli2(int p) {
  M2 m;
  switch (p) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cd(0, -1), cd(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Fixes the global phase: first entry with magnitude > 0.5/sqrt(2) is made
// real positive. Every single-qubit Clifford has such an entry.
M2 canon_phase(const M2& m) {
  for (int i = 0; i < 4; ++i) {
    const cd v = m(i / 2, i % 2);
    if (std::abs(v) > 0.35) return m * (std::conj(v) / std::abs(v));
  }
  return m;
}

// Quantizes to a 1e-4 grid; +0.0 addition maps -0.0 to +0.0 so keys of
// numerically equal values always match.
double snap(double x) { return std::round(x * 1e4) / 1e4 + 0.0; }

std::string mat_key(const M2& m) {
  char buf[128];
  std::string out;
  for (int i = 0; i < 4; ++i) {
    const cd v = m(i / 2, i % 2);
    std::snprintf(buf, sizeof(buf), "%.4f,%.4f;", snap(v.real()), snap(v.imag()));
    out += buf;
  }
  return out;
}

// The single-qubit Clifford group modulo phase and all derived lookup
// tables the graph backend needs.
struct C24 {
  std::array<M2, 24> mat;
  int mult[24][24];          // index of mat[a] * mat[b]
  std::array<int, 24> adj;   // index of mat[a]^dagger
  std::array<bool, 24> diag; // diagonal matrix (commutes with CZ)
  int id, hh, ss, sdg, xx, yy, zz;
  int lc_v;  // sqrt(-iX): right-correction on the complemented vertex
  int lc_n;  // sqrt(+iZ): right-correction on its neighbours
  int sq_miz, sq_piz;  // sqrt(-iZ), sqrt(+iZ)
  int sq_miy, sq_piy;  // sqrt(-iY), sqrt(+iY)
  // Word over 'U' (complement at v) / 'V' (complement at a neighbour) whose
  // right-corrections multiply vop v down to the identity.
  std::array<std::string, 24> reduce_word;
  // mat[a]^dagger P mat[a] = conj_sign * pauli(conj_p), P in {X=1,Y=2,Z=3}.
  int conj_p[24][4];
  int conj_s[24][4];
  // CZ resolution table: CZ (Ua x Ub) CZ^e = phase (Ua' x Ub') CZ^e', as an
  // identity on the subspace where each non-diagonal side is restricted to
  // |+> (a non-diagonal vop is only permitted on a vertex with no neighbours
  // outside the operand pair, whose bare state is exactly |+>). Diagonal
  // sides are unrestricted, so external entanglement through them is safe.
  struct PairOut { std::uint8_t e, a, b; };
  PairOut czpair[2][24][24];

  int find(const M2& m) const {
    const std::string k = mat_key(canon_phase(m));
    for (int i = 0; i < 24; ++i)
      if (mat_key(mat[i]) == k) return i;
    throw std::logic_error("clifford lookup failed");
  }

  C24();
};

M2 rot(const M2& p, double theta) {
  return std::cos(theta / 2) * M2::Identity() - cd(0, 1) * std::sin(theta / 2) * p;
}

C24::C24() {
  const double isq = 1.0 / std::sqrt(2.0);
  M2 h_m, s_m;
  h_m << isq, isq, isq, -isq;
  s_m << 1, 0, 0, cd(0, 1);

  // BFS over products of H and S, canonicalized modulo phase.
  std::vector<M2> elems{canon_phase(M2::Identity())};
  std::map<std::string, int> index{{mat_key(elems[0]), 0}};
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const M2* g : {&h_m, &s_m}) {
      const M2 m = canon_phase(elems[i] * (*g));
      if (index.emplace(mat_key(m), static_cast<int>(elems.size())).second) elems.push_back(m);
    }
  }
  if (elems.size() != 24) throw std::logic_error("clifford enumeration failed");
  for (int i = 0; i < 24; ++i) mat[i] = elems[i];

  for (int a = 0; a < 24; ++a)
    for (int b = 0; b < 24; ++b) mult[a][b] = find(mat[a] * mat[b]);
  for (int a = 0; a < 24; ++a) {
    adj[a] = find(mat[a].adjoint());
    diag[a] = std::abs(mat[a](0, 1)) < 1e-9 && std::abs(mat[a](1, 0)) < 1e-9;
  }
  id = find(M2::Identity());
  hh = find(h_m);
  ss = find(s_m);
  sdg = find(s_m.adjoint());
  xx = find(pauli2(1));
  yy = find(pauli2(2));
  zz = find(pauli2(3));
  lc_v = find(rot(pauli2(1), M_PI / 2));    // sqrt(-iX)
  sq_miz = find(rot(pauli2(3), M_PI / 2));  // sqrt(-iZ)
  sq_piz = find(rot(pauli2(3), -M_PI / 2)); // sqrt(+iZ)
  lc_n = sq_piz;
  sq_miy = find(rot(pauli2(2), M_PI / 2));
  sq_piy = find(rot(pauli2(2), -M_PI / 2));

  // Shortest words over right-multiplication by {lc_v, lc_n}; reduce_word[a]
  // is the word for adj[a], so vop * word == identity modulo phase.
  {
    std::array<std::string, 24> word;
    std::array<bool, 24> seen{};
    word[id] = "";
    seen[id] = true;
    std::vector<int> frontier{id};
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int g : frontier) {
        const int gu = mult[g][lc_v], gv = mult[g][lc_n];
        if (!seen[gu]) { seen[gu] = true; word[gu] = word[g] + 'U'; next.push_back(gu); }
        if (!seen[gv]) { seen[gv] = true; word[gv] = word[g] + 'V'; next.push_back(gv); }
      }
      frontier = std::move(next);
    }
    for (int a = 0; a < 24; ++a) reduce_word[a] = word[adj[a]];
  }

  for (int a = 0; a < 24; ++a) {
    conj_p[a][0] = 0;
    conj_s[a][0] = 1;
    for (int p = 1; p < 4; ++p) {
      const M2 m = mat[a].adjoint() * pauli2(p) * mat[a];
      bool done = false;
      for (int q = 1; q < 4 && !done; ++q) {
        for (int sg : {1, -1}) {
          if ((m - static_cast<double>(sg) * pauli2(q)).norm() < 1e-9) {
            conj_p[a][p] = q;
            conj_s[a][p] = sg;
            done = true;
            break;
          }
        }
      }
      if (!done) throw std::logic_error("pauli conjugation failed");
    }
  }

  // CZ table. Each candidate operator U(a,b) * CZ^e is precomputed; for an
  // entry (e, a, b) the match requirement depends on which sides are
  // diagonal: a non-diagonal side is contracted with |+>, a diagonal side
  // stays free, and the comparison is proportionality of the restricted
  // matrices under a single global phase.
  {
    Eigen::Matrix4cd cz4 = Eigen::Matrix4cd::Identity();
    cz4(3, 3) = -1;
    auto u4 = [&](int a, int b) {
      Eigen::Matrix4cd u;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int kk = 0; kk < 2; ++kk)
            for (int l = 0; l < 2; ++l)
              u(i * 2 + kk, j * 2 + l) = mat[a](i, j) * mat[b](kk, l);
      return u;
    };
    std::vector<Eigen::Matrix4cd> cand(2 * 24 * 24);
    auto cid = [](int e, int a, int b) { return (e * 24 + a) * 24 + b; };
    for (int e = 0; e < 2; ++e)
      for (int a = 0; a < 24; ++a)
        for (int b = 0; b < 24; ++b)
          cand[cid(e, a, b)] = e ? Eigen::Matrix4cd(u4(a, b) * cz4) : u4(a, b);

    // Restriction: contract the flagged sides with |+> (fix_a, fix_b).
    auto restrict4 = [&](const Eigen::Matrix4cd& m, bool fix_a, bool fix_b) {
      Eigen::MatrixXcd r = m;
      if (fix_b) {
        Eigen::MatrixXcd r2(4, r.cols() / 2);
        for (int c = 0; c < r2.cols(); ++c)
          r2.col(c) = (r.col(2 * c) + r.col(2 * c + 1)) * isq;
        r = r2;
      }
      if (fix_a) {
        Eigen::MatrixXcd r2(4, r.cols() / 2);
        // Column order after the b-contraction: a-index is the high bit.
        for (int c = 0; c < r2.cols(); ++c)
          r2.col(c) = (r.col(c) + r.col(c + r.cols() / 2)) * isq;
        r = r2;
      }
      return r;
    };
    auto proportional = [](const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& q) {
      int pr = 0, pc = 0;
      double best = -1;
      for (int i = 0; i < p.rows(); ++i)
        for (int j = 0; j < p.cols(); ++j)
          if (std::abs(p(i, j)) > best) { best = std::abs(p(i, j)); pr = i; pc = j; }
      if (std::abs(q(pr, pc)) < 1e-9) return false;
      const cd ph = p(pr, pc) / q(pr, pc);
      if (std::abs(std::abs(ph) - 1.0) > 1e-9) return false;
      return (p - ph * q).cwiseAbs().maxCoeff() < 1e-9;
    };
    for (int e = 0; e < 2; ++e)
      for (int a = 0; a < 24; ++a)
        for (int b = 0; b < 24; ++b) {
          const bool fix_a = !diag[a], fix_b = !diag[b];
          const Eigen::MatrixXcd lhs = restrict4(cz4 * cand[cid(e, a, b)], fix_a, fix_b);
          bool found = false;
          for (int e2 = 0; e2 < 2 && !found; ++e2)
            for (int a2 = 0; a2 < 24 && !found; ++a2)
              for (int b2 = 0; b2 < 24 && !found; ++b2) {
                if (proportional(lhs, restrict4(cand[cid(e2, a2, b2)], fix_a, fix_b))) {
                  czpair[e][a][b] = {static_cast<std::uint8_t>(e2),
                                     static_cast<std::uint8_t>(a2),
                                     static_cast<std::uint8_t>(b2)};
                  found = true;
                }
              }
          if (!found) throw std::logic_error("cz table gap");
        }
  }
}

const C24& c24() {
  static const C24 t;
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------

GslcState::GslcState(int n) : adj_(n), vop_(n, c24().hh) {
  // Fresh vertices are |0> = H|+>.
  slots_.assign(n, nullptr);
}

bool GslcState::has_edge(int a, int b) const {
  const auto& v = adj_[a];
  return std::binary_search(v.begin(), v.end(), b);
}

void GslcState::toggle_edge(int a, int b) {
  auto flip = [](std::vector<int>& lst, int x) {
    const auto it = std::lower_bound(lst.begin(), lst.end(), x);
    if (it != lst.end() && *it == x) lst.erase(it);
    else lst.insert(it, x);
  };
  flip(adj_[a], b);
  flip(adj_[b], a);
}

namespace {

// Toggles all edges between distinct pairs of `vs` (assumed sorted, unique).
void complement_within(GslcState& st, const std::vector<int>& vs) {
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) st.toggle_edge(vs[i], vs[j]);
}

}  // namespace

void GslcState::local_complement(int v) {
  const C24& t = c24();
  const std::vector<int> nb = adj_[v];  // copy: edges change below
  complement_within(*this, nb);
  vop_[v] = t.mult[vop_[v]][t.lc_v];
  for (int w : nb) vop_[w] = t.mult[vop_[w]][t.lc_n];
}

void GslcState::reduce_vop(int v, int avoid) {
  const C24& t = c24();
  int vb = -1;
  for (int w : adj_[v])
    if (w != avoid) { vb = w; break; }
  if (vb < 0) vb = adj_[v].empty() ? -1 : adj_[v][0];
  if (vb < 0) return;  // isolated: nothing to complement against
  for (char c : t.reduce_word[vop_[v]]) {
    if (c == 'U') local_complement(v);
    else local_complement(vb);
  }
  assert(vop_[v] == t.id);
}

void GslcState::apply_cliff(CliffGate g, int a, int b) {
  const C24& t = c24();
  switch (g) {
    case CliffGate::H: vop_[a] = t.mult[t.hh][vop_[a]]; return;
    case CliffGate::S: vop_[a] = t.mult[t.ss][vop_[a]]; return;
    case CliffGate::Sdg: vop_[a] = t.mult[t.sdg][vop_[a]]; return;
    case CliffGate::X: vop_[a] = t.mult[t.xx][vop_[a]]; return;
    case CliffGate::Y: vop_[a] = t.mult[t.yy][vop_[a]]; return;
    case CliffGate::Z: vop_[a] = t.mult[t.zz][vop_[a]]; return;
    case CliffGate::CNOT:
      apply_cliff(CliffGate::H, b);
      apply_cliff(CliffGate::CZ, a, b);
      apply_cliff(CliffGate::H, b);
      return;
    case CliffGate::CZ: break;
  }

  // CZ. Reduce vertex operators until both commute with CZ or the pair is
  // locally solvable. Ordering: reductions through a non-operand partner
  // never make the other operand's vop non-diagonal, so each branch below
  // strictly advances toward one of the terminal cases.
  const int v1 = a, v2 = b;
  auto others = [&](int v, int w) {
    for (int u : adj_[v])
      if (u != w) return true;
    return false;
  };
  for (int guard = 0;; ++guard) {
    if (guard > 40) throw std::logic_error("cz reduction did not converge");
    // The table applies once every non-diagonal operand has no non-operand
    // neighbours (its bare vertex state is then exactly |+>).
    const bool ok1 = t.diag[vop_[v1]] || !others(v1, v2);
    const bool ok2 = t.diag[vop_[v2]] || !others(v2, v1);
    if (ok1 && ok2) {
      const int e = has_edge(v1, v2) ? 1 : 0;
      const auto out = t.czpair[e][vop_[v1]][vop_[v2]];
      if (static_cast<int>(out.e) != e) toggle_edge(v1, v2);
      vop_[v1] = out.a;
      vop_[v2] = out.b;
      return;
    }
    if (!ok1) reduce_vop(v1, v2);
    else reduce_vop(v2, v1);
  }
}

void GslcState::apply(const Operator& op, const std::vector<int>& pos, Context& ctx) {
  (void)ctx;
  if (!op.is_clifford()) throw NonCliffordOnStabiliser(op.key());
  if (static_cast<int>(pos.size()) != op.arity()) throw ArityMismatch(op.key());
  for (const CliffStep& st : op.clifford())
    apply_cliff(st.g, pos[st.a], st.b >= 0 ? pos[st.b] : -1);
}

void GslcState::apply_pauli(const PauliString& p, const std::vector<int>& pos) {
  const C24& t = c24();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const int v = pos[i];
    switch (p[i]) {
      case Pauli::I: break;
      case Pauli::X: vop_[v] = t.mult[t.xx][vop_[v]]; break;
      case Pauli::Y: vop_[v] = t.mult[t.yy][vop_[v]]; break;
      case Pauli::Z: vop_[v] = t.mult[t.zz][vop_[v]]; break;
    }
  }
}

MeasureResult GslcState::measure(int pos, Context& ctx) {
  const C24& t = c24();
  const int v = pos;
  // A physical Z measurement is a measurement of sgn * P on the bare graph
  // state, where vop^dagger Z vop = sgn * P.
  const int p = t.conj_p[vop_[v]][3];
  const int sgn = t.conj_s[vop_[v]][3];
  const std::vector<int> nv = adj_[v];

  int r;           // bare-graph outcome bit
  double prob = 0.5;
  if (p == 1 && nv.empty()) {
    r = 0;  // X on an isolated |+>: deterministic
    prob = 1.0;
  } else {
    r = ctx.uniform() < 0.5 ? 0 : 1;
  }

  if (p == 3) {
    // Z: drop v's edges; neighbours pick up Z on outcome 1.
    for (int w : nv) toggle_edge(v, w);
    if (r == 1)
      for (int w : nv) vop_[w] = t.mult[vop_[w]][t.zz];
    vop_[v] = t.mult[vop_[v]][r == 0 ? t.hh : t.mult[t.xx][t.hh]];
  } else if (p == 2) {
    // Y: complement within N(v), drop v's edges, sqrt(-+iZ) on neighbours.
    complement_within(*this, nv);
    for (int w : nv) toggle_edge(v, w);
    const int corr = r == 0 ? t.sq_miz : t.sq_piz;
    for (int w : nv) vop_[w] = t.mult[vop_[w]][corr];
    vop_[v] = t.mult[vop_[v]][r == 0 ? t.ss : t.sdg];
  } else if (!nv.empty()) {
    // X with a special neighbour b0. Graph update: complement about b0,
    // about v, delete v, complement about b0 again; neighbourhoods are
    // re-read at each step since earlier complements change them.
    const int b0 = nv[0];
    const std::vector<int> nb = adj_[b0];
    complement_within(*this, nb);
    complement_within(*this, adj_[v]);
    {
      const std::vector<int> cur = adj_[v];
      for (int w : cur) toggle_edge(v, w);
    }
    complement_within(*this, adj_[b0]);
    // Corrections use neighbourhoods of the original graph.
    std::vector<int> zs;
    if (r == 0) {
      for (int w : nv)
        if (w != b0 && !std::binary_search(nb.begin(), nb.end(), w)) zs.push_back(w);
      vop_[b0] = t.mult[vop_[b0]][t.sq_piy];
    } else {
      for (int w : nb)
        if (w != v && !std::binary_search(nv.begin(), nv.end(), w)) zs.push_back(w);
      vop_[b0] = t.mult[vop_[b0]][t.sq_miy];
    }
    for (int w : zs) vop_[w] = t.mult[vop_[w]][t.zz];
    vop_[v] = t.mult[vop_[v]][r == 0 ? t.id : t.zz];
  } else {
    // X on an isolated |+>, deterministic r = 0: vop unchanged.
  }
  assert(adj_[v].empty());

  const int outcome = sgn < 0 ? 1 - r : r;
  return {outcome, prob};
}

void GslcState::remove(int pos) {
  if (!adj_[pos].empty())
    throw std::logic_error("graph vertex removed while still entangled");
  adj_.erase(adj_.begin() + pos);
  vop_.erase(vop_.begin() + pos);
  for (auto& lst : adj_)
    for (int& w : lst)
      if (w > pos) --w;
  const int n = num_qubits();
  for (int p = pos + 1; p < n; ++p) move_slot(p, p - 1);
  pop_slot();
}

void GslcState::apply_kraus(const std::vector<Mat>&, const std::vector<int>&, Context&) {
  throw NonPauliChannelOnStabiliser("graph backend accepts only Pauli mixtures");
}

void GslcState::absorb(State& other) {
  auto& o = dynamic_cast<GslcState&>(other);
  const int off = num_qubits();
  for (auto lst : o.adj_) {
    for (int& w : lst) w += off;
    adj_.push_back(std::move(lst));
  }
  vop_.insert(vop_.end(), o.vop_.begin(), o.vop_.end());
  append_slots(o);
  o.adj_.clear();
  o.vop_.clear();
}

std::vector<std::pair<std::string, int>> GslcState::stabiliser_generators() const {
  const C24& t = c24();
  const int n = num_qubits();
  std::vector<std::pair<std::string, int>> gens;
  gens.reserve(n);
  for (int v = 0; v < n; ++v) {
    // Bare graph stabiliser X_v Z_{N(v)} conjugated by the vertex operators:
    // U P U^dagger per qubit.
    std::string s(n, 'I');
    int sign = 1;
    auto put = [&](int w, int p) {
      const int u = t.adj[vop_[w]];
      sign *= t.conj_s[u][p];
      s[w] = "IXYZ"[t.conj_p[u][p]];
    };
    put(v, 1);
    for (int w : adj_[v]) put(w, 3);
    gens.emplace_back(std::move(s), sign);
  }
  return gens;
}

std::shared_ptr<GslcState> GslcState::from_graph(
    std::vector<std::vector<int>> adj, const std::vector<std::vector<CliffGate>>& applied) {
  const C24& t = c24();
  auto gate_index = [&](CliffGate g) {
    switch (g) {
      case CliffGate::H: return t.hh;
      case CliffGate::S: return t.ss;
      case CliffGate::Sdg: return t.sdg;
      case CliffGate::X: return t.xx;
      case CliffGate::Y: return t.yy;
      case CliffGate::Z: return t.zz;
      default: throw std::logic_error("two-qubit gate in a vertex-operator word");
    }
  };
  const int n = static_cast<int>(adj.size());
  auto st = std::make_shared<GslcState>(n);
  st->adj_ = std::move(adj);
  for (int i = 0; i < n; ++i) {
    int u = t.id;
    for (CliffGate g : applied[i]) u = t.mult[gate_index(g)][u];
    st->vop_[i] = t.adj[u];
  }
  return st;
}

namespace {

StabState gslc_to_stab(const GslcState& st) {
  StabState out(st.num_qubits());
  out.set_from_generators(st.stabiliser_generators());
  return out;
}

}  // namespace

Mat GslcState::reduced_dm(const std::vector<int>& pos) const {
  StabState s = gslc_to_stab(*this);
  return s.reduced_dm(pos);
}

Vec GslcState::to_ket() const {
  StabState s = gslc_to_stab(*this);
  return s.to_ket();
}

Mat GslcState::to_dm() const {
  StabState s = gslc_to_stab(*this);
  return s.to_dm();
}

}  // namespace qnet::quant
