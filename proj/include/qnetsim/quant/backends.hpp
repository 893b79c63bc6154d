// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Concrete state backends. Most callers should go through api.hpp; the
// classes are exposed for conversion and tests.

#pragma once

#include <array>
#include <cstdint>

#include "qnetsim/quant/state.hpp"

namespace qnet::quant {

// Dense amplitude vector, qubit 0 = most significant index bit.
class KetState final : public State {
 public:
  explicit KetState(int n);
  explicit KetState(Vec amp);

  Formalism formalism() const override { return Formalism::KET; }
  const Vec& amp() const { return amp_; }
  Vec& amp() { return amp_; }

  void apply(const Operator& op, const std::vector<int>& pos, Context& ctx) override;
  void apply_pauli(const PauliString& p, const std::vector<int>& pos) override;
  MeasureResult measure(int pos, Context& ctx) override;
  MeasureResult measure_kraus_pair(const Mat& m0, const Mat& m1, int pos, Context& ctx) override;
  void remove(int pos) override;
  void apply_kraus(const std::vector<Mat>& ks, const std::vector<int>& pos, Context& ctx) override;
  Mat reduced_dm(const std::vector<int>& pos) const override;
  Vec to_ket() const override;
  Mat to_dm() const override;
  void absorb(State& other) override;

 private:
  int shift(int pos) const { return num_qubits() - 1 - pos; }
  Vec amp_;
};

// Dense density matrix.
class DmState final : public State {
 public:
  explicit DmState(int n);
  explicit DmState(Mat rho);

  Formalism formalism() const override { return Formalism::DM; }
  const Mat& rho() const { return rho_; }
  Mat& rho() { return rho_; }

  void apply(const Operator& op, const std::vector<int>& pos, Context& ctx) override;
  void apply_pauli(const PauliString& p, const std::vector<int>& pos) override;
  MeasureResult measure(int pos, Context& ctx) override;
  MeasureResult measure_kraus_pair(const Mat& m0, const Mat& m1, int pos, Context& ctx) override;
  void remove(int pos) override;
  void apply_kraus(const std::vector<Mat>& ks, const std::vector<int>& pos, Context& ctx) override;
  Mat reduced_dm(const std::vector<int>& pos) const override;
  Vec to_ket() const override;
  Mat to_dm() const override;
  void absorb(State& other) override;

 private:
  int shift(int pos) const { return num_qubits() - 1 - pos; }
  Mat rho_;
};

// Bit-packed stabiliser tableau: n generator rows of (X|Z) bits plus a sign
// bit each; no destabiliser rows are stored. Collapsed-and-split columns are
// removed lazily so runs of measurements stay cheap.
class StabState final : public State {
 public:
  explicit StabState(int n);

  Formalism formalism() const override { return Formalism::STAB; }

  void apply(const Operator& op, const std::vector<int>& pos, Context& ctx) override;
  void apply_pauli(const PauliString& p, const std::vector<int>& pos) override;
  MeasureResult measure(int pos, Context& ctx) override;
  void remove(int pos) override;
  void apply_kraus(const std::vector<Mat>& ks, const std::vector<int>& pos, Context& ctx) override;
  Mat reduced_dm(const std::vector<int>& pos) const override;
  Vec to_ket() const override;
  Mat to_dm() const override;
  void absorb(State& other) override;

  void apply_cliff(CliffGate g, int a, int b = -1);
  // Tableau content bits for the current logical qubit count: n * (2n + 1).
  std::uint64_t payload_bits() const;
  // Generator `row` as ("XZIY...", sign), logical columns. Compacts first.
  std::pair<std::string, int> generator(int row);
  void set_from_generators(const std::vector<std::pair<std::string, int>>& gens);
  void compact();

 private:
  struct Echelon;
  int cols_ = 0;   // physical columns (logical + pending removals)
  int words_ = 0;  // 64-bit words per half-row
  std::vector<std::uint64_t> xbits_, zbits_;  // cols_ rows * words_ words
  std::vector<std::uint8_t> sign_;
  std::vector<int> phys_;          // logical position -> physical column
  std::vector<std::uint8_t> dead_; // physical column pending removal
  std::shared_ptr<Echelon> ech_;   // cached row-echelon copy

  std::uint64_t* xrow(int r) { return &xbits_[static_cast<std::size_t>(r) * words_]; }
  std::uint64_t* zrow(int r) { return &zbits_[static_cast<std::size_t>(r) * words_]; }
  const std::uint64_t* xrow(int r) const { return &xbits_[static_cast<std::size_t>(r) * words_]; }
  const std::uint64_t* zrow(int r) const { return &zbits_[static_cast<std::size_t>(r) * words_]; }
  bool xbit(int r, int c) const { return (xrow(r)[c >> 6] >> (c & 63)) & 1; }
  bool zbit(int r, int c) const { return (zrow(r)[c >> 6] >> (c & 63)) & 1; }
  int rows() const { return cols_; }  // square tableau: one generator per column
  void mul_row(int dst, int src);     // row_dst *= row_src
  void invalidate();
  const Echelon& echelon();
};

// Graph state with one of the 24 single-qubit Cliffords per vertex.
class GslcState final : public State {
 public:
  explicit GslcState(int n);

  Formalism formalism() const override { return Formalism::GSLC; }

  void apply(const Operator& op, const std::vector<int>& pos, Context& ctx) override;
  void apply_pauli(const PauliString& p, const std::vector<int>& pos) override;
  MeasureResult measure(int pos, Context& ctx) override;
  void remove(int pos) override;
  void apply_kraus(const std::vector<Mat>& ks, const std::vector<int>& pos, Context& ctx) override;
  Mat reduced_dm(const std::vector<int>& pos) const override;
  Vec to_ket() const override;
  Mat to_dm() const override;
  void absorb(State& other) override;

  void apply_cliff(CliffGate g, int a, int b = -1);
  // Stabiliser generators ("XZIY..." with sign) of the represented state.
  std::vector<std::pair<std::string, int>> stabiliser_generators() const;
  // Builds a state from an adjacency (sorted lists) plus, per vertex, the
  // single-qubit gate word that was applied to the original state to bring
  // it to graph form; the stored vertex operator is that word's adjoint.
  static std::shared_ptr<GslcState> from_graph(std::vector<std::vector<int>> adj,
                                               const std::vector<std::vector<CliffGate>>& applied);
  int vop(int v) const { return vop_[v]; }
  void set_vop(int v, int c) { vop_[v] = c; }
  const std::vector<std::vector<int>>& adj() const { return adj_; }
  void toggle_edge(int a, int b);
  bool has_edge(int a, int b) const;

 private:
  void local_complement(int v);
  // Reduces vop_[v] to a Z-diagonal Clifford using local complementations;
  // needs a non-isolated vertex or is a no-op on the graph.
  void reduce_vop(int v, int avoid);
  MeasureResult measure_graph_z(int v, Context& ctx);

  std::vector<std::vector<int>> adj_;  // sorted adjacency lists
  std::vector<int> vop_;               // index into the C24 tables
};

StatePtr make_state(Formalism f, int n);

}  // namespace qnet::quant
