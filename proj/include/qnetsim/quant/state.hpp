// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Qubit handles and shared multi-qubit states. A Qubit references one
// position inside a State; states merge automatically when an operation
// spans two of them and split when a measured qubit is detached. Positions
// are internal bookkeeping and may be remapped; handles are stable.

#pragma once

#include <memory>
#include <random>
#include <vector>

#include "qnetsim/quant/ops.hpp"
#include "qnetsim/quant/sparse.hpp"
#include "qnetsim/quant/types.hpp"

namespace qnet::quant {

class State;
class Qubit;
using QubitPtr = std::shared_ptr<Qubit>;
using StatePtr = std::shared_ptr<State>;

struct QuantStats {
  std::uint64_t ops_applied = 0;
  std::uint64_t channels_applied = 0;
  std::uint64_t measurements = 0;
  std::uint64_t merges = 0;
  std::uint64_t splits = 0;
  std::uint64_t conversions = 0;
  std::uint64_t max_state_qubits = 0;
  // For mean state size over all touched states.
  std::uint64_t touches = 0;
  std::uint64_t touched_qubits = 0;

  void note_size(int n) {
    if (static_cast<std::uint64_t>(n) > max_state_qubits) max_state_qubits = n;
    ++touches;
    touched_qubits += n;
  }
  double mean_state_qubits() const {
    return touches ? static_cast<double>(touched_qubits) / touches : 0.0;
  }
};

// Per-run context: the seeded RNG all stochastic draws consume, the
// memoization cache and statistics counters.
struct Context {
  explicit Context(std::uint64_t seed) : rng(seed) {}
  std::mt19937_64 rng;
  MemoCache memo;
  bool memo_enabled = true;
  QuantStats stats;

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
};

struct MeasureResult {
  int outcome = 0;      // 0 or 1
  double probability = 1.0;  // Born probability of the sampled outcome
};

enum class MeasureMode { Split, Inplace };

// Formalism-specific payload plus back-pointers to the qubit handles living
// in it. Lifetime: kept alive by the shared_ptr held in each Qubit.
class State : public std::enable_shared_from_this<State> {
 public:
  virtual ~State() = default;

  virtual Formalism formalism() const = 0;
  int num_qubits() const { return static_cast<int>(slots_.size()); }

  // Backend entry points; positions are indices into this state.
  virtual void apply(const Operator& op, const std::vector<int>& pos, Context& ctx) = 0;
  virtual void apply_pauli(const PauliString& p, const std::vector<int>& pos) = 0;
  virtual MeasureResult measure(int pos, Context& ctx) = 0;
  // Detaches `pos` after a collapsing measure; precondition: the qubit is in
  // a computational product state. Backends may defer the physical removal.
  virtual void remove(int pos) = 0;
  virtual void apply_kraus(const std::vector<Mat>& ks, const std::vector<int>& pos,
                           Context& ctx) = 0;
  // Generalised two-outcome measurement (KET/DM only by default).
  virtual MeasureResult measure_kraus_pair(const Mat& m0, const Mat& m1, int pos, Context& ctx);
  virtual Mat reduced_dm(const std::vector<int>& pos) const = 0;
  // Full-state conversions; throw where undefined (see convert()).
  virtual Vec to_ket() const = 0;
  virtual Mat to_dm() const = 0;

  // Appends the qubits of `other` to this state (tensor product on the
  // right). `other` must be the same formalism; it is left empty.
  virtual void absorb(State& other) = 0;

  // --- qubit slot bookkeeping (shared by all backends) ---
  Qubit* slot(int pos) const { return slots_[pos]; }
  void attach(Qubit* q, int pos);
  void detach(int pos) { slots_[pos] = nullptr; }
  // Moves the handle at `from` to `to` (backend position remapping).
  void move_slot(int from, int to);
  void append_slots(State& other);
  void pop_slot();

 protected:
  std::vector<Qubit*> slots_;
};

// Handle to one qubit. Created via make_qubit (api.hpp); destroying the
// handle orphans its position (the column is carried along untouched, which
// leaves all other qubits' reduced states unchanged). Use api::discard for
// an explicit measure-and-remove.
class Qubit {
 public:
  Qubit(StatePtr state, int pos);
  ~Qubit();
  Qubit(const Qubit&) = delete;
  Qubit& operator=(const Qubit&) = delete;

  State& state() const { return *state_; }
  const StatePtr& state_ptr() const { return state_; }
  int pos() const { return pos_; }
  bool alive() const { return alive_; }
  void kill() { alive_ = false; }

  // Used by merge/split bookkeeping.
  void rebind(StatePtr s, int pos);
  void set_pos(int pos) { pos_ = pos; }

 private:
  StatePtr state_;
  int pos_;
  bool alive_ = true;
};

// Factory for each backend, state |0...0> of n qubits (n >= 1 creates one
// shared product state; api::create_qubits makes independent 1-qubit ones).
StatePtr make_state(Formalism f, int n);

}  // namespace qnet::quant
