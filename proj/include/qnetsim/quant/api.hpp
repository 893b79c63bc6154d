// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Qubit-centric front end of the quantum core.

#pragma once

#include <vector>

#include "qnetsim/quant/state.hpp"

namespace qnet::quant::api {

// n independent 1-qubit |0> states.
std::vector<QubitPtr> create_qubits(Context& ctx, int n, Formalism f);

// Merges the targets' states if needed, then applies the operator at the
// target positions.
void apply(Context& ctx, const Operator& op, const std::vector<QubitPtr>& targets);

// Samples an outcome from the Born rule with the run RNG and collapses.
// Split mode detaches the measured qubit into its own 1-qubit state.
MeasureResult measure(Context& ctx, const QubitPtr& q, MeasureMode mode = MeasureMode::Split);

// Generalised measurement with Kraus pair {M0, M1}; outcome i occurs with
// probability <psi| Mi^dag Mi |psi> and the state collapses through Mi.
// KET/DM only.
MeasureResult measure_povm(Context& ctx, const QubitPtr& q, const Mat& m0, const Mat& m1);

void apply_channel(Context& ctx, const Channel& ch, const std::vector<QubitPtr>& targets);

// Squared overlap with a pure reference (for DM: <ref|rho|ref>). The
// reference indexes qubits in the order given.
double fidelity(const std::vector<QubitPtr>& qubits, const Vec& reference);

// Reduced density matrix of the given qubits, in order, without disturbing
// the state.
Mat peek_reduced(const std::vector<QubitPtr>& qubits);

// Converts the whole shared state containing `qubits` to the target
// formalism, rebinding every handle in it.
void convert(Context& ctx, const QubitPtr& q, Formalism target);

// Measures the qubit (standard basis, consuming RNG) and removes it from its
// state; the handle becomes dead.
int discard(Context& ctx, const QubitPtr& q);

// Overwrites the joint state of freshly created qubits with the given
// density matrix (KET formalism samples a pure component, the documented
// mixed-state sampling helper). The qubits must together form their whole
// shared state(s).
void assign_dm(Context& ctx, const std::vector<QubitPtr>& qubits, const Mat& rho);

QubitPtr make_qubit(StatePtr s, int pos);

}  // namespace qnet::quant::api
