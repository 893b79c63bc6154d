// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Operators (unitaries, Kraus sets) and noise channels.

#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "qnetsim/quant/types.hpp"

namespace qnet::quant {

// Elementary Clifford gate, used by the tableau and graph backends.
enum class CliffGate { H, S, Sdg, X, Y, Z, CNOT, CZ };

// One Clifford gate acting on operator slots a (and b for two-qubit gates).
struct CliffStep {
  CliffGate g;
  int a = 0;
  int b = -1;
};

// A named k-qubit operator. The key is stable and embeds any discretised
// parameters, so it doubles as the memoization key. Operators carrying a
// Clifford descriptor are applicable to STAB/GSLC states.
class Operator {
 public:
  Operator(std::string key, int arity, Mat matrix, bool check_unitary = true);
  Operator(std::string key, int arity, Mat matrix, std::vector<CliffStep> clifford);

  const std::string& key() const { return key_; }
  int arity() const { return arity_; }
  const Mat& matrix() const { return matrix_; }
  bool is_clifford() const { return clifford_flag_; }
  const std::vector<CliffStep>& clifford() const { return clifford_; }

 private:
  std::string key_;
  int arity_;
  Mat matrix_;
  bool clifford_flag_ = false;
  std::vector<CliffStep> clifford_;
};

// Kronecker product helper for small dense matrices.
Mat kron(const Mat& a, const Mat& b);

namespace ops {

// Continuous rotation angles are discretised to this grid (radians) before
// the matrix is built, so equal keys always mean equal matrices.
inline constexpr double kAngleGrid = 1e-9;
double discretise_angle(double theta);

const Operator& identity();
const Operator& x();
const Operator& y();
const Operator& z();
const Operator& h();
const Operator& s();
const Operator& sdg();
const Operator& cnot();
const Operator& cz();
const Operator& pauli1(Pauli p);

// R_P(theta) = cos(theta/2) I - i sin(theta/2) P.
Operator rx(double theta);
Operator ry(double theta);
Operator rz(double theta);

// Controlled R_X: control slot 0, target slot 1. Applies R_X(+theta) on the
// target when the control is |0> and R_X(-theta) when it is |1>.
Operator crx(double theta);

}  // namespace ops

// ---------------------------------------------------------------------------
// Channels

// A CPTP map given either as an explicit Kraus set or as a probability
// mixture of Pauli strings. Mixtures are the only channels applicable to
// STAB/GSLC states.
class Channel {
 public:
  static Channel kraus(std::string name, int arity, std::vector<Mat> ks);
  static Channel pauli_mixture(std::string name, int arity,
                               std::vector<std::pair<double, PauliString>> terms);

  const std::string& name() const { return name_; }
  int arity() const { return arity_; }
  const std::vector<Mat>& kraus_ops() const { return kraus_; }
  bool is_pauli_mixture() const { return !mixture_.empty(); }
  const std::vector<std::pair<double, PauliString>>& mixture() const { return mixture_; }

  // Max-norm residual of sum K^dag K - I.
  double completeness_residual() const;

 private:
  Channel() = default;
  std::string name_;
  int arity_ = 1;
  std::vector<Mat> kraus_;
  std::vector<std::pair<double, PauliString>> mixture_;
};

}  // namespace qnet::quant
