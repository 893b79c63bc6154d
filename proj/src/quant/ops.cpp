// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnetsim/quant/ops.hpp"

#include <cmath>
#include <cstdio>

namespace qnet::quant {

std::string to_string(Formalism f) {
  switch (f) {
    case Formalism::KET: return "ket";
    case Formalism::DM: return "dm";
    case Formalism::STAB: return "stab";
    case Formalism::GSLC: return "gslc";
  }
  return "?";
}

Formalism formalism_from_string(const std::string& s) {
  if (s == "ket") return Formalism::KET;
  if (s == "dm") return Formalism::DM;
  if (s == "stab") return Formalism::STAB;
  if (s == "gslc") return Formalism::GSLC;
  throw UnsupportedFormalism();
}

Pauli pauli_mul(Pauli a, Pauli b) {
  if (a == Pauli::I) return b;
  if (b == Pauli::I) return a;
  if (a == b) return Pauli::I;
  // Remaining pairs: product is the third non-identity Pauli.
  int s = static_cast<int>(a) + static_cast<int>(b);
  return static_cast<Pauli>(6 - s);
}

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

const Mat& pauli_matrix(Pauli p) {
  static const Mat i = Mat::Identity(2, 2);
  static const Mat x = (Mat(2, 2) << 0, 1, 1, 0).finished();
  static const Mat y = (Mat(2, 2) << 0, cd(0, -1), cd(0, 1), 0).finished();
  static const Mat z = (Mat(2, 2) << 1, 0, 0, -1).finished();
  switch (p) {
    case Pauli::I: return i;
    case Pauli::X: return x;
    case Pauli::Y: return y;
    case Pauli::Z: return z;
  }
  return i;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Operator::Operator(std::string key, int arity, Mat matrix, bool check_unitary)
    : key_(std::move(key)), arity_(arity), matrix_(std::move(matrix)) {
  const long dim = 1L << arity_;
  if (matrix_.rows() != dim || matrix_.cols() != dim) throw ArityMismatch();
  if (check_unitary) {
    double res = (matrix_.adjoint() * matrix_ - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (res > 1e-9) throw OutOfRange("operator is not unitary: " + key_);
  }
}

Operator::Operator(std::string key, int arity, Mat matrix, std::vector<CliffStep> clifford)
    : Operator(std::move(key), arity, std::move(matrix), true) {
  clifford_flag_ = true;
  clifford_ = std::move(clifford);
}

namespace ops {

double discretise_angle(double theta) {
  return std::round(theta / kAngleGrid) * kAngleGrid;
}

namespace {

std::string angle_key(const char* name, double theta) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s(%.0f)", name, theta / kAngleGrid);
  return buf;
}

Mat rot(Pauli p, double theta) {
  return std::cos(theta / 2) * Mat::Identity(2, 2) -
         cd(0, 1) * std::sin(theta / 2) * pauli_matrix(p);
}

}  // namespace

const Operator& identity() {
  static const Operator op("id", 1, Mat::Identity(2, 2), std::vector<CliffStep>{});
  return op;
}
const Operator& x() {
  static const Operator op("x", 1, pauli_matrix(Pauli::X), {{CliffGate::X, 0, -1}});
  return op;
}
const Operator& y() {
  static const Operator op("y", 1, pauli_matrix(Pauli::Y), {{CliffGate::Y, 0, -1}});
  return op;
}
const Operator& z() {
  static const Operator op("z", 1, pauli_matrix(Pauli::Z), {{CliffGate::Z, 0, -1}});
  return op;
}
const Operator& h() {
  static const Operator op("h", 1,
                           (Mat(2, 2) << 1, 1, 1, -1).finished() / std::sqrt(2.0),
                           {{CliffGate::H, 0, -1}});
  return op;
}
const Operator& s() {
  static const Operator op("s", 1, (Mat(2, 2) << 1, 0, 0, cd(0, 1)).finished(),
                           {{CliffGate::S, 0, -1}});
  return op;
}
const Operator& sdg() {
  static const Operator op("sdg", 1, (Mat(2, 2) << 1, 0, 0, cd(0, -1)).finished(),
                           {{CliffGate::Sdg, 0, -1}});
  return op;
}
const Operator& cnot() {
  static const Operator op("cnot", 2,
                           (Mat(4, 4) << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0)
                               .finished(),
                           {{CliffGate::CNOT, 0, 1}});
  return op;
}
const Operator& cz() {
  static const Operator op("cz", 2,
                           (Mat(4, 4) << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1)
                               .finished(),
                           {{CliffGate::CZ, 0, 1}});
  return op;
}
const Operator& pauli1(Pauli p) {
  switch (p) {
    case Pauli::I: return identity();
    case Pauli::X: return x();
    case Pauli::Y: return y();
    case Pauli::Z: return z();
  }
  return identity();
}

Operator rx(double theta) {
  theta = discretise_angle(theta);
  return Operator(angle_key("rx", theta), 1, rot(Pauli::X, theta));
}
Operator ry(double theta) {
  theta = discretise_angle(theta);
  return Operator(angle_key("ry", theta), 1, rot(Pauli::Y, theta));
}
Operator rz(double theta) {
  theta = discretise_angle(theta);
  return Operator(angle_key("rz", theta), 1, rot(Pauli::Z, theta));
}

Operator crx(double theta) {
  theta = discretise_angle(theta);
  Mat u = Mat::Zero(4, 4);
  u.block<2, 2>(0, 0) = rot(Pauli::X, theta);
  u.block<2, 2>(2, 2) = rot(Pauli::X, -theta);
  return Operator(angle_key("crx", theta), 2, u);
}

}  // namespace ops

// ---------------------------------------------------------------------------

Channel Channel::kraus(std::string name, int arity, std::vector<Mat> ks) {
  Channel ch;
  ch.name_ = std::move(name);
  ch.arity_ = arity;
  ch.kraus_ = std::move(ks);
  if (ch.kraus_.empty()) throw InvalidKrausSet();
  const long dim = 1L << arity;
  for (const Mat& k : ch.kraus_) {
    if (k.rows() != dim || k.cols() != dim) throw InvalidKrausSet();
  }
  if (ch.completeness_residual() > 1e-9) throw InvalidKrausSet();
  return ch;
}

Channel Channel::pauli_mixture(std::string name, int arity,
                               std::vector<std::pair<double, PauliString>> terms) {
  Channel ch;
  ch.name_ = std::move(name);
  ch.arity_ = arity;
  double total = 0;
  for (const auto& [p, ps] : terms) {
    if (p < -1e-12 || static_cast<int>(ps.size()) != arity) throw InvalidKrausSet();
    total += p;
    Mat k = Mat::Identity(1, 1);
    for (Pauli q : ps) k = kron(k, pauli_matrix(q));
    ch.kraus_.push_back(std::sqrt(std::max(p, 0.0)) * k);
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidKrausSet();
  ch.mixture_ = std::move(terms);
  return ch;
}

double Channel::completeness_residual() const {
  const long dim = kraus_.front().rows();
  Mat sum = Mat::Zero(dim, dim);
  for (const Mat& k : kraus_) sum += k.adjoint() * k;
  return (sum - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

}  // namespace qnet::quant
