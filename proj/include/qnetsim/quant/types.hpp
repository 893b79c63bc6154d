// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qnet::quant {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

enum class Formalism { KET, DM, STAB, GSLC };

std::string to_string(Formalism f);
Formalism formalism_from_string(const std::string& s);

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

// Product of two Paulis, phase dropped.
Pauli pauli_mul(Pauli a, Pauli b);
char pauli_char(Pauli p);
const Mat& pauli_matrix(Pauli p);

// Multi-qubit Pauli label, one entry per target.
using PauliString = std::vector<Pauli>;

// ---------------------------------------------------------------------------
// Errors

struct QuantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonCliffordOnStabiliser : QuantError {
  using QuantError::QuantError;
  NonCliffordOnStabiliser() : QuantError("non-Clifford operator on a stabiliser-type state") {}
};
struct ArityMismatch : QuantError {
  using QuantError::QuantError;
  ArityMismatch() : QuantError("operator arity does not match target count") {}
};
struct DeadQubit : QuantError {
  using QuantError::QuantError;
  DeadQubit() : QuantError("qubit handle is no longer alive") {}
};
struct InvalidKrausSet : QuantError {
  using QuantError::QuantError;
  InvalidKrausSet() : QuantError("Kraus operators do not satisfy completeness") {}
};
struct NonPauliChannelOnStabiliser : QuantError {
  using QuantError::QuantError;
  NonPauliChannelOnStabiliser()
      : QuantError("only Pauli mixtures are supported on stabiliser-type states") {}
};
struct MixedStateToPure : QuantError {
  using QuantError::QuantError;
  MixedStateToPure() : QuantError("density matrix is not pure") {}
};
struct NonStabiliserState : QuantError {
  using QuantError::QuantError;
  NonStabiliserState() : QuantError("state is not a stabiliser state") {}
};
struct SizeMismatch : QuantError {
  using QuantError::QuantError;
  SizeMismatch() : QuantError("size mismatch") {}
};
struct UnsupportedFormalism : QuantError {
  using QuantError::QuantError;
  UnsupportedFormalism() : QuantError("unsupported formalism") {}
};
struct OutOfRange : QuantError {
  using QuantError::QuantError;
  OutOfRange() : QuantError("parameter out of range") {}
};

}  // namespace qnet::quant
