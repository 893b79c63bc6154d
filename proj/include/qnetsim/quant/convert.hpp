// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Whole-state conversions between the four formalisms. Defined pairs:
// KET->DM always; DM->KET for pure states; STAB<->GSLC always;
// STAB/GSLC->KET/DM always; KET/DM->STAB/GSLC for stabiliser states.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qnetsim/quant/state.hpp"

namespace qnet::quant {

// Returns a fresh state of `target` representing the same state as `s`.
// Qubit handles are not rebound; callers go through api::convert for that.
StatePtr convert_state(const State& s, Formalism target);

// Stabiliser generators of a pure state vector; throws NonStabiliserState.
std::vector<std::pair<std::string, int>> ket_stabiliser_generators(const Vec& psi);

}  // namespace qnet::quant
