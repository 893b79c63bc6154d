// Copyright 2026 The qnetsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qnetsim/nv/nv.hpp"

namespace qnet::nv {

namespace frame {

P mul(P a, P b) {
  if (a == P::I) return b;
  if (b == P::I) return a;
  if (a == b) return P::I;
  // The remaining pairs multiply to the third non-identity Pauli.
  const int s = static_cast<int>(a) + static_cast<int>(b);
  return static_cast<P>(6 - s);
}

char name(P p) { return "IXYZ"[static_cast<int>(p)]; }

P entgen_correction(int sign, bool higher_index) {
  if (sign != +1 && sign != -1) throw net::ConfigError("detector sign must be +-1");
  return (sign == -1 && higher_index) ? P::Z : P::I;
}

P swap_q(int a, int b) {
  if (a == 1 && b == 1) return P::X;
  if (a == 1 && b == -1) return P::I;
  if (a == -1 && b == 1) return P::Y;
  if (a == -1 && b == -1) return P::Z;
  throw net::ConfigError("swap outcomes must be +-1");
}

P distill_correction(P pa_nuclear, P pb_nuclear) {
  const auto flips = [](P p) { return p == P::X || p == P::Y; };
  return flips(pa_nuclear) != flips(pb_nuclear) ? P::Y : P::I;
}

bool distill_success(bool adjacent, int m1_bit, int m2_bit) {
  if (adjacent) return m1_bit == 0 && m2_bit == 0;
  return m1_bit == m2_bit;
}

}  // namespace frame

int f_span(int n, int k) {
  if (n < 1 || k < 1 || k > (1 << n) - 1) throw quant::OutOfRange("span index");
  if (n == 1) return 1;
  const int half = 1 << (n - 1);
  if (k < half) return f_span(n - 1, k);
  if (k > half) return f_span(n - 1, (1 << n) - k);
  return half;
}

}  // namespace qnet::nv
