#pragma once

#include <array>
#include <cmath>
#include <string>

#include "lgn/common.hpp"

namespace lgn {

// Truth-table corner order everywhere in this toolkit: c = 2*x0 + x1,
// i.e. (x0,x1) = 00, 01, 10, 11. Gate i's truth table is the binary
// expansion of i over these corners, most significant bit at corner 00.
inline constexpr int kNumGates = 16;

/** Truth bit of gate i at corner c (c = 2*x0 + x1). */
inline constexpr int gate_truth_bit(int i, int c) { return (i >> (3 - c)) & 1; }

/** Corner basis products u_c; f_i(x0,x1) = Σ_c truth(i,c)·u_c. */
inline std::array<double, 4> corner_products(double x0, double x1) {
  return {(1.0 - x0) * (1.0 - x1), (1.0 - x0) * x1, x0 * (1.0 - x1), x0 * x1};
}

inline void check_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0))
    throw ArgumentError(std::string(name) + " must lie in [0,1]");
}

/** Real-valued logic operation f_i; exact at binary corners. */
inline double gate_eval(int i, double x0, double x1) {
  if (i < 0 || i >= kNumGates) throw ArgumentError("gate index must be in 0..15");
  check_unit_interval(x0, "x0");
  check_unit_interval(x1, "x1");
  auto u = corner_products(x0, x1);
  double a = 0.0;
  for (int c = 0; c < 4; ++c)
    if (gate_truth_bit(i, c)) a += u[c];
  return a;
}

/** Boolean evaluation of gate i on bits. */
inline int gate_eval_bit(int i, int b0, int b1) {
  return gate_truth_bit(i, 2 * b0 + b1);
}

/** Human-readable operation name for gate i (reports, netlist comments). */
const char* gate_operation_name(int i);

using GateLogits = std::array<double, kNumGates>;
using GateProbs = std::array<double, kNumGates>;

/** Max-subtracted softmax over the 16 gate logits. */
inline GateProbs softmax16(const GateLogits& w) {
  double mx = w[0];
  for (double v : w) {
    if (!std::isfinite(v)) throw NumericError("non-finite gate logit");
    if (v > mx) mx = v;
  }
  GateProbs p{};
  double z = 0.0;
  for (int i = 0; i < kNumGates; ++i) {
    p[i] = std::exp(w[i] - mx);
    z += p[i];
  }
  for (auto& v : p) v /= z;
  return p;
}

/** Mixture of the 16 truth tables at each corner: q_c = Σ_i p_i·truth(i,c). */
inline std::array<double, 4> corner_mixture(const GateProbs& p) {
  std::array<double, 4> q{};
  for (int i = 0; i < kNumGates; ++i)
    for (int c = 0; c < 4; ++c)
      if (gate_truth_bit(i, c)) q[c] += p[i];
  return q;
}

/** Gate superposition a = Σ softmax(w)_i · f_i(x0, x1). */
inline double gate_superposition(const GateLogits& w, double x0, double x1) {
  check_unit_interval(x0, "x0");
  check_unit_interval(x1, "x1");
  GateProbs p = softmax16(w);
  auto q = corner_mixture(p);
  auto u = corner_products(x0, x1);
  return q[0] * u[0] + q[1] * u[1] + q[2] * u[2] + q[3] * u[3];
}

struct GateSuperpositionGrad {
  GateLogits grad_w;
  double grad_x0;
  double grad_x1;
};

/** Closed-form partials of the superposition; see tests for the FD oracle. */
inline GateSuperpositionGrad gate_superposition_backward(const GateLogits& w,
                                                         double x0, double x1,
                                                         double upstream) {
  check_unit_interval(x0, "x0");
  check_unit_interval(x1, "x1");
  GateProbs p = softmax16(w);
  auto q = corner_mixture(p);
  auto u = corner_products(x0, x1);
  double a = q[0] * u[0] + q[1] * u[1] + q[2] * u[2] + q[3] * u[3];

  GateSuperpositionGrad g{};
  for (int i = 0; i < kNumGates; ++i) {
    double fi = 0.0;
    for (int c = 0; c < 4; ++c)
      if (gate_truth_bit(i, c)) fi += u[c];
    g.grad_w[i] = upstream * p[i] * (fi - a);  // softmax Jacobian folded in
  }
  g.grad_x0 = upstream * ((q[2] - q[0]) * (1.0 - x1) + (q[3] - q[1]) * x1);
  g.grad_x1 = upstream * ((q[1] - q[0]) * (1.0 - x0) + (q[3] - q[2]) * x0);
  return g;
}

}  // namespace lgn
