#pragma once

#include <cstdint>
#include <vector>

#include "lgn/common.hpp"

namespace lgn {

// LUT indexing convention: selector input L_0 is the most significant bit of
// the table index, L_{N-1} the least significant. selector_matrix(N) row i is
// the N-bit big-endian binary representation of i.

/** 2^N × N binary counting matrix (row i = binary(i), big-endian). */
std::vector<std::vector<uint8_t>> selector_matrix(int n);

/**
 * MUX expansion of an N-input LUT:
 *   L_out = Σ_i W_i · Π_j (s_ij·L_j + (1−s_ij)·(1−L_j)).
 * Evaluated as a Shannon mux tree in O(2^N); maps [0,1] inputs and weights
 * into [0,1]. Throws ArgumentError on dimension mismatch.
 */
double lut_forward(const std::vector<double>& w, const std::vector<double>& l);

struct LutGrad {
  std::vector<double> grad_w;  // 2^N entries
  std::vector<double> grad_l;  // N entries
};

/** Analytic gradients of lut_forward (mux tree, reverse sweep). */
LutGrad lut_forward_backward(const std::vector<double>& w,
                             const std::vector<double>& l, double upstream);

/** Table index selected by binary inputs (L_0 most significant). */
inline size_t lut_index(const std::vector<uint8_t>& bits) {
  size_t idx = 0;
  for (uint8_t b : bits) idx = idx << 1 | (b & 1);
  return idx;
}

/** 0.5-threshold binarization used for LUT weights (≥ 0.5 rounds up). */
inline uint8_t binarize_weight(double w) { return w >= 0.5 ? 1 : 0; }

}  // namespace lgn
