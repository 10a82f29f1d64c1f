#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lgn/common.hpp"

namespace lgn {

/** One homogeneous layer for costing purposes. */
struct LayerSpec {
  int fanin = 2;       // 2 for a plain gate layer, N >= 1 for an N-LUT layer
  bool is_lut = false; // false: 16-way gate neurons; true: N-input LUTs
  uint64_t width = 0;  // neurons in the layer
};

/** Two-input gate equivalents for one neuron of the given shape. */
uint64_t gates_per_neuron(bool is_lut, int fanin);

/** Total two-input gate equivalents of all layers. */
uint64_t network_gates(const std::vector<LayerSpec>& layers);

/** Adder counts from compressing n one-bit inputs down to a binary count. */
struct AdderCounts {
  uint64_t full = 0;
  uint64_t half = 0;
};

/**
 * Simulates a full-adder/half-adder compressor tree that popcounts n bits.
 * Each full adder turns 3 bits of one weight into 1 bit of that weight plus
 * a carry; each half adder does the same with 2 bits. The number of full
 * adders always equals n minus the bit-length of n.
 */
AdderCounts popcount_adders(uint64_t n);

/**
 * Gate-equivalent cost of the class readout: one popcount compressor per
 * class group. Full/half adder weights default to 5 and 2 two-input gates.
 */
uint64_t readout_gates(uint64_t last_layer_width, int classes,
                       uint64_t fa_gates = 5, uint64_t ha_gates = 2);

/** Cost summary; FLOPs are gate equivalents divided by 100. */
struct CostReport {
  uint64_t gates_network = 0;
  double flops_network = 0.0;
  double flops_readout = 0.0;
  double flops_preproc = 0.0;
  double flops_total = 0.0;
  std::map<int, uint64_t> luts_by_fanin;  // LUT neuron counts per fan-in
};

CostReport cost_report(const std::vector<LayerSpec>& layers, int classes,
                       double preproc_flops = 2246.0, uint64_t fa_gates = 5,
                       uint64_t ha_gates = 2);

std::string cost_report_text(const CostReport& r);
std::string cost_report_csv(const CostReport& r);

/**
 * Parses an architecture string like "gate:2x8000" or "lut4:1x3000":
 * kind, colon, layers 'x' width. Kinds: "gate" or "lut<N>" with N >= 1.
 */
std::vector<LayerSpec> parse_arch(const std::string& s);

}  // namespace lgn
