#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "lgn/network.hpp"

namespace lgn {

/**
 * Output form for network neurons: boolean `wire ... = expr` assigns (gates
 * as Table-form operators, LUTs as sum-of-minterms) or constant-initialized
 * LUT primitive instances (gates become 2-input LUTs). kAuto picks assigns
 * for gate networks and primitives for LUT networks.
 */
enum class NetlistStyle { kAuto, kAssign, kLutPrimitive };

/**
 * Emits a self-contained structural Verilog module: inputs x_0..x_{W-1},
 * one net n_{layer}_{index} per neuron, a full-adder/half-adder popcount
 * tree per class group (mirroring the cost model's compression order), an
 * MSB-first argmax comparator with lowest-index tie-breaking, and outputs
 * y_0.. (binary class index, y_0 = LSB).
 */
std::string emit_netlist(const HardNetwork& net,
                         NetlistStyle style = NetlistStyle::kAuto);

// ---- bundled interpreter for the emitted subset ----

/** One parsed boolean expression node (arena indices). */
struct NetExpr {
  enum Kind : uint8_t { kConst, kVar, kNot, kAnd, kOr, kXor };
  Kind kind = kConst;
  uint8_t value = 0;  // kConst
  uint32_t var = 0;   // kVar: net id
  int32_t a = -1, b = -1;
};

struct NetStatement {
  enum Kind : uint8_t { kAssign, kLut };
  Kind kind = kAssign;
  uint32_t target = 0;
  int32_t expr = -1;                 // kAssign: arena root
  std::vector<uint8_t> init;         // kLut: 2^N truth bits
  std::vector<uint32_t> lut_inputs;  // kLut: ids for I0..I{N-1}
};

struct Netlist {
  std::vector<std::string> net_names;
  std::unordered_map<std::string, uint32_t> net_ids;
  std::vector<uint32_t> inputs;   // port order
  std::vector<uint32_t> outputs;  // port order
  std::vector<NetExpr> arena;
  std::vector<NetStatement> statements;
};

/** Parses the structural subset produced by emit_netlist. */
Netlist parse_netlist(const std::string& text);

/**
 * Evaluates statements in file order; every net must be defined before use.
 * Returns output port values in port order.
 */
std::vector<uint8_t> eval_netlist(const Netlist& nl,
                                  const std::vector<uint8_t>& input_bits);

/** Decodes the y_* output bits (LSB first) as the predicted class index. */
int netlist_class(const std::vector<uint8_t>& output_bits);

}  // namespace lgn
