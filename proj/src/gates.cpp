#include "lgn/gates.hpp"

namespace lgn {

const char* gate_operation_name(int i) {
  static const char* names[kNumGates] = {
      "FALSE",       "x0 AND x1",  "x0 AND NOT x1", "x0",
      "NOT x0 AND x1", "x1",       "x0 XOR x1",     "x0 OR x1",
      "x0 NOR x1",   "x0 XNOR x1", "NOT x1",        "x0 OR NOT x1",
      "NOT x0",      "NOT x0 OR x1", "x0 NAND x1",  "TRUE"};
  if (i < 0 || i >= kNumGates) throw ArgumentError("gate index must be in 0..15");
  return names[i];
}

}  // namespace lgn
