#include "lgn/cost.hpp"

#include <cstdio>

namespace lgn {

uint64_t gates_per_neuron(bool is_lut, int fanin) {
  if (!is_lut) {
    if (fanin != 2) throw ArgumentError("gates_per_neuron: gate fanin must be 2");
    return 1;
  }
  if (fanin < 1 || fanin > 20)
    throw ArgumentError("gates_per_neuron: LUT fanin out of range");
  // N-input LUT as a complete mux tree: 2^N - 1 two-to-one muxes at 3 gates.
  return 3 * ((uint64_t(1) << fanin) - 1);
}

uint64_t network_gates(const std::vector<LayerSpec>& layers) {
  uint64_t total = 0;
  for (const auto& l : layers) total += l.width * gates_per_neuron(l.is_lut, l.fanin);
  return total;
}

AdderCounts popcount_adders(uint64_t n) {
  // Column compression: columns[w] holds the number of unresolved bits of
  // weight 2^w. A full adder removes 3 and adds 1 plus a carry; a half adder
  // removes 2 and adds 1 plus a carry. Terminates with one bit per column.
  AdderCounts out;
  std::vector<uint64_t> columns{n};
  for (size_t w = 0; w < columns.size(); ++w) {
    uint64_t carries = 0;
    while (columns[w] >= 3) {
      columns[w] -= 2;
      ++carries;
      ++out.full;
    }
    if (columns[w] == 2) {
      columns[w] -= 1;
      ++carries;
      ++out.half;
    }
    if (carries > 0) {
      if (w + 1 == columns.size()) columns.push_back(0);
      columns[w + 1] += carries;
    }
  }
  return out;
}

uint64_t readout_gates(uint64_t last_layer_width, int classes, uint64_t fa_gates,
                       uint64_t ha_gates) {
  if (classes <= 0) throw ArgumentError("readout_gates: classes must be positive");
  if (last_layer_width % uint64_t(classes) != 0)
    throw ArgumentError("readout_gates: layer width not divisible by classes");
  uint64_t group = last_layer_width / uint64_t(classes);
  AdderCounts a = popcount_adders(group);
  return uint64_t(classes) * (a.full * fa_gates + a.half * ha_gates);
}

CostReport cost_report(const std::vector<LayerSpec>& layers, int classes,
                       double preproc_flops, uint64_t fa_gates,
                       uint64_t ha_gates) {
  if (layers.empty()) throw ArgumentError("cost_report: no layers");
  CostReport r;
  r.gates_network = network_gates(layers);
  for (const auto& l : layers)
    if (l.is_lut) r.luts_by_fanin[l.fanin] += l.width;
  r.flops_network = double(r.gates_network) / 100.0;
  r.flops_readout =
      double(readout_gates(layers.back().width, classes, fa_gates, ha_gates)) /
      100.0;
  r.flops_preproc = preproc_flops;
  r.flops_total = r.flops_network + r.flops_readout + r.flops_preproc;
  return r;
}

std::string cost_report_text(const CostReport& r) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "network gates:   %llu\n",
                (unsigned long long)r.gates_network);
  out += buf;
  std::snprintf(buf, sizeof buf, "network FLOPs:   %.2f\n", r.flops_network);
  out += buf;
  std::snprintf(buf, sizeof buf, "readout FLOPs:   %.2f\n", r.flops_readout);
  out += buf;
  std::snprintf(buf, sizeof buf, "preproc FLOPs:   %.2f\n", r.flops_preproc);
  out += buf;
  std::snprintf(buf, sizeof buf, "total FLOPs:     %.2f\n", r.flops_total);
  out += buf;
  for (const auto& [fanin, count] : r.luts_by_fanin) {
    std::snprintf(buf, sizeof buf, "%d-LUTs:          %llu\n", fanin,
                  (unsigned long long)count);
    out += buf;
  }
  return out;
}

std::string cost_report_csv(const CostReport& r) {
  char buf[256];
  std::string out = "item,value\n";
  std::snprintf(buf, sizeof buf, "gates_network,%llu\n",
                (unsigned long long)r.gates_network);
  out += buf;
  std::snprintf(buf, sizeof buf, "flops_network,%.2f\n", r.flops_network);
  out += buf;
  std::snprintf(buf, sizeof buf, "flops_readout,%.2f\n", r.flops_readout);
  out += buf;
  std::snprintf(buf, sizeof buf, "flops_preproc,%.2f\n", r.flops_preproc);
  out += buf;
  std::snprintf(buf, sizeof buf, "flops_total,%.2f\n", r.flops_total);
  out += buf;
  for (const auto& [fanin, count] : r.luts_by_fanin) {
    std::snprintf(buf, sizeof buf, "luts_fanin_%d,%llu\n", fanin,
                  (unsigned long long)count);
    out += buf;
  }
  return out;
}

std::vector<LayerSpec> parse_arch(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos)
    throw ArgumentError("parse_arch: expected '<kind>:<layers>x<width>'");
  std::string kind = s.substr(0, colon);
  std::string rest = s.substr(colon + 1);
  auto ex = rest.find('x');
  if (ex == std::string::npos)
    throw ArgumentError("parse_arch: expected '<layers>x<width>' after ':'");
  long layers = 0, width = 0;
  try {
    size_t used = 0;
    layers = std::stol(rest.substr(0, ex), &used);
    if (used != ex) throw std::invalid_argument("");
    std::string w = rest.substr(ex + 1);
    width = std::stol(w, &used);
    if (used != w.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw ArgumentError("parse_arch: bad layer/width numbers in '" + s + "'");
  }
  if (layers < 1 || width < 1)
    throw ArgumentError("parse_arch: layers and width must be >= 1");

  LayerSpec proto;
  if (kind == "gate") {
    proto.is_lut = false;
    proto.fanin = 2;
  } else if (kind.rfind("lut", 0) == 0) {
    proto.is_lut = true;
    try {
      size_t used = 0;
      std::string n = kind.substr(3);
      proto.fanin = std::stoi(n, &used);
      if (used != n.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ArgumentError("parse_arch: bad LUT fanin in '" + kind + "'");
    }
    if (proto.fanin < 1 || proto.fanin > 20)
      throw ArgumentError("parse_arch: LUT fanin out of range");
  } else {
    throw ArgumentError("parse_arch: unknown kind '" + kind + "'");
  }
  proto.width = uint64_t(width);
  return std::vector<LayerSpec>(size_t(layers), proto);
}

}  // namespace lgn
