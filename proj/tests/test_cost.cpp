#include "doctest.h"

#include <cmath>

#include "lgn/cost.hpp"

using namespace lgn;

namespace {

// Independent bit-length oracle: number of binary digits of n.
uint64_t bit_length(uint64_t n) {
  uint64_t b = 0;
  while (n > 0) {
    ++b;
    n >>= 1;
  }
  return b;
}

}  // namespace

TEST_CASE("per-neuron gate equivalents") {
  CHECK(gates_per_neuron(false, 2) == 1);
  CHECK(gates_per_neuron(true, 1) == 3);
  CHECK(gates_per_neuron(true, 2) == 9);
  CHECK(gates_per_neuron(true, 4) == 45);
  CHECK(gates_per_neuron(true, 6) == 189);
  CHECK_THROWS_AS(gates_per_neuron(false, 3), ArgumentError);
  CHECK_THROWS_AS(gates_per_neuron(true, 0), ArgumentError);
}

TEST_CASE("network FLOPs for the four reference architectures") {
  auto flops = [](const char* arch) {
    return cost_report(parse_arch(arch), 4).flops_network;
  };
  CHECK(flops("gate:1x8000") == doctest::Approx(80.0).epsilon(1e-12));
  CHECK(flops("lut2:1x8000") == doctest::Approx(720.0).epsilon(1e-12));
  CHECK(flops("lut4:1x3000") == doctest::Approx(1350.0).epsilon(1e-12));
  CHECK(flops("lut6:1x2000") == doctest::Approx(3780.0).epsilon(1e-12));
}

TEST_CASE("multi-layer counting adds per-layer costs") {
  auto layers = parse_arch("gate:3x1000");
  CHECK(layers.size() == 3);
  CHECK(network_gates(layers) == 3000);
  // Mixed stack assembled by hand.
  std::vector<LayerSpec> mixed = {{2, false, 500}, {4, true, 100}};
  CHECK(network_gates(mixed) == 500 + 45 * 100);
}

TEST_CASE("popcount compression: three bits take exactly one full adder") {
  AdderCounts a = popcount_adders(3);
  CHECK(a.full == 1);
  CHECK(a.half == 0);
}

TEST_CASE("popcount compression full-adder count is n minus bit-length") {
  for (uint64_t n : {1ull, 2ull, 3ull, 4ull, 5ull, 7ull, 8ull, 15ull, 16ull,
                     100ull, 500ull, 750ull, 2000ull, 4095ull, 4096ull}) {
    AdderCounts a = popcount_adders(n);
    CHECK(a.full == n - bit_length(n));
  }
  // Reference group sizes.
  CHECK(popcount_adders(2000).full == 1989);
  CHECK(popcount_adders(750).full == 740);
  CHECK(popcount_adders(500).full == 491);
}

TEST_CASE("popcount compression terminates with sane half-adder counts") {
  for (uint64_t n = 1; n <= 600; ++n) {
    AdderCounts a = popcount_adders(n);
    // Each column can demand at most one half adder and there are at most
    // bit_length(n) columns.
    CHECK(a.half <= bit_length(n));
  }
}

TEST_CASE("readout gates multiply adders by per-adder gate weights") {
  // Group of 3 per class: 1 FA -> 5 gates, times 4 classes.
  CHECK(readout_gates(12, 4) == 20);
  // Alternate adder weights scale linearly.
  CHECK(readout_gates(12, 4, 7, 3) == 28);
  CHECK_THROWS_AS(readout_gates(10, 4), ArgumentError);
  CHECK_THROWS_AS(readout_gates(10, 0), ArgumentError);
}

TEST_CASE("cost report composes network, readout and preprocessing FLOPs") {
  CostReport r = cost_report(parse_arch("gate:1x8000"), 4);
  CHECK(r.gates_network == 8000);
  CHECK(r.flops_network == doctest::Approx(80.0));
  // 8000/4 = 2000 per group: 1989 FA, some HA; FA=5, HA=2.
  AdderCounts a = popcount_adders(2000);
  double readout = 4.0 * double(a.full * 5 + a.half * 2) / 100.0;
  CHECK(r.flops_readout == doctest::Approx(readout).epsilon(1e-12));
  CHECK(r.flops_preproc == doctest::Approx(2246.0));
  CHECK(r.flops_total ==
        doctest::Approx(r.flops_network + r.flops_readout + r.flops_preproc));
  std::string text = cost_report_text(r);
  CHECK(text.find("network gates:   8000") != std::string::npos);
  std::string csv = cost_report_csv(r);
  CHECK(csv.find("item,value") == 0);
  CHECK(csv.find("flops_network,80.00") != std::string::npos);
  CHECK(r.luts_by_fanin.empty());

  CostReport lr = cost_report(parse_arch("lut6:2x2000"), 4);
  REQUIRE(lr.luts_by_fanin.count(6) == 1);
  CHECK(lr.luts_by_fanin.at(6) == 4000);
  CHECK(cost_report_csv(lr).find("luts_fanin_6,4000") != std::string::npos);
}

TEST_CASE("parse_arch accepts gate and lutN kinds, rejects everything else") {
  auto g = parse_arch("gate:2x100");
  CHECK(g.size() == 2);
  CHECK_FALSE(g[0].is_lut);
  CHECK(g[0].fanin == 2);
  CHECK(g[0].width == 100);
  auto l = parse_arch("lut6:1x2000");
  CHECK(l.size() == 1);
  CHECK(l[0].is_lut);
  CHECK(l[0].fanin == 6);
  CHECK(l[0].width == 2000);
  CHECK_THROWS_AS(parse_arch("mlp:1x100"), ArgumentError);
  CHECK_THROWS_AS(parse_arch("gate1x100"), ArgumentError);
  CHECK_THROWS_AS(parse_arch("gate:x100"), ArgumentError);
  CHECK_THROWS_AS(parse_arch("gate:1x"), ArgumentError);
  CHECK_THROWS_AS(parse_arch("gate:0x100"), ArgumentError);
  CHECK_THROWS_AS(parse_arch("lut0:1x100"), ArgumentError);
  CHECK_THROWS_AS(parse_arch("lutx:1x100"), ArgumentError);
  CHECK_THROWS_AS(parse_arch("gate:1x100y"), ArgumentError);
}
