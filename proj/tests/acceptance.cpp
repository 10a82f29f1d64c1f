// Acceptance suite: ten numbered criteria, one PASS/FAIL line each, with
// every threshold pinned in this file. Exit code is the number of failed
// criteria. Heavy criteria stream progress to stderr.
//
// Usage: acceptance [--mnist DIR] [--mitdb DIR] [--sample DIR]
//   --mnist  IDX gz files (train/t10k images+labels)   default data/mnist
//   --mitdb  the 44 two-channel records (.hea/.dat/.atr), default data/mitdb
//            (fetch with tools/fetch_mitbih.sh on a networked machine)
//   --sample record 100 alone, used as a parser sanity oracle

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lgn/common.hpp"
#include "lgn/cost.hpp"
#include "lgn/ecg.hpp"
#include "lgn/gates.hpp"
#include "lgn/idx.hpp"
#include "lgn/lut.hpp"
#include "lgn/metrics.hpp"
#include "lgn/netlist.hpp"
#include "lgn/network.hpp"
#include "lgn/rate.hpp"
#include "lgn/rng.hpp"

namespace {

using namespace lgn;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  if (!ok) ++g_failures;
  std::printf("criterion %2d: %s — %s\n", id, ok ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

constexpr const char* kMissingDb =
    "dataset not present — run tools/fetch_mitbih.sh";

// Shared state produced by the data-dependent criteria.
struct Artifacts {
  std::optional<Dataset> mnist_train, mnist_test;
  std::vector<uint8_t> mnist_checkpoint;
  std::string mnist_report;

  std::optional<EcgDataset> ds1, ds2;
  std::optional<SoftNetwork> ecg_soft;   // best seed of criterion 8
  std::vector<uint8_t> ecg_checkpoint;
  std::string ecg_report;
  uint64_t ecg_best_seed = 0;
};

double classify_accuracy(const std::vector<int>& preds, const Dataset& data) {
  size_t correct = 0;
  for (size_t i = 0; i < preds.size(); ++i)
    if (preds[i] == int(data.y[i])) ++correct;
  return double(correct) / double(preds.size());
}

std::vector<int> dataset_labels(const Dataset& data) {
  return std::vector<int>(data.y.begin(), data.y.end());
}

// ---------------------------------------------------------------------------
// criterion 1 — analytic gradients vs central finite differences
// ---------------------------------------------------------------------------

// Relative error with a unit guard so near-zero partials compare absolutely.
double rel_err(double a, double b) {
  return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

void criterion_1() {
  constexpr double kTol = 1e-5;   // max allowed relative error
  constexpr double kH = 1e-5;    // central-difference step
  constexpr int kGateInstances = 600;
  constexpr int kLutInstancesPerFanin = 150;
  constexpr double kBudgetSeconds = 60.0;

  auto t0 = Clock::now();
  Rng rng(101);
  double worst = 0.0;
  int instances = 0;

  // Gate superposition: all 16 logit partials plus both input partials.
  for (int t = 0; t < kGateInstances; ++t) {
    GateLogits w;
    for (auto& v : w) v = rng.uniform(-4.0, 4.0);
    // Inputs stay h away from the [0,1] walls so the stencil is evaluable.
    double x0 = rng.uniform(0.05, 0.95), x1 = rng.uniform(0.05, 0.95);
    GateSuperpositionGrad g = gate_superposition_backward(w, x0, x1, 1.0);
    for (int i = 0; i < kNumGates; ++i) {
      GateLogits wp = w, wm = w;
      wp[i] += kH;
      wm[i] -= kH;
      double fd = (gate_superposition(wp, x0, x1) -
                   gate_superposition(wm, x0, x1)) / (2.0 * kH);
      worst = std::max(worst, rel_err(fd, g.grad_w[i]));
    }
    double fd0 = (gate_superposition(w, x0 + kH, x1) -
                  gate_superposition(w, x0 - kH, x1)) / (2.0 * kH);
    double fd1 = (gate_superposition(w, x0, x1 + kH) -
                  gate_superposition(w, x0, x1 - kH)) / (2.0 * kH);
    worst = std::max(worst, rel_err(fd0, g.grad_x0));
    worst = std::max(worst, rel_err(fd1, g.grad_x1));
    ++instances;
  }

  // LUT mux tree: every table-entry and selector partial, fan-ins 2,3,4,6.
  for (int fanin : {2, 3, 4, 6}) {
    size_t entries = size_t(1) << fanin;
    for (int t = 0; t < kLutInstancesPerFanin; ++t) {
      std::vector<double> w(entries);
      std::vector<double> l(static_cast<size_t>(fanin));
      for (auto& v : w) v = rng.uniform();
      for (auto& v : l) v = rng.uniform(0.05, 0.95);
      LutGrad g = lut_forward_backward(w, l, 1.0);
      for (size_t i = 0; i < entries; ++i) {
        std::vector<double> wp = w, wm = w;
        wp[i] += kH;
        wm[i] -= kH;
        double fd = (lut_forward(wp, l) - lut_forward(wm, l)) / (2.0 * kH);
        worst = std::max(worst, rel_err(fd, g.grad_w[i]));
      }
      for (int j = 0; j < fanin; ++j) {
        std::vector<double> lp = l, lm = l;
        lp[size_t(j)] += kH;
        lm[size_t(j)] -= kH;
        double fd = (lut_forward(w, lp) - lut_forward(w, lm)) / (2.0 * kH);
        worst = std::max(worst, rel_err(fd, g.grad_l[size_t(j)]));
      }
      ++instances;
    }
  }

  double dt = seconds_since(t0);
  bool ok = worst < kTol && instances >= 1000 && dt < kBudgetSeconds;
  verdict(1, ok,
          fmt("gradient suite: %d instances, max rel err %.2e (tol %.0e), "
              "%.1f s",
              instances, worst, kTol, dt));
}

// ---------------------------------------------------------------------------
// criterion 2 — a 2-input LUT loaded with a gate's truth table is that gate
// ---------------------------------------------------------------------------

void criterion_2() {
  constexpr double kTol = 1e-12;
  constexpr int kRandomInputs = 1000;

  Rng rng(202);
  std::vector<std::pair<double, double>> inputs;
  for (int t = 0; t < kRandomInputs; ++t)
    inputs.emplace_back(rng.uniform(), rng.uniform());

  double worst = 0.0;
  bool corners_exact = true;
  for (int i = 0; i < kNumGates; ++i) {
    std::vector<double> w(4);
    for (int c = 0; c < 4; ++c) w[size_t(c)] = double(gate_truth_bit(i, c));
    for (int b0 = 0; b0 < 2; ++b0)
      for (int b1 = 0; b1 < 2; ++b1) {
        double lut = lut_forward(w, {double(b0), double(b1)});
        double gate = gate_eval(i, double(b0), double(b1));
        double expect = double(gate_eval_bit(i, b0, b1));
        if (lut != expect || gate != expect) corners_exact = false;
      }
    for (auto& [x0, x1] : inputs)
      worst = std::max(worst,
                       std::fabs(lut_forward(w, {x0, x1}) - gate_eval(i, x0, x1)));
  }
  bool ok = corners_exact && worst <= kTol;
  verdict(2, ok,
          fmt("2-LUT vs gate: 16 types x %d inputs, max |diff| %.2e (tol "
              "%.0e), corners %s",
              kRandomInputs, worst, kTol,
              corners_exact ? "exact" : "NOT exact"));
}

// ---------------------------------------------------------------------------
// criterion 3 — saturated soft = discretized = netlist, exhaustively
// ---------------------------------------------------------------------------

// Saturates every neuron so the soft forward is exactly boolean on binary
// inputs: a 1000-margin one-hot makes softmax16 an exact one-hot in double
// precision, and exact 0/1 LUT weights are their own thresholding.
void saturate(SoftNetwork& net, Rng& rng) {
  for (Layer& layer : net.layers) {
    if (net.config.is_lut) {
      for (auto& w : layer.params) w = (rng.next() & 1) ? 1.0 : 0.0;
    } else {
      size_t entries = layer.params.size() / kNumGates;
      for (size_t n = 0; n < entries; ++n) {
        int chosen = int(rng.below(kNumGates));
        for (int g = 0; g < kNumGates; ++g)
          layer.params[n * kNumGates + size_t(g)] = g == chosen ? 1000.0 : 0.0;
      }
    }
  }
}

bool exhaustive_agreement(const SoftNetwork& net,
                          const std::vector<NetlistStyle>& styles,
                          std::string& why) {
  HardNetwork hard = discretize(net);
  std::vector<Netlist> nets;
  for (NetlistStyle s : styles) nets.push_back(parse_netlist(emit_netlist(hard, s)));

  uint64_t width = net.config.input_width;
  std::vector<double> xin(static_cast<size_t>(width));
  std::vector<uint8_t> bits(static_cast<size_t>(width));
  for (uint64_t m = 0; m < (uint64_t(1) << width); ++m) {
    for (uint64_t j = 0; j < width; ++j) {
      bits[size_t(j)] = uint8_t((m >> j) & 1);
      xin[size_t(j)] = double(bits[size_t(j)]);
    }
    int soft = predict_soft(net, xin);
    int hard_pred = forward_hard(hard, bits).predicted_class;
    if (soft != hard_pred) {
      why = fmt("input %llu: soft %d vs hard %d",
                static_cast<unsigned long long>(m), soft, hard_pred);
      return false;
    }
    for (size_t s = 0; s < nets.size(); ++s) {
      int nl = netlist_class(eval_netlist(nets[s], bits));
      if (nl != hard_pred) {
        why = fmt("input %llu: netlist style %zu predicts %d vs %d",
                  static_cast<unsigned long long>(m), s, nl, hard_pred);
        return false;
      }
    }
  }
  return true;
}

void criterion_3() {
  constexpr double kBudgetSeconds = 60.0;
  auto t0 = Clock::now();
  Rng rng(303);

  NetworkConfig gate_cfg;
  gate_cfg.layer_sizes = {14, 8};
  gate_cfg.input_width = 10;
  gate_cfg.num_classes = 4;
  gate_cfg.seed = 5;
  SoftNetwork gate_net = build_network(gate_cfg);
  saturate(gate_net, rng);

  NetworkConfig lut_cfg = gate_cfg;
  lut_cfg.is_lut = true;
  lut_cfg.lut_fanin = 3;
  lut_cfg.seed = 6;
  SoftNetwork lut_net = build_network(lut_cfg);
  saturate(lut_net, rng);

  std::string why;
  bool ok =
      exhaustive_agreement(
          gate_net, {NetlistStyle::kAssign, NetlistStyle::kLutPrimitive}, why) &&
      exhaustive_agreement(
          lut_net, {NetlistStyle::kAssign, NetlistStyle::kLutPrimitive}, why);
  double dt = seconds_since(t0);
  ok = ok && dt < kBudgetSeconds;
  verdict(3, ok,
          ok ? fmt("soft/hard/netlist agree on all 1024 inputs, gate and "
                   "3-LUT nets, both styles (%.1f s)",
                   dt)
             : why);
}

// ---------------------------------------------------------------------------
// criterion 4 — feature pipeline class totals over the 44 records
// ---------------------------------------------------------------------------

// Published per-class beat totals over DS1+DS2 and the tolerance band.
constexpr uint64_t kClassTotals[5] = {89474, 6986, 3018, 801, 15};
constexpr double kClassSlack = 0.005;  // 0.5% per class

bool sample_record_sane(const std::string& sample_dir, std::string& why) {
  std::string dat = sample_dir + "/100.dat";
  if (!std::filesystem::exists(dat)) {
    why = "sample record missing: " + dat;
    return false;
  }
  EcgRecord rec = read_record(dat, sample_dir + "/100.atr");
  EcgDataset ds = build_dataset({rec});
  if (rec.annotations.size() != 2274 || ds.emitted != 2269 ||
      ds.class_counts[0] != 2239 || ds.class_counts[1] != 33 ||
      ds.class_counts[2] != 1) {
    why = fmt("sample record 100 mismatch: %zu annotations, %llu rows",
              rec.annotations.size(),
              static_cast<unsigned long long>(ds.emitted));
    return false;
  }
  return true;
}

bool mitdb_complete(const std::string& dir) {
  InterPatientSplit split = split_inter_patient();
  std::vector<int> all = split.ds1;
  all.insert(all.end(), split.ds2.begin(), split.ds2.end());
  for (int id : all)
    for (const char* ext : {".hea", ".dat", ".atr"})
      if (!std::filesystem::exists(dir + "/" + std::to_string(id) + ext))
        return false;
  return true;
}

EcgDataset load_mitdb_split(const std::string& dir, const std::vector<int>& ids) {
  std::vector<EcgRecord> records;
  for (int id : ids) {
    std::string base = dir + "/" + std::to_string(id);
    records.push_back(read_record(base + ".dat", base + ".atr"));
  }
  return build_dataset(records);
}

void criterion_4(const std::string& mitdb_dir, const std::string& sample_dir,
                 Artifacts& art) {
  constexpr double kBudgetSeconds = 300.0;
  auto t0 = Clock::now();

  std::string why;
  if (!sample_record_sane(sample_dir, why)) {
    verdict(4, false, why);
    return;
  }
  std::fprintf(stderr, "criterion 4: sample record 100 chain verified\n");

  if (!mitdb_complete(mitdb_dir)) {
    verdict(4, false, kMissingDb);
    return;
  }

  InterPatientSplit split = split_inter_patient();
  art.ds1 = load_mitdb_split(mitdb_dir, split.ds1);
  art.ds2 = load_mitdb_split(mitdb_dir, split.ds2);

  bool ok = kBinaryFeatureBits == 138 && kRealFeatureCount == 89 &&
            art.ds1->binary.input_width == 138 &&
            art.ds1->real.input_width == 89;
  std::string detail = "class totals";
  for (int k = 0; k < 5; ++k) {
    uint64_t got = art.ds1->class_counts[size_t(k)] +
                   art.ds2->class_counts[size_t(k)];
    double slack = kClassSlack * double(kClassTotals[k]);
    bool in_band =
        std::fabs(double(got) - double(kClassTotals[k])) <= slack;
    ok = ok && in_band;
    detail += fmt(" %llu/%llu", static_cast<unsigned long long>(got),
                  static_cast<unsigned long long>(kClassTotals[k]));
  }
  double dt = seconds_since(t0);
  ok = ok && dt < kBudgetSeconds;
  verdict(4, ok, detail + fmt(", widths 138/89 (%.1f s)", dt));
}

// ---------------------------------------------------------------------------
// criterion 5 — network FLOPs for the four reference architectures
// ---------------------------------------------------------------------------

void criterion_5() {
  // Architecture → exact network FLOPs (gate count / 100).
  const std::pair<const char*, double> kTable[4] = {
      {"gate:1x8000", 80.0},
      {"lut2:1x8000", 720.0},
      {"lut4:1x3000", 1350.0},
      {"lut6:1x2000", 3780.0},
  };
  bool ok = true;
  std::string detail = "network FLOPs";
  for (auto& [arch, expect] : kTable) {
    double got = cost_report(parse_arch(arch), 4).flops_network;
    ok = ok && got == expect;  // exact, both are small integers / 100
    detail += fmt(" %s=%.0f", arch, got);
  }
  verdict(5, ok, detail);
}

// ---------------------------------------------------------------------------
// criterion 6 — metrics oracle and jκ range property
// ---------------------------------------------------------------------------

void criterion_6() {
  constexpr int kRandomMatrices = 100000;
  constexpr double kOracleTol = 1e-12;

  // Two-class example embedded in the 4x4 matrix: [[40,10],[20,30]].
  // Acc = 0.7, p_e = 0.5, kappa = 0.40; j = 30/50 + 30/40 = 1.35.
  ConfusionMatrix m{};
  m.c[0][0] = 40;
  m.c[0][1] = 10;
  m.c[1][0] = 20;
  m.c[1][1] = 30;
  auto k = kappa(m);
  auto jk = jk_index(m);
  bool ok = k && std::fabs(*k - 0.40) < kOracleTol &&
            std::fabs(j_index(m) - 1.35) < kOracleTol && jk &&
            std::fabs(*jk - (1.35 / 8.0 + 0.40 / 2.0)) < kOracleTol;

  // Degenerate all-N predictions: chance agreement equals accuracy, κ = 0.
  ConfusionMatrix all_n{};
  all_n.c[0][0] = 900;
  all_n.c[1][0] = 60;
  all_n.c[2][0] = 30;
  all_n.c[3][0] = 10;
  auto k0 = kappa(all_n);
  ok = ok && k0 && *k0 == 0.0 && j_index(all_n) == 0.0;

  // jκ ∈ [0,1] whenever κ is defined and nonnegative.
  Rng rng(606);
  int qualified = 0;
  bool in_range = true;
  for (int t = 0; t < kRandomMatrices; ++t) {
    ConfusionMatrix r{};
    for (auto& row : r.c)
      for (auto& cell : row) cell = rng.below(60);
    auto kr = kappa(r);
    if (!kr || *kr < 0.0) continue;
    ++qualified;
    auto jkr = jk_index(r);
    if (!jkr || *jkr < 0.0 || *jkr > 1.0) in_range = false;
  }
  ok = ok && in_range && qualified > 0;
  verdict(6, ok,
          fmt("hand matrices OK, jκ in [0,1] for %d/%d random matrices with "
              "κ ≥ 0",
              qualified, kRandomMatrices));
}

// ---------------------------------------------------------------------------
// criterion 7 — MNIST sanity run
// ---------------------------------------------------------------------------

// Pinned MNIST run: 1×8000 gates, T=10, lr 0.01, batch 100, seed 1. The
// per-epoch shuffle is seeded by (seed, epoch), so the epoch-50 snapshot is
// byte-for-byte the result of a standalone 50-epoch run.
NetworkConfig mnist_config() {
  NetworkConfig cfg;
  cfg.layer_sizes = {8000};
  cfg.input_width = 784;
  cfg.num_classes = 10;
  cfg.temperature = 10.0;
  cfg.seed = 1;
  cfg.learning_rate = 0.01;
  cfg.epochs = 200;
  cfg.batch_size = 100;
  return cfg;
}

constexpr int kMnistSnapshotEpoch = 50;
constexpr double kMnistAcc200 = 0.89;
constexpr double kMnistAcc50 = 0.85;

bool load_mnist(const std::string& dir, Artifacts& art, std::string& why) {
  const char* files[4] = {
      "/train-images-idx3-ubyte.gz", "/train-labels-idx1-ubyte.gz",
      "/t10k-images-idx3-ubyte.gz", "/t10k-labels-idx1-ubyte.gz"};
  for (const char* f : files)
    if (!std::filesystem::exists(dir + f)) {
      why = "dataset not present — missing " + dir + f;
      return false;
    }
  art.mnist_train = idx_to_dataset(read_idx_images(dir + files[0]),
                                   read_idx_labels(dir + files[1]), false);
  art.mnist_test = idx_to_dataset(read_idx_images(dir + files[2]),
                                  read_idx_labels(dir + files[3]), false);
  return true;
}

// Trains the pinned config, reporting the discretized test accuracy at the
// snapshot epoch and at the end.
void run_mnist(const Artifacts& art, std::vector<uint8_t>& checkpoint,
               std::string& report, double& acc50, double& acc200) {
  SoftNetwork net = build_network(mnist_config());
  double snap_acc = 0.0;
  train(net, *art.mnist_train, [&](const SoftNetwork& n, const EpochStats& st) {
    if (st.epoch == 1 || st.epoch % 10 == 0)
      std::fprintf(stderr,
                   "mnist epoch %3d  train_loss %.4f  holdout_acc %.4f\n",
                   st.epoch, st.train_loss, st.holdout_accuracy);
    if (st.epoch == kMnistSnapshotEpoch) {
      SoftNetwork snap = n;
      snap.config.epochs = st.epoch;
      HardNetwork hard = discretize(snap);
      snap_acc = classify_accuracy(predict_hard_all(hard, *art.mnist_test),
                                   *art.mnist_test);
    }
  });
  acc50 = snap_acc;
  HardNetwork hard = discretize(net);
  acc200 = classify_accuracy(predict_hard_all(hard, *art.mnist_test),
                             *art.mnist_test);
  checkpoint = serialize_checkpoint(net);
  report = fmt("hard accuracy epoch%d=%.6f epoch%d=%.6f\n",
               kMnistSnapshotEpoch, acc50, net.config.epochs, acc200);
}

void criterion_7(const std::string& mnist_dir, Artifacts& art) {
  std::string why;
  if (!load_mnist(mnist_dir, art, why)) {
    verdict(7, false, why);
    return;
  }
  auto t0 = Clock::now();
  double acc50 = 0.0, acc200 = 0.0;
  run_mnist(art, art.mnist_checkpoint, art.mnist_report, acc50, acc200);
  bool ok = acc200 >= kMnistAcc200 && acc50 >= kMnistAcc50;
  verdict(7, ok,
          fmt("MNIST 1x8000 hard accuracy %.4f at 200 epochs (>= %.2f), "
              "%.4f at %d (>= %.2f), %.0f s",
              acc200, kMnistAcc200, acc50, kMnistSnapshotEpoch, kMnistAcc50,
              seconds_since(t0)));
}

// ---------------------------------------------------------------------------
// criterion 8 — ECG headline numbers on DS2
// ---------------------------------------------------------------------------

// Pinned ECG run: 1×8000 gates on the 138-bit features, T=35 (the published
// optimum for this model, inside the {25,30,35,40} tuning neighborhood),
// lr 0.01, batch 100, 200 epochs, best of seeds 1..3 on DS2.
NetworkConfig ecg_config(uint64_t seed) {
  NetworkConfig cfg;
  cfg.layer_sizes = {8000};
  cfg.input_width = 138;
  cfg.num_classes = 4;
  cfg.temperature = 35.0;
  cfg.seed = seed;
  cfg.learning_rate = 0.01;
  cfg.epochs = 200;
  cfg.batch_size = 100;
  return cfg;
}

constexpr uint64_t kEcgSeeds[3] = {1, 2, 3};
constexpr double kEcgAccFloor = 0.925;
constexpr double kEcgJkFloor = 0.55;

struct EcgRun {
  double acc = 0.0;
  double jk = -1.0;
  std::vector<uint8_t> checkpoint;
  std::string report;
  SoftNetwork net;
};

EcgRun run_ecg_seed(uint64_t seed, const EcgDataset& ds1, const EcgDataset& ds2) {
  EcgRun run;
  run.net = build_network(ecg_config(seed));
  train(run.net, ds1.binary, [&](const SoftNetwork&, const EpochStats& st) {
    if (st.epoch == 1 || st.epoch % 20 == 0)
      std::fprintf(stderr,
                   "ecg seed %llu epoch %3d  train_loss %.4f  holdout_acc %.4f\n",
                   static_cast<unsigned long long>(seed), st.epoch,
                   st.train_loss, st.holdout_accuracy);
  });
  HardNetwork hard = discretize(run.net);
  std::vector<int> preds = predict_hard_all(hard, ds2.binary);
  ConfusionMatrix c = confusion(preds, dataset_labels(ds2.binary));
  run.acc = accuracy(c);
  if (auto jk = jk_index(c)) run.jk = *jk;
  run.checkpoint = serialize_checkpoint(run.net);
  run.report = metrics_report_text(c);
  return run;
}

void criterion_8(Artifacts& art) {
  if (!art.ds1 || !art.ds2) {
    verdict(8, false, kMissingDb);
    return;
  }
  auto t0 = Clock::now();
  std::string detail;
  bool any_ok = false;
  double best_jk = -1.0;
  for (uint64_t seed : kEcgSeeds) {
    EcgRun run = run_ecg_seed(seed, *art.ds1, *art.ds2);
    detail += fmt(" seed%llu: acc %.4f jκ %.4f;",
                  static_cast<unsigned long long>(seed), run.acc, run.jk);
    if (run.acc >= kEcgAccFloor && run.jk >= kEcgJkFloor) any_ok = true;
    if (run.jk > best_jk) {
      best_jk = run.jk;
      art.ecg_soft = std::move(run.net);
      art.ecg_checkpoint = std::move(run.checkpoint);
      art.ecg_report = std::move(run.report);
      art.ecg_best_seed = seed;
    }
  }
  verdict(8, any_ok,
          fmt("ECG 1x8000 T=35 on DS2 (need acc >= %.3f and jκ >= %.2f):%s"
              " %.0f s",
              kEcgAccFloor, kEcgJkFloor, detail.c_str(), seconds_since(t0)));
}

// ---------------------------------------------------------------------------
// criterion 9 — rate-coded evaluation converges to the soft evaluation
// ---------------------------------------------------------------------------

constexpr uint64_t kRateLength = 1024;
constexpr double kRateGap = 0.005;  // 0.5 accuracy points

void criterion_9(const Artifacts& art) {
  if (!art.ecg_soft || !art.ds2) {
    verdict(9, false, kMissingDb);
    return;
  }
  auto t0 = Clock::now();
  const Dataset& test = art.ds2->binary;
  double soft_acc =
      classify_accuracy(predict_soft_all(*art.ecg_soft, test), test);
  HardNetwork hard = discretize(*art.ecg_soft);
  double rate_acc = classify_accuracy(
      predict_rate_all(hard, test, kRateLength, 1), test);
  bool ok = std::fabs(rate_acc - soft_acc) <= kRateGap;
  verdict(9, ok,
          fmt("rate L=%llu accuracy %.4f vs soft %.4f, gap %.4f (tol %.3f), "
              "%.0f s",
              static_cast<unsigned long long>(kRateLength), rate_acc, soft_acc,
              std::fabs(rate_acc - soft_acc), kRateGap, seconds_since(t0)));
}

// ---------------------------------------------------------------------------
// criterion 10 — fixed seeds make training byte-reproducible
// ---------------------------------------------------------------------------

void criterion_10(Artifacts& art) {
  bool mnist_ok = false;
  std::string detail;
  if (art.mnist_checkpoint.empty()) {
    detail = "MNIST run unavailable";
  } else {
    auto t0 = Clock::now();
    std::vector<uint8_t> ck;
    std::string report;
    double a50 = 0.0, a200 = 0.0;
    std::fprintf(stderr, "criterion 10: repeating the MNIST run\n");
    run_mnist(art, ck, report, a50, a200);
    mnist_ok = ck == art.mnist_checkpoint && report == art.mnist_report;
    detail = fmt("MNIST repeat %s (%.0f s)",
                 mnist_ok ? "byte-identical" : "DIFFERS", seconds_since(t0));
  }

  bool ecg_ok = false;
  if (!art.ecg_soft || !art.ds1 || !art.ds2) {
    detail += "; ECG: ";
    detail += kMissingDb;
  } else {
    std::fprintf(stderr, "criterion 10: repeating the best ECG run\n");
    EcgRun rerun = run_ecg_seed(art.ecg_best_seed, *art.ds1, *art.ds2);
    ecg_ok = rerun.checkpoint == art.ecg_checkpoint &&
             rerun.report == art.ecg_report;
    detail += fmt("; ECG seed %llu repeat %s",
                  static_cast<unsigned long long>(art.ecg_best_seed),
                  ecg_ok ? "byte-identical" : "DIFFERS");
  }
  verdict(10, mnist_ok && ecg_ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::string mnist_dir = "data/mnist";
  std::string mitdb_dir = "data/mitdb";
  std::string sample_dir = "data/wfdb-sample";
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--mnist" && i + 1 < argc) {
      mnist_dir = argv[++i];
    } else if (a == "--mitdb" && i + 1 < argc) {
      mitdb_dir = argv[++i];
    } else if (a == "--sample" && i + 1 < argc) {
      sample_dir = argv[++i];
    } else {
      std::fprintf(stderr,
                   "usage: acceptance [--mnist DIR] [--mitdb DIR] "
                   "[--sample DIR]\n");
      return 2;
    }
  }
  // The env var outranks --mitdb so a ctest run can point at an external
  // copy of the database without touching the build files.
  if (const char* env = std::getenv("LGN_MITDB_DIR")) mitdb_dir = env;

  Artifacts art;
  try {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4(mitdb_dir, sample_dir, art);
    criterion_5();
    criterion_6();
    criterion_7(mnist_dir, art);
    criterion_8(art);
    criterion_9(art);
    criterion_10(art);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fatal: %s\n", e.what());
    return 99;
  }
  std::printf("criteria passed: %d/10\n", 10 - g_failures);
  return g_failures;
}
