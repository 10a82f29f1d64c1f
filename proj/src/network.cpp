#include "lgn/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "lgn/rng.hpp"

namespace lgn {

namespace {

// Independent seed domains so wiring, parameter init and epoch shuffles never
// share a stream.
constexpr uint64_t kWireTag = 0x100000000ull;
constexpr uint64_t kParamTag = 0x200000000ull;
constexpr uint64_t kShuffleTag = 0x300000000ull;

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

size_t lut_entries(int fanin) { return size_t(1) << fanin; }

int argmax_lowest(const double* v, size_t n) {
  int best = 0;
  for (size_t i = 1; i < n; ++i)
    if (v[i] > v[size_t(best)]) best = int(i);
  return best;
}

int argmax_lowest_u64(const uint64_t* v, size_t n) {
  int best = 0;
  for (size_t i = 1; i < n; ++i)
    if (v[i] > v[size_t(best)]) best = int(i);
  return best;
}

/** Per-layer batch state for the training/eval fast path. */
struct LayerWork {
  // Gate layers: softmax probabilities, bilinear forward coefficients
  // (a = c0 + c1*x0 + c2*x1 + c3*x0*x1) and the four per-gate gradient
  // accumulators A = (sum up, sum up*x0, sum up*x1, sum up*x0*x1).
  std::vector<double> probs;  // width * 16
  std::vector<double> coef;   // width * 4
  std::vector<double> accA;   // width * 4
  // LUT layers: binarized weights for this batch, straight-through weight
  // gradient accumulators, and mux-tree scratch for one neuron.
  std::vector<uint8_t> wbits;  // width * 2^fanin
  std::vector<double> accW;    // width * 2^fanin
  std::vector<double> nodes;   // 2^(fanin+1) - 2 pre-merge values
  std::vector<double> gbuf;    // 2^fanin expansion buffer
  // Per-sample activations and upstream gradients.
  std::vector<double> act;
  std::vector<double> grad;
};

class Engine {
 public:
  explicit Engine(const SoftNetwork& net) {
    work_.resize(net.layers.size());
    for (size_t l = 0; l < net.layers.size(); ++l) {
      const Layer& ly = net.layers[l];
      LayerWork& w = work_[l];
      size_t width = size_t(ly.width);
      if (!net.config.is_lut) {
        w.probs.resize(width * 16);
        w.coef.resize(width * 4);
        w.accA.resize(width * 4);
      } else {
        size_t e = lut_entries(ly.fanin);
        w.wbits.resize(width * e);
        w.accW.resize(width * e);
        w.nodes.resize(2 * e - 2);
        w.gbuf.resize(e);
      }
      w.act.resize(width);
      w.grad.resize(width);
    }
    in_stage_.resize(size_t(net.config.input_width));
    scores_.resize(size_t(net.config.num_classes));
    probs_.resize(size_t(net.config.num_classes));
  }

  /** Recomputes per-batch derived state after a parameter update. */
  void prepare(const SoftNetwork& net) {
    for (size_t l = 0; l < net.layers.size(); ++l) {
      const Layer& ly = net.layers[l];
      LayerWork& w = work_[l];
      if (!net.config.is_lut) {
        for (size_t g = 0; g < size_t(ly.width); ++g) {
          GateLogits logits;
          std::memcpy(logits.data(), ly.params.data() + g * 16, 16 * sizeof(double));
          GateProbs p = softmax16(logits);
          std::memcpy(w.probs.data() + g * 16, p.data(), 16 * sizeof(double));
          auto q = corner_mixture(p);
          double* c = w.coef.data() + g * 4;
          c[0] = q[0];
          c[1] = q[2] - q[0];
          c[2] = q[1] - q[0];
          c[3] = q[0] - q[1] - q[2] + q[3];
        }
        std::fill(w.accA.begin(), w.accA.end(), 0.0);
      } else {
        for (size_t i = 0; i < ly.params.size(); ++i)
          w.wbits[i] = ly.params[i] >= 0.5 ? 1 : 0;
        std::fill(w.accW.begin(), w.accW.end(), 0.0);
      }
    }
  }

  /** Forward one row; returns the final layer activations. */
  const std::vector<double>& forward(const SoftNetwork& net, const float* row) {
    size_t in_w = size_t(net.config.input_width);
    for (size_t i = 0; i < in_w; ++i) in_stage_[i] = double(row[i]);
    const std::vector<double>* prev = &in_stage_;
    for (size_t l = 0; l < net.layers.size(); ++l) {
      const Layer& ly = net.layers[l];
      LayerWork& w = work_[l];
      const double* pa = prev->data();
      if (!net.config.is_lut) {
        const uint32_t* wires = ly.wires.data();
        const double* coef = w.coef.data();
        for (size_t g = 0; g < size_t(ly.width); ++g) {
          double x0 = pa[wires[2 * g]];
          double x1 = pa[wires[2 * g + 1]];
          const double* c = coef + 4 * g;
          w.act[g] = clamp01(c[0] + c[1] * x0 + c[2] * x1 + c[3] * (x0 * x1));
        }
      } else {
        int fanin = ly.fanin;
        size_t e = lut_entries(fanin);
        for (size_t n = 0; n < size_t(ly.width); ++n)
          w.act[n] = lut_forward_bits(w.wbits.data() + n * e, fanin,
                                      ly.wires.data() + n * size_t(fanin), pa,
                                      w.nodes.data());
      }
      prev = &w.act;
    }
    return *prev;
  }

  /**
   * Computes readout scores/probabilities from the last forward pass and
   * returns this sample's cross-entropy. Scores are group sums divided by T.
   */
  double readout(const SoftNetwork& net, int label) {
    const std::vector<double>& last = work_.back().act;
    size_t classes = size_t(net.config.num_classes);
    size_t group = size_t(net.config.group_size());
    double inv_t = 1.0 / net.config.temperature;
    for (size_t c = 0; c < classes; ++c) {
      double s = 0.0;
      const double* a = last.data() + c * group;
      for (size_t i = 0; i < group; ++i) s += a[i];
      scores_[c] = s * inv_t;
    }
    double zmax = scores_[0];
    for (size_t c = 1; c < classes; ++c) zmax = std::max(zmax, scores_[c]);
    double sum = 0.0;
    for (size_t c = 0; c < classes; ++c) sum += std::exp(scores_[c] - zmax);
    double lse = zmax + std::log(sum);
    for (size_t c = 0; c < classes; ++c) probs_[c] = std::exp(scores_[c] - lse);
    return lse - scores_[size_t(label)];
  }

  /** Forward + readout + backward accumulation for one labeled row. */
  double accumulate(const SoftNetwork& net, const float* row, int label,
                    double upscale) {
    forward(net, row);
    double ce = readout(net, label);

    // Seed the last layer's upstream gradients: d(mean CE)/d(activation).
    LayerWork& lw = work_.back();
    size_t group = size_t(net.config.group_size());
    for (size_t c = 0; c < size_t(net.config.num_classes); ++c) {
      double u = (probs_[c] - (int(c) == label ? 1.0 : 0.0)) * upscale;
      double* g = lw.grad.data() + c * group;
      for (size_t i = 0; i < group; ++i) g[i] = u;
    }

    for (size_t l = net.layers.size(); l-- > 0;) {
      const Layer& ly = net.layers[l];
      LayerWork& w = work_[l];
      const double* pa = l > 0 ? work_[l - 1].act.data() : in_stage_.data();
      double* pg = nullptr;
      if (l > 0) {
        pg = work_[l - 1].grad.data();
        std::fill(work_[l - 1].grad.begin(), work_[l - 1].grad.end(), 0.0);
      }
      if (!net.config.is_lut) {
        const uint32_t* wires = ly.wires.data();
        const double* coef = w.coef.data();
        double* acc = w.accA.data();
        for (size_t g = 0; g < size_t(ly.width); ++g) {
          double up = w.grad[g];
          uint32_t w0 = wires[2 * g], w1 = wires[2 * g + 1];
          double x0 = pa[w0], x1 = pa[w1];
          double* a = acc + 4 * g;
          a[0] += up;
          a[1] += up * x0;
          a[2] += up * x1;
          a[3] += up * (x0 * x1);
          if (pg) {
            const double* c = coef + 4 * g;
            pg[w0] += up * (c[1] + c[3] * x1);
            pg[w1] += up * (c[2] + c[3] * x0);
          }
        }
      } else {
        int fanin = ly.fanin;
        size_t e = lut_entries(fanin);
        for (size_t n = 0; n < size_t(ly.width); ++n) {
          double up = w.grad[n];
          const uint32_t* wires = ly.wires.data() + n * size_t(fanin);
          // Rebuild this neuron's mux levels (forward overwrote the shared
          // scratch), then run the reverse sweep.
          lut_forward_bits(w.wbits.data() + n * e, fanin, wires, pa,
                           w.nodes.data());
          lut_backward_bits(fanin, wires, pa, w.nodes.data(), up,
                            w.gbuf.data(), w.accW.data() + n * e, pg);
        }
      }
    }
    return ce;
  }

  /**
   * Converts batch accumulators into parameter gradients, shaped like the
   * layer parameter vectors.
   */
  void finish(const SoftNetwork& net, std::vector<std::vector<double>>& grads) {
    grads.resize(net.layers.size());
    for (size_t l = 0; l < net.layers.size(); ++l) {
      const Layer& ly = net.layers[l];
      LayerWork& w = work_[l];
      grads[l].assign(ly.params.size(), 0.0);
      if (!net.config.is_lut) {
        for (size_t g = 0; g < size_t(ly.width); ++g) {
          const double* a = w.accA.data() + 4 * g;
          // Recover the corner accumulators G_c = sum_s up_s * u_c(s) from
          // the bilinear accumulators.
          double G0 = a[0] - a[1] - a[2] + a[3];
          double G1 = a[2] - a[3];
          double G2 = a[1] - a[3];
          double G3 = a[3];
          const double* p = w.probs.data() + 16 * g;
          double q0 = 0, q1 = 0, q2 = 0, q3 = 0;
          for (int i = 0; i < 16; ++i) {
            if (gate_truth_bit(i, 0)) q0 += p[i];
            if (gate_truth_bit(i, 1)) q1 += p[i];
            if (gate_truth_bit(i, 2)) q2 += p[i];
            if (gate_truth_bit(i, 3)) q3 += p[i];
          }
          double D = q0 * G0 + q1 * G1 + q2 * G2 + q3 * G3;
          double* out = grads[l].data() + 16 * g;
          for (int i = 0; i < 16; ++i) {
            double Ti = (gate_truth_bit(i, 0) ? G0 : 0.0) +
                        (gate_truth_bit(i, 1) ? G1 : 0.0) +
                        (gate_truth_bit(i, 2) ? G2 : 0.0) +
                        (gate_truth_bit(i, 3) ? G3 : 0.0);
            out[i] = p[i] * (Ti - D);
          }
        }
      } else {
        grads[l] = w.accW;
      }
    }
  }

  const std::vector<double>& scores() const { return scores_; }
  const std::vector<double>& class_probs() const { return probs_; }

 private:
  /**
   * Mux-tree forward for one LUT neuron with binary leaf weights. Fills
   * `nodes` with every pre-merge level (sizes 2^fanin down to 2) and returns
   * the clamped root.
   */
  static double lut_forward_bits(const uint8_t* wb, int fanin,
                                 const uint32_t* wires, const double* prev,
                                 double* nodes) {
    size_t e = size_t(1) << fanin;
    for (size_t i = 0; i < e; ++i) nodes[i] = double(wb[i]);
    double* cur = nodes;
    size_t size = e;
    for (int j = fanin - 1; j >= 1; --j) {
      double lj = prev[wires[j]];
      double* next = cur + size;
      for (size_t i = 0; i < size / 2; ++i)
        next[i] = (1.0 - lj) * cur[2 * i] + lj * cur[2 * i + 1];
      cur = next;
      size /= 2;
    }
    double l0 = prev[wires[0]];
    return clamp01((1.0 - l0) * cur[0] + l0 * cur[1]);
  }

  /**
   * Reverse sweep over the stored levels: expands the upstream gradient to
   * the leaves (accumulated into accw as straight-through weight gradients)
   * and scatters input gradients into pg when given.
   */
  static void lut_backward_bits(int fanin, const uint32_t* wires,
                                const double* prev, const double* nodes,
                                double up, double* gbuf, double* accw,
                                double* pg) {
    size_t e = size_t(1) << fanin;
    gbuf[0] = up;
    size_t gsize = 1;
    for (int j = 0; j < fanin; ++j) {
      // The pre-merge level for step j has size 2^(j+1) and was stored at
      // offset 2e - 2^(j+2) (levels were laid down from j = fanin-1 down).
      const double* before = nodes + (2 * e) - (size_t(4) << j);
      double lj = prev[wires[j]];
      if (pg) {
        double gl = 0.0;
        for (size_t i = 0; i < gsize; ++i)
          gl += gbuf[i] * (before[2 * i + 1] - before[2 * i]);
        pg[wires[j]] += gl;
      }
      for (size_t i = gsize; i-- > 0;) {
        double gi = gbuf[i];
        gbuf[2 * i + 1] = gi * lj;
        gbuf[2 * i] = gi * (1.0 - lj);
      }
      gsize *= 2;
    }
    for (size_t i = 0; i < e; ++i) accw[i] += gbuf[i];
  }

  std::vector<LayerWork> work_;
  std::vector<double> in_stage_;
  std::vector<double> scores_;
  std::vector<double> probs_;
};

void check_dataset(const SoftNetwork& net, const Dataset& data) {
  if (data.size() == 0) throw ArgumentError("train: empty dataset");
  if (data.input_width != net.config.input_width)
    throw ArgumentError("dataset width " + std::to_string(data.input_width) +
                        " does not match network input width " +
                        std::to_string(net.config.input_width));
  if (data.x.size() != data.size() * size_t(data.input_width))
    throw ArgumentError("dataset row storage does not match label count");
  for (size_t i = 0; i < data.y.size(); ++i)
    if (int(data.y[i]) >= net.config.num_classes)
      throw ArgumentError("label out of range at row " + std::to_string(i));
  for (size_t i = 0; i < data.x.size(); ++i)
    if (!(data.x[i] >= 0.0f && data.x[i] <= 1.0f))
      throw ArgumentError("feature outside [0,1] at flat index " +
                          std::to_string(i));
}

}  // namespace

void validate_config(const NetworkConfig& cfg) {
  if (cfg.layer_sizes.empty())
    throw ArgumentError("config: at least one layer required");
  for (uint64_t s : cfg.layer_sizes)
    if (s < 1) throw ArgumentError("config: layer sizes must be >= 1");
  if (cfg.input_width < 1) throw ArgumentError("config: input_width must be >= 1");
  if (cfg.num_classes < 2) throw ArgumentError("config: num_classes must be >= 2");
  if (cfg.layer_sizes.back() % uint64_t(cfg.num_classes) != 0)
    throw ArgumentError("config: num_classes must divide the last layer size");
  if (cfg.is_lut && (cfg.lut_fanin < 1 || cfg.lut_fanin > 16))
    throw ArgumentError("config: LUT fanin out of range");
  if (!(cfg.temperature > 0.0))
    throw ArgumentError("config: temperature must be > 0");
  if (!(cfg.learning_rate > 0.0))
    throw ArgumentError("config: learning_rate must be > 0");
  if (cfg.epochs < 0) throw ArgumentError("config: epochs must be >= 0");
  if (cfg.batch_size < 1) throw ArgumentError("config: batch_size must be >= 1");
  // Wire indices are stored as 32-bit.
  if (cfg.input_width > 0xFFFFFFFFull)
    throw ArgumentError("config: input_width too large");
  for (uint64_t s : cfg.layer_sizes)
    if (s > 0xFFFFFFFFull) throw ArgumentError("config: layer size too large");
}

SoftNetwork build_network(const NetworkConfig& cfg) {
  validate_config(cfg);
  SoftNetwork net;
  net.config = cfg;
  net.layers.resize(cfg.layer_sizes.size());
  uint64_t prev_width = cfg.input_width;
  for (size_t l = 0; l < cfg.layer_sizes.size(); ++l) {
    Layer& ly = net.layers[l];
    ly.width = cfg.layer_sizes[l];
    ly.fanin = cfg.fanin();
    Rng wire_rng(mix_seed(cfg.seed, kWireTag + l));
    ly.wires.resize(size_t(ly.width) * size_t(ly.fanin));
    for (auto& w : ly.wires) w = uint32_t(wire_rng.below(prev_width));
    Rng param_rng(mix_seed(cfg.seed, kParamTag + l));
    if (!cfg.is_lut) {
      ly.params.resize(size_t(ly.width) * 16);
      for (auto& p : ly.params) p = param_rng.uniform(-0.1, 0.1);
    } else {
      ly.params.resize(size_t(ly.width) << cfg.lut_fanin);
      for (auto& p : ly.params) p = param_rng.uniform();
    }
    prev_width = ly.width;
  }
  return net;
}

SoftForward forward_soft(const SoftNetwork& net, const std::vector<double>& input) {
  if (input.size() != size_t(net.config.input_width))
    throw ArgumentError("forward_soft: input width " +
                        std::to_string(input.size()) + " does not match " +
                        std::to_string(net.config.input_width));
  for (size_t i = 0; i < input.size(); ++i)
    if (!(input[i] >= 0.0 && input[i] <= 1.0))
      throw ArgumentError("forward_soft: input outside [0,1] at index " +
                          std::to_string(i));
  SoftForward out;
  out.activations.resize(net.layers.size());
  const std::vector<double>* prev = &input;
  for (size_t l = 0; l < net.layers.size(); ++l) {
    const Layer& ly = net.layers[l];
    std::vector<double>& act = out.activations[l];
    act.resize(size_t(ly.width));
    if (!net.config.is_lut) {
      for (size_t g = 0; g < size_t(ly.width); ++g) {
        GateLogits logits;
        std::memcpy(logits.data(), ly.params.data() + g * 16, 16 * sizeof(double));
        double x0 = (*prev)[ly.wires[2 * g]];
        double x1 = (*prev)[ly.wires[2 * g + 1]];
        act[g] = clamp01(gate_superposition(logits, x0, x1));
      }
    } else {
      size_t e = lut_entries(ly.fanin);
      std::vector<double> wb(e), lin(size_t(ly.fanin));
      for (size_t n = 0; n < size_t(ly.width); ++n) {
        for (size_t i = 0; i < e; ++i)
          wb[i] = ly.params[n * e + i] >= 0.5 ? 1.0 : 0.0;
        for (size_t j = 0; j < size_t(ly.fanin); ++j)
          lin[j] = (*prev)[ly.wires[n * size_t(ly.fanin) + j]];
        act[n] = clamp01(lut_forward(wb, lin));
      }
    }
    prev = &act;
  }
  size_t classes = size_t(net.config.num_classes);
  size_t group = size_t(net.config.group_size());
  out.scores.resize(classes);
  for (size_t c = 0; c < classes; ++c) {
    double s = 0.0;
    for (size_t i = 0; i < group; ++i) s += (*prev)[c * group + i];
    out.scores[c] = s / net.config.temperature;
  }
  double zmax = out.scores[0];
  for (double z : out.scores) zmax = std::max(zmax, z);
  double sum = 0.0;
  for (double z : out.scores) sum += std::exp(z - zmax);
  out.class_probs.resize(classes);
  for (size_t c = 0; c < classes; ++c)
    out.class_probs[c] = std::exp(out.scores[c] - zmax) / sum;
  return out;
}

int predict_soft(const SoftNetwork& net, const std::vector<double>& input) {
  SoftForward f = forward_soft(net, input);
  return argmax_lowest(f.scores.data(), f.scores.size());
}

std::vector<int> predict_soft_all(const SoftNetwork& net, const Dataset& data) {
  check_dataset(net, data);
  Engine eng(net);
  eng.prepare(net);
  std::vector<int> out(data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    const std::vector<double>& last = eng.forward(net, data.row(i));
    size_t classes = size_t(net.config.num_classes);
    size_t group = size_t(net.config.group_size());
    double best = -1.0;
    int bestc = 0;
    for (size_t c = 0; c < classes; ++c) {
      double s = 0.0;
      for (size_t k = 0; k < group; ++k) s += last[c * group + k];
      if (s > best) {
        best = s;
        bestc = int(c);
      }
    }
    out[i] = bestc;
  }
  return out;
}

double batch_loss(const SoftNetwork& net, const Dataset& data,
                  const std::vector<uint32_t>& rows) {
  if (rows.empty()) throw ArgumentError("batch_loss: no rows");
  check_dataset(net, data);
  Engine eng(net);
  eng.prepare(net);
  double total = 0.0;
  for (uint32_t r : rows) {
    eng.forward(net, data.row(r));
    total += eng.readout(net, int(data.y[r]));
  }
  return total / double(rows.size());
}

BatchGradient batch_loss_and_gradient(const SoftNetwork& net, const Dataset& data,
                                      const std::vector<uint32_t>& rows) {
  if (rows.empty()) throw ArgumentError("batch_loss_and_gradient: no rows");
  check_dataset(net, data);
  Engine eng(net);
  eng.prepare(net);
  double upscale = 1.0 / (net.config.temperature * double(rows.size()));
  double total = 0.0;
  for (uint32_t r : rows)
    total += eng.accumulate(net, data.row(r), int(data.y[r]), upscale);
  BatchGradient out;
  out.loss = total / double(rows.size());
  eng.finish(net, out.grads);
  return out;
}

void train(SoftNetwork& net, const Dataset& data, const EpochCallback& cb) {
  check_dataset(net, data);
  const NetworkConfig& cfg = net.config;
  size_t n = data.size();
  size_t bsz = size_t(cfg.batch_size);

  // Hold out the last batch for reporting when the set is large enough to
  // spare one; tiny toy sets train and report on everything.
  size_t train_count = n >= 2 * bsz ? n - bsz : n;
  std::vector<uint32_t> holdout;
  if (train_count < n)
    for (size_t i = train_count; i < n; ++i) holdout.push_back(uint32_t(i));
  else
    for (size_t i = 0; i < n; ++i) holdout.push_back(uint32_t(i));

  Engine eng(net);

  // Adaptive-moment state, one slot per parameter.
  std::vector<std::vector<double>> m(net.layers.size()), v(net.layers.size());
  for (size_t l = 0; l < net.layers.size(); ++l) {
    m[l].assign(net.layers[l].params.size(), 0.0);
    v[l].assign(net.layers[l].params.size(), 0.0);
  }
  double b1t = 1.0, b2t = 1.0;

  std::vector<uint32_t> order(train_count);
  for (size_t i = 0; i < train_count; ++i) order[i] = uint32_t(i);
  std::vector<std::vector<double>> grads;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng shuffle_rng(mix_seed(cfg.seed, kShuffleTag + uint64_t(epoch)));
    shuffle(order, shuffle_rng);

    double epoch_loss = 0.0;
    size_t batches = (train_count + bsz - 1) / bsz;
    for (size_t b = 0; b < batches; ++b) {
      size_t lo = b * bsz;
      size_t hi = std::min(lo + bsz, train_count);
      size_t count = hi - lo;
      eng.prepare(net);
      double upscale = 1.0 / (cfg.temperature * double(count));
      double batch_total = 0.0;
      for (size_t k = lo; k < hi; ++k)
        batch_total +=
            eng.accumulate(net, data.row(order[k]), int(data.y[order[k]]), upscale);
      if (!std::isfinite(batch_total))
        throw NumericError("train: non-finite loss at epoch " +
                           std::to_string(epoch) + ", batch " + std::to_string(b));
      epoch_loss += batch_total;
      eng.finish(net, grads);

      b1t *= kAdamBeta1;
      b2t *= kAdamBeta2;
      for (size_t l = 0; l < net.layers.size(); ++l) {
        double* p = net.layers[l].params.data();
        double* ml = m[l].data();
        double* vl = v[l].data();
        const double* g = grads[l].data();
        size_t np = net.layers[l].params.size();
        for (size_t i = 0; i < np; ++i) {
          ml[i] = kAdamBeta1 * ml[i] + (1.0 - kAdamBeta1) * g[i];
          vl[i] = kAdamBeta2 * vl[i] + (1.0 - kAdamBeta2) * g[i] * g[i];
          double mh = ml[i] / (1.0 - b1t);
          double vh = vl[i] / (1.0 - b2t);
          p[i] -= cfg.learning_rate * mh / (std::sqrt(vh) + kAdamEps);
        }
        if (cfg.is_lut)
          for (size_t i = 0; i < np; ++i) p[i] = clamp01(p[i]);
      }
    }

    if (cb) {
      eng.prepare(net);
      double hloss = 0.0;
      size_t hits = 0;
      for (uint32_t r : holdout) {
        const std::vector<double>& last = eng.forward(net, data.row(r));
        hloss += eng.readout(net, int(data.y[r]));
        size_t classes = size_t(cfg.num_classes);
        size_t group = size_t(cfg.group_size());
        double best = -1.0;
        int bestc = 0;
        for (size_t c = 0; c < classes; ++c) {
          double s = 0.0;
          for (size_t k = 0; k < group; ++k) s += last[c * group + k];
          if (s > best) {
            best = s;
            bestc = int(c);
          }
        }
        hits += size_t(bestc == int(data.y[r]));
      }
      EpochStats stats;
      stats.epoch = epoch;
      stats.train_loss = epoch_loss / double(train_count);
      stats.holdout_loss = hloss / double(holdout.size());
      stats.holdout_accuracy = double(hits) / double(holdout.size());
      cb(net, stats);
    }
  }
}

HardNetwork discretize(const SoftNetwork& net) {
  HardNetwork hard;
  hard.config = net.config;
  hard.layers.resize(net.layers.size());
  for (size_t l = 0; l < net.layers.size(); ++l) {
    const Layer& ly = net.layers[l];
    HardLayer& h = hard.layers[l];
    h.width = ly.width;
    h.fanin = ly.fanin;
    h.wires = ly.wires;
    if (!net.config.is_lut) {
      h.choice.resize(size_t(ly.width));
      for (size_t g = 0; g < size_t(ly.width); ++g) {
        // Softmax is monotone, so the argmax over probabilities is the
        // argmax over logits; ties break to the lowest gate index.
        const double* w = ly.params.data() + 16 * g;
        int best = 0;
        for (int i = 1; i < 16; ++i)
          if (w[i] > w[best]) best = i;
        h.choice[g] = uint8_t(best);
      }
    } else {
      h.choice.resize(ly.params.size());
      for (size_t i = 0; i < ly.params.size(); ++i)
        h.choice[i] = ly.params[i] >= 0.5 ? 1 : 0;
    }
  }
  return hard;
}

HardForward forward_hard(const HardNetwork& net, const std::vector<uint8_t>& bits) {
  if (bits.size() != size_t(net.config.input_width))
    throw ArgumentError("forward_hard: input width " +
                        std::to_string(bits.size()) + " does not match " +
                        std::to_string(net.config.input_width));
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i] > 1)
      throw ArgumentError("forward_hard: non-binary input at index " +
                          std::to_string(i));
  std::vector<uint8_t> prev = bits, act;
  for (const HardLayer& ly : net.layers) {
    act.assign(size_t(ly.width), 0);
    if (!net.config.is_lut) {
      for (size_t g = 0; g < size_t(ly.width); ++g)
        act[g] = uint8_t(gate_eval_bit(int(ly.choice[g]), prev[ly.wires[2 * g]],
                                       prev[ly.wires[2 * g + 1]]));
    } else {
      size_t e = lut_entries(ly.fanin);
      for (size_t n = 0; n < size_t(ly.width); ++n) {
        size_t idx = 0;
        for (size_t j = 0; j < size_t(ly.fanin); ++j)
          idx = (idx << 1) | prev[ly.wires[n * size_t(ly.fanin) + j]];
        act[n] = ly.choice[n * e + idx];
      }
    }
    prev.swap(act);
  }
  HardForward out;
  size_t classes = size_t(net.config.num_classes);
  size_t group = size_t(net.config.group_size());
  out.group_counts.assign(classes, 0);
  for (size_t c = 0; c < classes; ++c)
    for (size_t i = 0; i < group; ++i)
      out.group_counts[c] += prev[c * group + i];
  out.predicted_class =
      argmax_lowest_u64(out.group_counts.data(), out.group_counts.size());
  return out;
}

std::vector<int> predict_hard_all(const HardNetwork& net, const Dataset& data) {
  if (data.input_width != net.config.input_width)
    throw ArgumentError("predict_hard_all: dataset width " +
                        std::to_string(data.input_width) + " does not match " +
                        std::to_string(net.config.input_width));
  std::vector<int> out(data.size());
  std::vector<uint8_t> bits(size_t(data.input_width));
  for (size_t i = 0; i < data.size(); ++i) {
    const float* row = data.row(i);
    for (size_t j = 0; j < bits.size(); ++j) {
      if (row[j] == 0.0f)
        bits[j] = 0;
      else if (row[j] == 1.0f)
        bits[j] = 1;
      else
        throw ArgumentError("predict_hard_all: non-binary feature at row " +
                            std::to_string(i));
    }
    out[i] = forward_hard(net, bits).predicted_class;
  }
  return out;
}

}  // namespace lgn
