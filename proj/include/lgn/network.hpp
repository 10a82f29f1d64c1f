#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lgn/common.hpp"
#include "lgn/gates.hpp"
#include "lgn/lut.hpp"

namespace lgn {

/**
 * Architecture plus training hyperparameters. All layers share one neuron
 * kind: 16-way gate superpositions (is_lut = false, fan-in fixed at 2) or
 * N-input LUTs (is_lut = true, fan-in = lut_fanin).
 *
 * In checkpoints the `epochs` field records how many epochs the stored
 * parameters have been trained for; in a fresh config it is the target.
 */
struct NetworkConfig {
  std::vector<uint64_t> layer_sizes;
  bool is_lut = false;
  int lut_fanin = 2;
  uint64_t input_width = 0;
  int num_classes = 4;
  double temperature = 1.0;
  uint64_t seed = 1;
  double learning_rate = 0.01;
  int epochs = 200;
  int batch_size = 100;

  int fanin() const { return is_lut ? lut_fanin : 2; }
  uint64_t group_size() const {
    return layer_sizes.empty() ? 0 : layer_sizes.back() / uint64_t(num_classes);
  }
};

/** Throws ArgumentError when any invariant is violated. */
void validate_config(const NetworkConfig& cfg);

/**
 * One layer: fixed fan-in wiring into the previous layer's outputs plus
 * trainable parameters — 16 logits per gate neuron, or 2^fanin weights in
 * [0,1] per LUT neuron.
 */
struct Layer {
  uint64_t width = 0;
  int fanin = 2;
  std::vector<uint32_t> wires;   // width * fanin indices
  std::vector<double> params;    // width * 16 logits, or width * 2^fanin weights
};

struct SoftNetwork {
  NetworkConfig config;
  std::vector<Layer> layers;
};

/** Fully binary parameters: a chosen gate id, or one bit per LUT entry. */
struct HardLayer {
  uint64_t width = 0;
  int fanin = 2;
  std::vector<uint32_t> wires;
  std::vector<uint8_t> choice;   // width gate ids, or width * 2^fanin bits
};

struct HardNetwork {
  NetworkConfig config;
  std::vector<HardLayer> layers;
};

/**
 * Builds the network: wiring drawn uniformly (with replacement) per neuron
 * input, gate logits ~ U(-0.1, 0.1), LUT weights ~ U(0, 1). Everything is a
 * pure function of the config (seeded per layer), so identical configs give
 * identical networks.
 */
SoftNetwork build_network(const NetworkConfig& cfg);

struct SoftForward {
  std::vector<double> scores;       // per class: group activation sum / T
  std::vector<double> class_probs;  // softmax(scores)
  std::vector<std::vector<double>> activations;  // per layer
};

/**
 * Reference forward pass on one input in [0,1]^input_width. LUT layers
 * evaluate with their 0.5-thresholded binary weights (the training-time
 * forward); gate layers evaluate the full 16-gate superposition.
 */
SoftForward forward_soft(const SoftNetwork& net, const std::vector<double>& input);

/** Argmax class of the group activation sums; ties go to the lowest index. */
int predict_soft(const SoftNetwork& net, const std::vector<double>& input);

/** Labeled feature rows, row-major; values must lie in [0,1]. */
struct Dataset {
  uint64_t input_width = 0;
  std::vector<float> x;
  std::vector<uint8_t> y;
  size_t size() const { return y.size(); }
  const float* row(size_t i) const { return x.data() + i * input_width; }
};

/** Reference-path predictions for a whole dataset. */
std::vector<int> predict_soft_all(const SoftNetwork& net, const Dataset& data);

/** Mean cross-entropy of the listed rows under the current parameters. */
double batch_loss(const SoftNetwork& net, const Dataset& data,
                  const std::vector<uint32_t>& rows);

struct BatchGradient {
  double loss = 0.0;
  std::vector<std::vector<double>> grads;  // same shapes as layer params
};

/**
 * Mean cross-entropy and its parameter gradient over the listed rows.
 * LUT layers run the binarized forward with straight-through gradients.
 */
BatchGradient batch_loss_and_gradient(const SoftNetwork& net, const Dataset& data,
                                      const std::vector<uint32_t>& rows);

struct EpochStats {
  int epoch = 0;            // 1-based, after this epoch's updates
  double train_loss = 0.0;  // mean over this epoch's batches
  double holdout_loss = 0.0;
  double holdout_accuracy = 0.0;
};

using EpochCallback = std::function<void(const SoftNetwork&, const EpochStats&)>;

/**
 * Mini-batch cross-entropy training with adaptive-moment updates
 * (lr = config.learning_rate, betas 0.9/0.999). The per-epoch shuffle is
 * seeded by (config.seed, epoch), so a shorter run is an exact prefix of a
 * longer one with the same config. When the dataset holds at least two
 * batches, the last batch_size rows are held out of the updates and report
 * loss/accuracy per epoch; smaller sets train on everything and report on
 * everything. LUT weights are clamped to [0,1] after every step.
 */
void train(SoftNetwork& net, const Dataset& data, const EpochCallback& cb = {});

/**
 * Argmax gate per neuron (lowest index on ties) or 0.5-thresholded LUT bits.
 */
HardNetwork discretize(const SoftNetwork& net);

struct HardForward {
  int predicted_class = 0;
  std::vector<uint64_t> group_counts;
};

/** Pure boolean evaluation; input bits must be 0 or 1. */
HardForward forward_hard(const HardNetwork& net, const std::vector<uint8_t>& bits);

std::vector<int> predict_hard_all(const HardNetwork& net, const Dataset& data);

// ---- checkpoint container (versioned binary, little-endian) ----

std::vector<uint8_t> serialize_checkpoint(const SoftNetwork& net);
std::vector<uint8_t> serialize_checkpoint(const HardNetwork& net);

struct LoadedCheckpoint {
  bool hard = false;
  std::optional<SoftNetwork> soft;
  std::optional<HardNetwork> hardnet;
};

/** Validates magic, version, checksum and shapes; throws ParseError. */
LoadedCheckpoint parse_checkpoint(const std::vector<uint8_t>& bytes);

}  // namespace lgn
