#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lgn/network.hpp"

namespace lgn {

/**
 * A batch of stochastic bit streams, one per input line, packed 64 time
 * steps per word (step t lives in word t/64, bit t%64). Padding bits in the
 * final word of each line are zero.
 */
struct BitStreamBatch {
  uint64_t length = 0;  // time steps L
  uint64_t width = 0;   // input lines
  uint64_t seed = 0;
  size_t words_per_line = 0;
  std::vector<uint64_t> words;  // line-major: words[line * words_per_line + w]

  int bit(size_t line, size_t step) const {
    return int((words[line * words_per_line + step / 64] >> (step % 64)) & 1);
  }
};

/**
 * Draws an independent Bernoulli(rates[j]) bit per line per time step. Each
 * line uses its own deterministic generator stream, so a longer encoding of
 * the same (rates, seed) extends a shorter one step-for-step.
 */
BitStreamBatch encode_stream(const std::vector<double>& rates, uint64_t length,
                             uint64_t seed);

/** Result of a finite-stream inference. */
struct RateInference {
  int predicted_class = 0;
  /** One 8-bit saturating counter of ones per final-layer gate. */
  std::vector<uint8_t> counters;
  /** Per-class sums of the group's counters; argmax (lowest index) wins. */
  std::vector<uint32_t> group_counter_sums;
};

/**
 * Runs the hard network once per time step (64 steps evaluated per word op)
 * and counts ones at every final-layer gate in a saturating 8-bit counter.
 * With length 1 this is exactly forward_hard on the single drawn sample.
 */
RateInference infer_rate(const HardNetwork& net, const BitStreamBatch& batch);

/**
 * Rate-coded prediction for every row at one stream length. Each sample
 * draws its streams from a seed derived from (seed, sample index), so the
 * streams for one sample agree across lengths.
 */
std::vector<int> predict_rate_all(const HardNetwork& net,
                                  const Dataset& features, uint64_t length,
                                  uint64_t seed);

struct RateSweepRow {
  uint64_t length = 0;
  double accuracy = 0.0;
  /** Populated only for networks with the 4-class readout. */
  std::optional<double> jk;
};

/** Accuracy (and jκ for 4-class readouts) at each stream length. */
std::vector<RateSweepRow> rate_sweep(const HardNetwork& net,
                                     const Dataset& features,
                                     const std::vector<uint64_t>& lengths,
                                     uint64_t seed);

/** CSV table: header L,accuracy,jk_index,seed; "undefined" where jκ is. */
std::string rate_sweep_csv(const std::vector<RateSweepRow>& rows,
                           uint64_t seed);

}  // namespace lgn
