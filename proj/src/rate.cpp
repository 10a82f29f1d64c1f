#include "lgn/rate.hpp"

#include <cmath>
#include <cstdio>

#include "lgn/common.hpp"
#include "lgn/metrics.hpp"
#include "lgn/rng.hpp"

namespace lgn {

namespace {

// Seed-stream tags, disjoint from the training-side tag domains.
constexpr uint64_t kStreamTag = 0x400000000ull;  // + input line
constexpr uint64_t kSampleTag = 0x500000000ull;  // + sample index

// All 16 two-input gate functions applied to 64 packed samples at once.
uint64_t gate_word(int op, uint64_t a, uint64_t b) {
  switch (op) {
    case 0: return 0;
    case 1: return a & b;
    case 2: return a & ~b;
    case 3: return a;
    case 4: return ~a & b;
    case 5: return b;
    case 6: return a ^ b;
    case 7: return a | b;
    case 8: return ~(a | b);
    case 9: return ~(a ^ b);
    case 10: return ~b;
    case 11: return a | ~b;
    case 12: return ~a;
    case 13: return ~a | b;
    case 14: return ~(a & b);
    case 15: return ~0ull;
    default: throw ArgumentError("infer_rate: gate id out of range");
  }
}

}  // namespace

BitStreamBatch encode_stream(const std::vector<double>& rates, uint64_t length,
                             uint64_t seed) {
  if (length < 1) throw ArgumentError("encode_stream: length must be >= 1");
  for (size_t j = 0; j < rates.size(); ++j)
    if (!(rates[j] >= 0.0 && rates[j] <= 1.0))
      throw ArgumentError("encode_stream: rate at index " + std::to_string(j) +
                          " is outside [0, 1]");
  BitStreamBatch batch;
  batch.length = length;
  batch.width = rates.size();
  batch.seed = seed;
  batch.words_per_line = size_t((length + 63) / 64);
  batch.words.assign(rates.size() * batch.words_per_line, 0);
  for (size_t j = 0; j < rates.size(); ++j) {
    Rng rng(mix_seed(seed, kStreamTag + j));
    uint64_t* line = batch.words.data() + j * batch.words_per_line;
    for (uint64_t t = 0; t < length; ++t)
      if (rng.bernoulli(rates[j])) line[t / 64] |= uint64_t(1) << (t % 64);
  }
  return batch;
}

RateInference infer_rate(const HardNetwork& net, const BitStreamBatch& batch) {
  if (batch.width != net.config.input_width)
    throw ArgumentError("infer_rate: stream width " +
                        std::to_string(batch.width) + " does not match " +
                        std::to_string(net.config.input_width));
  if (net.layers.empty()) throw ArgumentError("infer_rate: empty network");
  size_t words = batch.words_per_line;

  std::vector<uint64_t> prev = batch.words, act;
  std::vector<uint64_t> mux;  // LUT reduction scratch
  for (const HardLayer& ly : net.layers) {
    act.assign(size_t(ly.width) * words, 0);
    if (!net.config.is_lut) {
      for (size_t g = 0; g < size_t(ly.width); ++g) {
        const uint64_t* a = prev.data() + size_t(ly.wires[2 * g]) * words;
        const uint64_t* b = prev.data() + size_t(ly.wires[2 * g + 1]) * words;
        uint64_t* o = act.data() + g * words;
        int op = ly.choice[g];
        for (size_t w = 0; w < words; ++w) o[w] = gate_word(op, a[w], b[w]);
      }
    } else {
      int fanin = ly.fanin;
      size_t e = size_t(1) << fanin;
      mux.resize(e);
      for (size_t n = 0; n < size_t(ly.width); ++n) {
        const uint32_t* wires = ly.wires.data() + n * size_t(fanin);
        const uint8_t* truth = ly.choice.data() + n * e;
        uint64_t* o = act.data() + n * words;
        for (size_t w = 0; w < words; ++w) {
          // Mux reduction over packed words; wire j carries address weight
          // 2^(fanin-1-j), matching the hard evaluation index.
          for (size_t k = 0; k < e; ++k) mux[k] = truth[k] ? ~0ull : 0;
          for (int j = fanin - 1; j >= 0; --j) {
            uint64_t sel = prev[size_t(wires[j]) * words + w];
            size_t half = size_t(1) << j;
            for (size_t k = 0; k < half; ++k)
              mux[k] = (~sel & mux[2 * k]) | (sel & mux[2 * k + 1]);
          }
          o[w] = mux[0];
        }
      }
    }
    prev.swap(act);
  }

  // Padding bits beyond L in the last word are zero in the encoded input but
  // may be set by inverting gates; mask them out of the counts.
  uint64_t tail = batch.length % 64;
  uint64_t tail_mask = tail ? ((~0ull) >> (64 - tail)) : ~0ull;

  const HardLayer& lastly = net.layers.back();
  RateInference out;
  out.counters.assign(size_t(lastly.width), 0);
  for (size_t g = 0; g < size_t(lastly.width); ++g) {
    uint32_t c = 0;
    for (size_t w = 0; w < words; ++w) {
      uint64_t bits = prev[g * words + w];
      if (w + 1 == words) bits &= tail_mask;
      c += uint32_t(__builtin_popcountll(bits));
      if (c > 255) { c = 255; break; }
    }
    out.counters[g] = uint8_t(c);
  }

  size_t classes = size_t(net.config.num_classes);
  size_t group = size_t(net.config.group_size());
  out.group_counter_sums.assign(classes, 0);
  for (size_t c = 0; c < classes; ++c)
    for (size_t i = 0; i < group; ++i)
      out.group_counter_sums[c] += out.counters[c * group + i];
  out.predicted_class = 0;
  for (size_t c = 1; c < classes; ++c)
    if (out.group_counter_sums[c] > out.group_counter_sums[size_t(out.predicted_class)])
      out.predicted_class = int(c);
  return out;
}

std::vector<int> predict_rate_all(const HardNetwork& net,
                                  const Dataset& features, uint64_t length,
                                  uint64_t seed) {
  if (length < 1)
    throw ArgumentError("predict_rate_all: stream length must be >= 1");
  if (features.size() == 0)
    throw ArgumentError("predict_rate_all: empty feature set");
  if (features.input_width != net.config.input_width)
    throw ArgumentError("predict_rate_all: feature width " +
                        std::to_string(features.input_width) +
                        " does not match " +
                        std::to_string(net.config.input_width));
  std::vector<int> preds(features.size());
  std::vector<double> rates(size_t(features.input_width));
  for (size_t i = 0; i < features.size(); ++i) {
    const float* row = features.row(i);
    for (size_t j = 0; j < rates.size(); ++j) rates[j] = double(row[j]);
    BitStreamBatch batch =
        encode_stream(rates, length, mix_seed(seed, kSampleTag + i));
    preds[i] = infer_rate(net, batch).predicted_class;
  }
  return preds;
}

std::vector<RateSweepRow> rate_sweep(const HardNetwork& net,
                                     const Dataset& features,
                                     const std::vector<uint64_t>& lengths,
                                     uint64_t seed) {
  if (lengths.empty()) throw ArgumentError("rate_sweep: no stream lengths");

  std::vector<int> labels(features.size());
  for (size_t i = 0; i < features.size(); ++i) labels[i] = features.y[i];

  std::vector<RateSweepRow> rows;
  for (uint64_t L : lengths) {
    std::vector<int> preds = predict_rate_all(net, features, L, seed);
    RateSweepRow r;
    r.length = L;
    size_t correct = 0;
    for (size_t i = 0; i < preds.size(); ++i)
      if (preds[i] == labels[i]) ++correct;
    r.accuracy = double(correct) / double(preds.size());
    if (net.config.num_classes == kNumClasses)
      r.jk = jk_index(confusion(preds, labels));
    rows.push_back(r);
  }
  return rows;
}

std::string rate_sweep_csv(const std::vector<RateSweepRow>& rows,
                           uint64_t seed) {
  std::string s = "L,accuracy,jk_index,seed\n";
  char buf[128];
  for (const RateSweepRow& r : rows) {
    if (r.jk.has_value())
      std::snprintf(buf, sizeof buf, "%llu,%.6f,%.6f,%llu\n",
                    static_cast<unsigned long long>(r.length), r.accuracy,
                    *r.jk, static_cast<unsigned long long>(seed));
    else
      std::snprintf(buf, sizeof buf, "%llu,%.6f,undefined,%llu\n",
                    static_cast<unsigned long long>(r.length), r.accuracy,
                    static_cast<unsigned long long>(seed));
    s += buf;
  }
  return s;
}

}  // namespace lgn
