#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "lgn/common.hpp"
#include "lgn/ecg.hpp"

namespace lgn {

namespace {

// Beat analysis windows, in samples around the R peak.
constexpr int64_t kBeatHalf = 90;    // beat window [R0-90, R0+90)
constexpr int64_t kWideHalf = 200;   // crest-factor window [R0-200, R0+200)
constexpr int kBeatLen = 180;
constexpr int kDeltaPoints = 75;     // downsampled beat window; 74 deltas

// Sub-windows of the beat window for the morphological distances. M3 is
// computed for completeness but not emitted.
constexpr int kMorphRange[4][2] = {{0, 40}, {65, 85}, {95, 105}, {150, 180}};

// Local mean RR below this many samples means a rate above 100 bpm
// (60 s/min * 360 samples/s / 100 bpm).
constexpr double kTachycardiaRr = 216.0;

double crest_factor(const int32_t* x, size_t n) {
  double peak = 0.0, energy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double v = double(x[i]);
    peak = std::max(peak, std::fabs(v));
    energy += v * v;
  }
  if (energy == 0.0) return 0.0;
  return peak / std::sqrt(energy / double(n));
}

void put_bits(uint8_t* bits, size_t& pos, uint32_t value, int width) {
  for (int b = width - 1; b >= 0; --b) bits[pos++] = uint8_t((value >> b) & 1);
}

}  // namespace

void LocalRrState::push(int64_t rr) {
  if (buf_.size() < kWindow) {
    buf_.push_back(rr);
  } else {
    int64_t old = buf_[head_];
    sum_ -= old;
    sum_sq_ -= old * old;
    buf_[head_] = rr;
    head_ = (head_ + 1) % kWindow;
  }
  sum_ += rr;
  sum_sq_ += rr * rr;
}

double LocalRrState::mean(int64_t fallback_rr) const {
  if (buf_.empty()) return double(fallback_rr);
  return double(sum_) / double(buf_.size());
}

double LocalRrState::stddev() const {
  if (buf_.empty()) return 0.0;
  double n = double(buf_.size());
  double m = double(sum_) / n;
  double var = double(sum_sq_) / n - m * m;
  return std::sqrt(std::max(0.0, var));
}

uint8_t encode_rr(int64_t rr_samples) {
  int64_t v = std::clamp<int64_t>(rr_samples, 0, 2047);
  return uint8_t(v / 8);
}

uint8_t encode_m(double m) {
  if (!(m > 0.0)) return 0;
  return uint8_t(std::min(7.0, std::floor(m * 8.0)));
}

uint8_t encode_cf(double cf) {
  if (!(cf > 0.0)) return 0;
  return uint8_t(std::min(255.0, std::floor(cf * 32.0)));
}

std::vector<Beat> beat_annotations(const EcgRecord& record) {
  std::vector<Beat> beats;
  for (const WfdbAnnotation& a : record.annotations) {
    AamiClass cls = map_aami(a.symbol);
    if (cls == AamiClass::kExcluded) continue;
    beats.push_back({a.sample, cls});
  }
  return beats;
}

bool beat_extractable(const EcgRecord& record, const std::vector<Beat>& beats,
                      size_t index) {
  if (index < 3 || index + 1 >= beats.size()) return false;
  uint64_t r0 = beats[index].sample;
  if (r0 < uint64_t(kWideHalf)) return false;
  if (r0 + uint64_t(kWideHalf) > record.samples.size()) return false;
  for (size_t k = index - 2; k <= index + 1; ++k)
    if (beats[k].sample <= beats[k - 1].sample) return false;
  return true;
}

BeatFeatures extract_features(const EcgRecord& record,
                              const std::vector<Beat>& beats, size_t index,
                              const LocalRrState& state) {
  if (!beat_extractable(record, beats, index))
    throw ArgumentError("extract_features: beat " + std::to_string(index) +
                        " has no valid context");
  int64_t r0 = int64_t(beats[index].sample);
  int64_t rr1 = int64_t(beats[index + 1].sample) - r0;
  int64_t rr2 = r0 - int64_t(beats[index - 1].sample);
  int64_t rr3 = int64_t(beats[index - 1].sample) -
                int64_t(beats[index - 2].sample);
  int64_t rr4 = int64_t(beats[index - 2].sample) -
                int64_t(beats[index - 3].sample);

  double m = state.mean(rr2);
  double s = state.stddev();
  // Thresholded quantities are rounded to float once and both the real and
  // binary variants derive from that value, so quantizing a real feature
  // always reproduces its binary field exactly.
  float cv = float(std::min(s / m, 1.0));  // m >= 1: RR intervals are integers
  float ratio = float(std::min(double(rr1) / m, 1.0));
  int d_rr_p = rr1 > rr2;
  int d_rr_m = rr2 > rr3;
  int t_b = m < kTachycardiaRr;

  const int32_t* beat = record.samples.data() + (r0 - kBeatHalf);
  int32_t bmin = beat[0], bmax = beat[0];
  for (int i = 1; i < kBeatLen; ++i) {
    bmin = std::min(bmin, beat[i]);
    bmax = std::max(bmax, beat[i]);
  }
  BeatFeatures f;
  f.label = beats[index].label;
  int32_t norm = bmax - bmin;
  f.degenerate = norm == 0;
  float morph[4] = {0, 0, 0, 0};
  if (norm != 0) {
    int32_t at_r0 = beat[kBeatHalf];
    for (int k = 0; k < 4; ++k) {
      int32_t wmin = beat[kMorphRange[k][0]];
      for (int i = kMorphRange[k][0] + 1; i < kMorphRange[k][1]; ++i)
        wmin = std::min(wmin, beat[i]);
      morph[k] = float(double(std::abs(at_r0 - wmin)) / double(norm));
    }
  }
  float cf1 = float(std::min(crest_factor(beat, kBeatLen) / 8.0, 1.0));
  float cf2 = float(std::min(
      crest_factor(record.samples.data() + (r0 - kWideHalf),
                   size_t(2 * kWideHalf)) / 8.0, 1.0));

  uint8_t delta[kDeltaPoints - 1];
  for (int k = 0; k + 1 < kDeltaPoints; ++k) {
    int32_t a = beat[(k * kBeatLen) / kDeltaPoints];
    int32_t b = beat[((k + 1) * kBeatLen) / kDeltaPoints];
    delta[k] = b > a;
  }

  size_t pos = 0;
  put_bits(f.bits.data(), pos, encode_rr(rr1), 8);
  put_bits(f.bits.data(), pos, encode_rr(rr2), 8);
  put_bits(f.bits.data(), pos, encode_rr(rr3), 8);
  put_bits(f.bits.data(), pos, encode_rr(rr4), 8);
  f.bits[pos++] = uint8_t(d_rr_p);
  f.bits[pos++] = uint8_t(d_rr_m);
  f.bits[pos++] = cv < 0.5f;
  f.bits[pos++] = cv < 0.1f;
  f.bits[pos++] = ratio < 0.25f;
  f.bits[pos++] = ratio < 0.5f;
  f.bits[pos++] = uint8_t(t_b);
  put_bits(f.bits.data(), pos, encode_m(morph[0]), 3);
  put_bits(f.bits.data(), pos, encode_m(morph[1]), 3);
  put_bits(f.bits.data(), pos, encode_m(morph[3]), 3);
  put_bits(f.bits.data(), pos, encode_cf(double(cf1) * 8.0), 8);
  put_bits(f.bits.data(), pos, encode_cf(double(cf2) * 8.0), 8);
  for (int k = 0; k + 1 < kDeltaPoints; ++k) f.bits[pos++] = delta[k];
  if (pos != kBinaryFeatureBits)
    throw NumericError("extract_features: bit layout error");

  size_t rp = 0;
  f.reals[rp++] = float(std::min<int64_t>(rr1, 2048)) / 2048.0f;
  f.reals[rp++] = float(std::min<int64_t>(rr2, 2048)) / 2048.0f;
  f.reals[rp++] = float(std::min<int64_t>(rr3, 2048)) / 2048.0f;
  f.reals[rp++] = float(std::min<int64_t>(rr4, 2048)) / 2048.0f;
  f.reals[rp++] = float(d_rr_p);
  f.reals[rp++] = float(d_rr_m);
  f.reals[rp++] = cv;
  f.reals[rp++] = ratio;
  f.reals[rp++] = float(t_b);
  f.reals[rp++] = morph[0];
  f.reals[rp++] = morph[1];
  f.reals[rp++] = morph[3];
  f.reals[rp++] = cf1;
  f.reals[rp++] = cf2;
  for (int k = 0; k + 1 < kDeltaPoints; ++k) f.reals[rp++] = float(delta[k]);
  f.reals[rp++] = float(std::min(double(rr2) / m, 1.0));
  if (rp != kRealFeatureCount)
    throw NumericError("extract_features: real layout error");
  return f;
}

EcgDataset build_dataset(const std::vector<EcgRecord>& records) {
  if (records.empty()) throw ArgumentError("build_dataset: no records");
  EcgDataset out;
  out.binary.input_width = kBinaryFeatureBits;
  out.real.input_width = kRealFeatureCount;
  for (const EcgRecord& rec : records) {
    std::vector<Beat> beats = beat_annotations(rec);
    for (const Beat& b : beats) ++out.class_counts[size_t(b.label)];
    LocalRrState state;
    for (size_t k = 1; k < beats.size(); ++k) {
      int64_t rr2 = int64_t(beats[k].sample) - int64_t(beats[k - 1].sample);
      if (beats[k].label != AamiClass::kQ &&
          beat_extractable(rec, beats, k)) {
        BeatFeatures f = extract_features(rec, beats, k, state);
        for (uint8_t b : f.bits) out.binary.x.push_back(float(b));
        out.binary.y.push_back(uint8_t(f.label));
        for (float v : f.reals) out.real.x.push_back(v);
        out.real.y.push_back(uint8_t(f.label));
        ++out.emitted;
      }
      if (rr2 > 0) state.push(rr2);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Feature files
// ---------------------------------------------------------------------------

namespace {
constexpr char kPackedMagic[8] = {'L', 'G', 'N', 'F', 'E', 'A', 'T', 'B'};
constexpr size_t kPackedRowBytes = (kBinaryFeatureBits + 7) / 8;  // 18
}  // namespace

void write_packed_features(const std::string& path, const Dataset& binary) {
  if (binary.input_width != kBinaryFeatureBits)
    throw ArgumentError("write_packed_features: dataset width " +
                        std::to_string(binary.input_width) + " is not " +
                        std::to_string(kBinaryFeatureBits));
  std::vector<uint8_t> bytes;
  bytes.reserve(16 + binary.size() * (kPackedRowBytes + 1));
  bytes.insert(bytes.end(), kPackedMagic, kPackedMagic + 8);
  uint64_t rows = binary.size();
  for (int b = 0; b < 8; ++b) bytes.push_back(uint8_t(rows >> (8 * b)));
  for (size_t i = 0; i < binary.size(); ++i) {
    const float* row = binary.row(i);
    uint8_t packed[kPackedRowBytes] = {0};
    for (size_t k = 0; k < kBinaryFeatureBits; ++k) {
      if (row[k] != 0.0f && row[k] != 1.0f)
        throw ArgumentError("write_packed_features: non-binary value in row " +
                            std::to_string(i));
      if (row[k] == 1.0f) packed[k / 8] |= uint8_t(1u << (k % 8));
    }
    bytes.insert(bytes.end(), packed, packed + kPackedRowBytes);
    bytes.push_back(binary.y[i]);
  }
  write_file_atomic(path, bytes);
}

Dataset read_packed_features(const std::string& path) {
  std::vector<uint8_t> bytes = read_file(path);
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kPackedMagic, 8) != 0)
    throw ParseError(path + ": not a packed feature file");
  uint64_t rows = 0;
  for (int b = 0; b < 8; ++b) rows |= uint64_t(bytes[8 + b]) << (8 * b);
  size_t expected = 16 + size_t(rows) * (kPackedRowBytes + 1);
  if (bytes.size() != expected)
    throw ParseError(path + ": is " + std::to_string(bytes.size()) +
                     " bytes; expected " + std::to_string(expected) + " for " +
                     std::to_string(rows) + " rows");
  Dataset d;
  d.input_width = kBinaryFeatureBits;
  d.x.reserve(size_t(rows) * kBinaryFeatureBits);
  d.y.reserve(size_t(rows));
  const uint8_t* p = bytes.data() + 16;
  for (uint64_t i = 0; i < rows; ++i, p += kPackedRowBytes + 1) {
    for (size_t k = 0; k < kBinaryFeatureBits; ++k)
      d.x.push_back(float((p[k / 8] >> (k % 8)) & 1));
    if ((p[kPackedRowBytes - 1] >> (kBinaryFeatureBits % 8)) != 0)
      throw ParseError(path + ": nonzero padding bits in row " +
                       std::to_string(i));
    uint8_t label = p[kPackedRowBytes];
    if (label >= 4)
      throw ParseError(path + ": label " + std::to_string(label) +
                       " out of range in row " + std::to_string(i));
    d.y.push_back(label);
  }
  return d;
}

std::string features_csv(const Dataset& real) {
  if (real.input_width != kRealFeatureCount)
    throw ArgumentError("features_csv: dataset width " +
                        std::to_string(real.input_width) + " is not " +
                        std::to_string(kRealFeatureCount));
  std::string s =
      "rr1,rr2,rr3,rr4,drr_p,drr_m,cv,rr1_over_m,t_b,m1,m2,m4,cf1,cf2";
  for (int k = 0; k < 74; ++k) s += ",delta_" + std::to_string(k);
  s += ",rr2_over_m,label\n";
  char buf[32];
  for (size_t i = 0; i < real.size(); ++i) {
    const float* row = real.row(i);
    for (size_t j = 0; j < kRealFeatureCount; ++j) {
      std::snprintf(buf, sizeof buf, "%.9g", double(row[j]));
      s += buf;
      s += ',';
    }
    s += std::to_string(int(real.y[i]));
    s += '\n';
  }
  return s;
}

Dataset parse_features_csv(const std::string& text) {
  Dataset d;
  d.input_width = kRealFeatureCount;
  size_t pos = 0, line_no = 0;
  auto next_line = [&](std::string& line) {
    if (pos >= text.size()) return false;
    size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pos = end + 1;
    ++line_no;
    return true;
  };
  std::string line;
  if (!next_line(line) || line.rfind("rr1,rr2,", 0) != 0 ||
      line.find(",rr2_over_m,label") == std::string::npos)
    throw ParseError("feature CSV: missing or wrong header");
  while (next_line(line)) {
    if (line.empty()) continue;
    const char* c = line.c_str();
    for (size_t j = 0; j < kRealFeatureCount; ++j) {
      char* end = nullptr;
      float v = std::strtof(c, &end);
      if (end == c || *end != ',')
        throw ParseError("feature CSV line " + std::to_string(line_no) +
                         ": expected " + std::to_string(kRealFeatureCount) +
                         " values and a label");
      if (!(v >= 0.0f && v <= 1.0f))
        throw ParseError("feature CSV line " + std::to_string(line_no) +
                         ": value out of [0, 1]");
      d.x.push_back(v);
      c = end + 1;
    }
    char* end = nullptr;
    long label = std::strtol(c, &end, 10);
    if (end == c || *end != '\0' || label < 0 || label >= 4)
      throw ParseError("feature CSV line " + std::to_string(line_no) +
                       ": bad label");
    d.y.push_back(uint8_t(label));
  }
  return d;
}

}  // namespace lgn
