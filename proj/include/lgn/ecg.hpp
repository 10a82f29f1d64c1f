#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lgn/network.hpp"
#include "lgn/wfdb.hpp"

namespace lgn {

/**
 * One MIT-BIH record reduced to what the pipeline needs: the first channel
 * zero-centered (raw digital value minus the header's ADC zero) and all
 * annotations. Sampling rate is 360 Hz for every record in the database.
 */
struct EcgRecord {
  int record_id = 0;
  double sampling_rate = 360.0;
  std::vector<int32_t> samples;
  std::vector<WfdbAnnotation> annotations;
};

/**
 * Reads a record from a format-212 signal file plus binary annotation file
 * (the header is found by swapping the signal file's extension for ".hea"),
 * or from the CSV fallback when both paths end in ".csv": signal rows
 * "sample_index,value", annotation rows "sample_index,symbol". The record id
 * is the header's record name (WFDB) or the leading digits of the signal
 * file name (CSV).
 */
EcgRecord read_record(const std::string& signal_path,
                      const std::string& annotation_path);

/** Writes the CSV fallback representation read back by read_record. */
void write_record_csv(const EcgRecord& record, const std::string& signal_path,
                      const std::string& annotation_path);

/**
 * The inter-patient split: DS1 trains, DS2 tests, 22 records each; the four
 * paced records (102, 104, 107, 217) belong to neither.
 */
struct InterPatientSplit {
  std::vector<int> ds1;
  std::vector<int> ds2;
};
InterPatientSplit split_inter_patient();

/** AAMI beat classes; Q is counted but dropped from emitted datasets. */
enum class AamiClass { kN = 0, kS = 1, kV = 2, kF = 3, kQ = 4, kExcluded = 5 };

/** Maps an annotation symbol to its AAMI class (non-beat → kExcluded). */
AamiClass map_aami(char symbol);

/**
 * Running statistics over the last 500 RR2 intervals. Sums are integer, so
 * the incremental mean/std are exact. While empty, mean() falls back to the
 * caller-supplied current interval and stddev() is 0.
 */
class LocalRrState {
 public:
  void push(int64_t rr);
  size_t count() const { return buf_.size(); }
  double mean(int64_t fallback_rr) const;
  double stddev() const;  // population standard deviation

 private:
  static constexpr size_t kWindow = 500;
  std::vector<int64_t> buf_;  // ring, oldest at head_
  size_t head_ = 0;
  int64_t sum_ = 0;
  int64_t sum_sq_ = 0;
};

constexpr size_t kBinaryFeatureBits = 138;
constexpr size_t kRealFeatureCount = 89;

/**
 * One beat's features. Binary layout (multi-bit fields most significant bit
 * first): RR1(8) RR2(8) RR3(8) RR4(8) dRRp(1) dRRm(1) locCV(2) ratio(2)
 * t_b(1) M1(3) M2(3) M4(3) cf1(8) cf2(8) delta(74). Real layout: RR1..RR4
 * (/2048), dRRp, dRRm, CV, RR1/m, t_b, M1, M2, M4, cf1/8, cf2/8, delta(74),
 * RR2/m — all clamped to [0, 1].
 */
struct BeatFeatures {
  std::array<uint8_t, kBinaryFeatureBits> bits{};
  std::array<float, kRealFeatureCount> reals{};
  AamiClass label = AamiClass::kExcluded;
  bool degenerate = false;  // flat beat window: M features forced to 0
};

/** A beat annotation retained for the feature chain. */
struct Beat {
  uint64_t sample = 0;
  AamiClass label = AamiClass::kExcluded;
};

/** All beat annotations of a record (classes N/S/V/F/Q), in time order. */
std::vector<Beat> beat_annotations(const EcgRecord& record);

/**
 * True when the beat has the 3 predecessors, 1 successor, and in-bounds
 * analysis windows required to extract features.
 */
bool beat_extractable(const EcgRecord& record, const std::vector<Beat>& beats,
                      size_t index);

/**
 * Extracts one beat's features. `state` must reflect the RR2 history of all
 * prior beats; the caller advances it separately (push RR2 for every beat,
 * extractable or not, after processing the beat).
 */
BeatFeatures extract_features(const EcgRecord& record,
                              const std::vector<Beat>& beats, size_t index,
                              const LocalRrState& state);

/** Binary (width 138) and real (width 89) variants of one feature set. */
struct EcgDataset {
  Dataset binary;
  Dataset real;
  /** Beat counts per class N,S,V,F,Q over all beats, before skips. */
  std::array<uint64_t, 5> class_counts{};
  uint64_t emitted = 0;  // rows in each dataset
};

/** Runs the feature chain over whole records; Q beats count but not emit. */
EcgDataset build_dataset(const std::vector<EcgRecord>& records);

// ---- feature-file round trip ----

/** Packed binary rows: 18 bytes (bit k at byte k/8, bit k%8) + label byte. */
void write_packed_features(const std::string& path, const Dataset& binary);
Dataset read_packed_features(const std::string& path);

/** Real-variant CSV with an 89-column header plus "label". */
std::string features_csv(const Dataset& real);
Dataset parse_features_csv(const std::string& text);

// ---- feature encoders (binary fields derive from these) ----

uint8_t encode_rr(int64_t rr_samples);   // [0,2048) samples → 8 bits
uint8_t encode_m(double m);              // [0,1] → 3 bits
uint8_t encode_cf(double cf);            // [0,8) → 8 bits

}  // namespace lgn
