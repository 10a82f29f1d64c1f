#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lgn {

/** One signal description line from a WFDB header (.hea) file. */
struct WfdbSignalInfo {
  std::string file_name;
  int format = 0;
  double gain = 0.0;
  int adc_res = 0;
  int adc_zero = 0;
  int init_value = 0;
  int checksum = 0;
  std::string description;
};

struct WfdbHeader {
  std::string record_name;
  int num_signals = 0;
  double sampling_rate = 0.0;
  uint64_t num_samples = 0;
  std::vector<WfdbSignalInfo> signals;
};

/** Parses a WFDB header file's text. */
WfdbHeader parse_header(const std::string& text);

/**
 * Decodes a format-212 signal file: two 12-bit two's-complement samples per
 * 3 bytes, channels interleaved frame by frame. Returns raw digital values
 * per channel and verifies each channel's 16-bit checksum and initial value
 * against the header.
 */
std::vector<std::vector<int32_t>> decode_format212(
    const std::vector<uint8_t>& bytes, const WfdbHeader& header);

/** Packs interleaved channels into format-212 bytes (zero-padded tail). */
std::vector<uint8_t> encode_format212(
    const std::vector<std::vector<int32_t>>& channels);

/**
 * One annotation: sample index, raw annotation type code, and the standard
 * mnemonic symbol for that code (0 when the code has no assigned symbol;
 * such annotations are preserved but match no beat class).
 */
struct WfdbAnnotation {
  uint64_t sample = 0;
  uint8_t code = 0;
  char symbol = 0;
};

/** Standard symbol for an annotation type code, or 0 if unassigned. */
char annotation_symbol(int code);

/** Annotation type code for a symbol, or -1 if the symbol is unknown. */
int annotation_code(char symbol);

/**
 * Parses a binary annotation (.atr) file: little-endian 16-bit words with a
 * 6-bit type code and 10-bit time delta, plus SKIP/NUM/SUB/CHN/AUX pseudo
 * annotations. Times must be non-decreasing.
 */
std::vector<WfdbAnnotation> parse_annotations(const std::vector<uint8_t>& bytes);

}  // namespace lgn
