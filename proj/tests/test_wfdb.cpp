// WFDB record parsing: header text, format-212 signal decoding, and binary
// annotation (.atr) files.
//
// Oracles: record 100 of the MIT-BIH arrhythmia database with header fields,
// samples, and annotations cross-checked against the reference WFDB
// implementation, plus synthetic files assembled byte by byte from the
// format definition.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "lgn/common.hpp"
#include "lgn/rng.hpp"
#include "lgn/wfdb.hpp"

using namespace lgn;

namespace {

#ifdef TEST_DATA_DIR
std::string sample_path(const char* name) {
  return std::string(TEST_DATA_DIR) + "/wfdb-sample/" + name;
}

std::string read_text(const std::string& path) {
  std::vector<uint8_t> bytes = read_file(path);
  return std::string(bytes.begin(), bytes.end());
}
#endif

int16_t channel_checksum(const std::vector<int32_t>& ch) {
  int64_t sum = 0;
  for (int32_t v : ch) sum += v;
  return int16_t(uint16_t(uint64_t(sum) & 0xFFFF));
}

// Header consistent with the given channels, as a writer would produce it.
WfdbHeader synth_header(const std::vector<std::vector<int32_t>>& channels) {
  WfdbHeader hdr;
  hdr.record_name = "900";
  hdr.num_signals = int(channels.size());
  hdr.sampling_rate = 360.0;
  hdr.num_samples = channels.empty() ? 0 : channels[0].size();
  for (const auto& ch : channels) {
    WfdbSignalInfo sig;
    sig.file_name = "900.dat";
    sig.format = 212;
    sig.gain = 200.0;
    sig.adc_res = 12;
    sig.adc_zero = 0;
    sig.init_value = ch.empty() ? 0 : ch[0];
    sig.checksum = channel_checksum(ch);
    hdr.signals.push_back(sig);
  }
  return hdr;
}

// One 16-bit little-endian word, plain (SKIP intervals) ...
void raw_word(std::vector<uint8_t>& out, uint32_t w) {
  out.push_back(uint8_t(w & 0xFF));
  out.push_back(uint8_t((w >> 8) & 0xFF));
}

// ... or split into the 6-bit type code and 10-bit time delta.
void ann_word(std::vector<uint8_t>& out, int code, int delta) {
  raw_word(out, (uint32_t(code) << 10) | (uint32_t(delta) & 0x3FF));
}

}  // namespace

#ifdef TEST_DATA_DIR

TEST_CASE("record 100 header fields") {
  WfdbHeader hdr = parse_header(read_text(sample_path("100.hea")));
  CHECK(hdr.record_name == "100");
  CHECK(hdr.num_signals == 2);
  CHECK(hdr.sampling_rate == 360.0);
  CHECK(hdr.num_samples == 650000);
  REQUIRE(hdr.signals.size() == 2);
  CHECK(hdr.signals[0].file_name == "100.dat");
  CHECK(hdr.signals[0].format == 212);
  CHECK(hdr.signals[0].gain == 200.0);
  CHECK(hdr.signals[0].adc_res == 11);
  CHECK(hdr.signals[0].adc_zero == 1024);
  CHECK(hdr.signals[0].init_value == 995);
  CHECK(hdr.signals[0].checksum == -22131);
  CHECK(hdr.signals[0].description == "MLII");
  CHECK(hdr.signals[1].init_value == 1011);
  CHECK(hdr.signals[1].checksum == 20052);
  CHECK(hdr.signals[1].description == "V5");
}

TEST_CASE("record 100 signal decodes to the reference samples") {
  WfdbHeader hdr = parse_header(read_text(sample_path("100.hea")));
  // decode_format212 verifies both channels' init values and checksums
  // against the header, so just reaching the CHECKs covers those.
  std::vector<std::vector<int32_t>> ch =
      decode_format212(read_file(sample_path("100.dat")), hdr);
  REQUIRE(ch.size() == 2);
  REQUIRE(ch[0].size() == 650000);
  REQUIRE(ch[1].size() == 650000);
  const int32_t first0[10] = {995, 995, 995, 995, 995,
                              995, 995, 995, 1000, 997};
  const int32_t first1[10] = {1011, 1011, 1011, 1011, 1011,
                              1011, 1011, 1011, 1008, 1008};
  for (int i = 0; i < 10; ++i) {
    CHECK(ch[0][size_t(i)] == first0[i]);
    CHECK(ch[1][size_t(i)] == first1[i]);
  }
  CHECK(ch[0][649997] == 889);
  CHECK(ch[0][649998] == 871);
  CHECK(ch[0][649999] == 768);
}

TEST_CASE("record 100 annotations") {
  std::vector<WfdbAnnotation> ann =
      parse_annotations(read_file(sample_path("100.atr")));
  REQUIRE(ann.size() == 2274);
  const uint64_t first_times[10] = {18,   77,   370,  662,  946,
                                    1231, 1515, 1809, 2044, 2402};
  const char first_syms[10] = {'+', 'N', 'N', 'N', 'N',
                               'N', 'N', 'N', 'A', 'N'};
  for (int i = 0; i < 10; ++i) {
    CHECK(ann[size_t(i)].sample == first_times[i]);
    CHECK(ann[size_t(i)].symbol == first_syms[i]);
  }
  CHECK(ann[2271].sample == 649484);
  CHECK(ann[2272].sample == 649734);
  CHECK(ann[2273].sample == 649991);
  CHECK(ann[2273].symbol == 'N');
  std::map<char, int> counts;
  for (const WfdbAnnotation& a : ann) ++counts[a.symbol];
  CHECK(counts.size() == 4);
  CHECK(counts['+'] == 1);
  CHECK(counts['N'] == 2239);
  CHECK(counts['A'] == 33);
  CHECK(counts['V'] == 1);
}

#endif  // TEST_DATA_DIR

TEST_CASE("format-212 round trip over random 12-bit samples") {
  Rng rng(31);
  std::vector<std::vector<int32_t>> ch(2, std::vector<int32_t>(501));
  for (auto& c : ch)
    for (int32_t& v : c) v = int32_t(rng.below(4096)) - 2048;
  // Cover the extremes explicitly.
  ch[0][0] = -2048;
  ch[1][0] = 2047;
  ch[0][1] = 0;
  ch[1][1] = -1;
  WfdbHeader hdr = synth_header(ch);
  std::vector<uint8_t> bytes = encode_format212(ch);
  CHECK(bytes.size() == 501 * 3);  // 1002 samples -> 501 byte groups
  std::vector<std::vector<int32_t>> back = decode_format212(bytes, hdr);
  CHECK(back == ch);
}

TEST_CASE("format-212 odd sample total may omit the padding byte") {
  std::vector<std::vector<int32_t>> ch = {{5, -3, 17, 900, -900}};
  WfdbHeader hdr = synth_header(ch);
  std::vector<uint8_t> bytes = encode_format212(ch);
  REQUIRE(bytes.size() == 9);  // 5 samples -> 3 groups, last half unused
  CHECK(decode_format212(bytes, hdr) == ch);
  std::vector<uint8_t> unpadded(bytes.begin(), bytes.end() - 1);
  CHECK(decode_format212(unpadded, hdr) == ch);

  // With an even total the same truncation is a real error.
  std::vector<std::vector<int32_t>> ch_even = {{5, -3, 17, 900}};
  WfdbHeader hdr_even = synth_header(ch_even);
  std::vector<uint8_t> even_bytes = encode_format212(ch_even);
  even_bytes.pop_back();
  CHECK_THROWS_AS(decode_format212(even_bytes, hdr_even), ParseError);
}

TEST_CASE("format-212 decode verifies header consistency") {
  std::vector<std::vector<int32_t>> ch = {{10, 20, 30, 40}, {1, 2, 3, 4}};
  std::vector<uint8_t> bytes = encode_format212(ch);

  WfdbHeader bad_init = synth_header(ch);
  bad_init.signals[1].init_value = 2;
  CHECK_THROWS_AS(decode_format212(bytes, bad_init), ParseError);

  WfdbHeader bad_sum = synth_header(ch);
  bad_sum.signals[0].checksum += 1;
  CHECK_THROWS_AS(decode_format212(bytes, bad_sum), ParseError);

  WfdbHeader bad_fmt = synth_header(ch);
  bad_fmt.signals[0].format = 16;
  CHECK_THROWS_AS(decode_format212(bytes, bad_fmt), ParseError);

  WfdbHeader hdr = synth_header(ch);
  std::vector<uint8_t> truncated(bytes.begin(), bytes.end() - 3);
  CHECK_THROWS_AS(decode_format212(truncated, hdr), ParseError);
  std::vector<uint8_t> padded = bytes;
  padded.push_back(0);
  CHECK_THROWS_AS(decode_format212(padded, hdr), ParseError);

  // A flipped data byte lands in the checksum.
  std::vector<uint8_t> corrupt = bytes;
  corrupt[4] ^= 0x01;
  CHECK_THROWS_AS(decode_format212(corrupt, hdr), ParseError);
}

TEST_CASE("encode_format212 validates its input") {
  CHECK_THROWS_AS(encode_format212({}), ArgumentError);
  CHECK_THROWS_AS(encode_format212({{0, 1}, {0}}), ArgumentError);
  CHECK_THROWS_AS(encode_format212({{2048}}), ArgumentError);
  CHECK_THROWS_AS(encode_format212({{-2049}}), ArgumentError);
  CHECK_NOTHROW(encode_format212({{2047}, {-2048}}));
}

TEST_CASE("header parsing handles comments, suffixes, and segment counts") {
  std::string text =
      "# leading comment\n"
      "\n"
      "900/4 2 360/1 1000\r\n"
      "900.dat 212 200/mV 11 1024 10 -20 0 lead one\n"
      "900.dat 212 100(5)/mV 11 1024 -3 77 0\n"
      "# trailing info line\n"
      "extra free-text line after the signal block\n";
  WfdbHeader hdr = parse_header(text);
  CHECK(hdr.record_name == "900");
  CHECK(hdr.num_signals == 2);
  CHECK(hdr.sampling_rate == 360.0);
  CHECK(hdr.num_samples == 1000);
  REQUIRE(hdr.signals.size() == 2);
  CHECK(hdr.signals[0].gain == 200.0);
  CHECK(hdr.signals[0].init_value == 10);
  CHECK(hdr.signals[0].checksum == -20);
  CHECK(hdr.signals[0].description == "lead one");
  CHECK(hdr.signals[1].gain == 100.0);
  CHECK(hdr.signals[1].description.empty());
}

TEST_CASE("header parse errors") {
  CHECK_THROWS_AS(parse_header(""), ParseError);
  CHECK_THROWS_AS(parse_header("# only comments\n"), ParseError);
  CHECK_THROWS_AS(parse_header("100 2 360\n"), ParseError);  // 3 fields
  CHECK_THROWS_AS(parse_header("100 0 360 1000\n"), ParseError);
  CHECK_THROWS_AS(parse_header("100 2 0 1000\n"), ParseError);
  CHECK_THROWS_AS(parse_header("100 two 360 1000\n"), ParseError);
  // Fewer signal lines than the record line promises.
  CHECK_THROWS_AS(
      parse_header("100 2 360 1000\n100.dat 212 200 11 1024 10 20 0 A\n"),
      ParseError);
  // A signal line with too few fields.
  CHECK_THROWS_AS(parse_header("100 1 360 1000\n100.dat 212 200 11 1024 10\n"),
                  ParseError);
  CHECK_THROWS_AS(
      parse_header("100 1 360 1000\n100.dat fmt 200 11 1024 10 20\n"),
      ParseError);
}

TEST_CASE("annotation codes and symbols are mutually inverse") {
  // Spot-check the assignments the pipeline depends on.
  CHECK(annotation_symbol(1) == 'N');
  CHECK(annotation_symbol(5) == 'V');
  CHECK(annotation_symbol(8) == 'A');
  CHECK(annotation_symbol(11) == 'j');
  CHECK(annotation_symbol(12) == '/');
  CHECK(annotation_symbol(14) == '~');
  CHECK(annotation_symbol(28) == '+');
  CHECK(annotation_symbol(34) == 'e');
  CHECK(annotation_symbol(38) == 'f');
  CHECK(annotation_symbol(41) == 'r');
  // Codes 15, 17, and 42.. have no symbol; out-of-range codes map to 0 too.
  CHECK(annotation_symbol(15) == 0);
  CHECK(annotation_symbol(17) == 0);
  CHECK(annotation_symbol(42) == 0);
  CHECK(annotation_symbol(0) == 0);
  CHECK(annotation_symbol(-3) == 0);
  CHECK(annotation_symbol(63) == 0);
  for (int c = 1; c < 50; ++c) {
    char s = annotation_symbol(c);
    if (s != 0) CHECK(annotation_code(s) == c);
  }
  CHECK(annotation_code('z') == -1);
  CHECK(annotation_code(0) == -1);
}

TEST_CASE("synthetic annotation stream with pseudo annotations") {
  std::vector<uint8_t> bytes;
  ann_word(bytes, 1, 18);   // N at 18
  ann_word(bytes, 28, 10);  // + at 28
  ann_word(bytes, 60, 3);   // NUM: ignored, no time effect
  ann_word(bytes, 61, 1);   // SUB: ignored
  ann_word(bytes, 62, 0);   // CHN: ignored
  ann_word(bytes, 63, 3);   // AUX: 3 payload bytes, padded to 4
  bytes.insert(bytes.end(), {'a', 'b', 'c', 0});
  ann_word(bytes, 8, 100);  // A at 128
  ann_word(bytes, 59, 0);   // SKIP: +70000, high word first
  raw_word(bytes, 70000u >> 16);
  raw_word(bytes, 70000u & 0xFFFF);
  ann_word(bytes, 5, 2);    // V at 70130
  ann_word(bytes, 0, 0);    // end marker
  bytes.insert(bytes.end(), {0xFF, 0xFF});  // junk past the end is ignored

  std::vector<WfdbAnnotation> ann = parse_annotations(bytes);
  REQUIRE(ann.size() == 4);
  CHECK(ann[0].sample == 18);
  CHECK(ann[0].code == 1);
  CHECK(ann[0].symbol == 'N');
  CHECK(ann[1].sample == 28);
  CHECK(ann[1].symbol == '+');
  CHECK(ann[2].sample == 128);
  CHECK(ann[2].symbol == 'A');
  CHECK(ann[3].sample == 70130);
  CHECK(ann[3].symbol == 'V');
}

TEST_CASE("annotation codes without symbols are preserved") {
  std::vector<uint8_t> bytes;
  ann_word(bytes, 15, 5);
  ann_word(bytes, 42, 5);
  ann_word(bytes, 0, 0);
  std::vector<WfdbAnnotation> ann = parse_annotations(bytes);
  REQUIRE(ann.size() == 2);
  CHECK(ann[0].code == 15);
  CHECK(ann[0].symbol == 0);
  CHECK(ann[0].sample == 5);
  CHECK(ann[1].code == 42);
  CHECK(ann[1].symbol == 0);
  CHECK(ann[1].sample == 10);
}

TEST_CASE("negative skip intervals cannot bend time backwards") {
  // Rewinding before a previous annotation is non-monotone.
  std::vector<uint8_t> bytes;
  ann_word(bytes, 1, 100);
  ann_word(bytes, 59, 0);
  raw_word(bytes, uint32_t(-50) >> 16);
  raw_word(bytes, uint32_t(-50) & 0xFFFF);
  ann_word(bytes, 1, 10);  // would land at 60 < 100
  ann_word(bytes, 0, 0);
  CHECK_THROWS_AS(parse_annotations(bytes), ParseError);

  // Rewinding past zero is a negative time.
  std::vector<uint8_t> neg;
  ann_word(neg, 59, 0);
  raw_word(neg, uint32_t(-100) >> 16);
  raw_word(neg, uint32_t(-100) & 0xFFFF);
  ann_word(neg, 1, 0);
  ann_word(neg, 0, 0);
  CHECK_THROWS_AS(parse_annotations(neg), ParseError);

  // A negative skip that stays monotone is fine.
  std::vector<uint8_t> ok;
  ann_word(ok, 1, 100);
  ann_word(ok, 59, 0);
  raw_word(ok, uint32_t(-50) >> 16);
  raw_word(ok, uint32_t(-50) & 0xFFFF);
  ann_word(ok, 1, 60);  // lands at 110
  ann_word(ok, 0, 0);
  std::vector<WfdbAnnotation> ann = parse_annotations(ok);
  REQUIRE(ann.size() == 2);
  CHECK(ann[1].sample == 110);
}

TEST_CASE("annotation parse errors") {
  // Reserved codes 50..58 are invalid.
  for (int code : {50, 58}) {
    std::vector<uint8_t> bytes;
    ann_word(bytes, code, 1);
    ann_word(bytes, 0, 0);
    CHECK_THROWS_AS(parse_annotations(bytes), ParseError);
  }
  // Truncations: mid-word, missing end marker, inside a skip interval,
  // and inside aux payload.
  CHECK_THROWS_AS(parse_annotations({0x12}), ParseError);
  {
    std::vector<uint8_t> bytes;
    ann_word(bytes, 1, 5);
    CHECK_THROWS_AS(parse_annotations(bytes), ParseError);
  }
  {
    std::vector<uint8_t> bytes;
    ann_word(bytes, 59, 0);
    raw_word(bytes, 0);
    CHECK_THROWS_AS(parse_annotations(bytes), ParseError);
  }
  {
    std::vector<uint8_t> bytes;
    ann_word(bytes, 63, 6);
    bytes.insert(bytes.end(), {'a', 'b'});
    CHECK_THROWS_AS(parse_annotations(bytes), ParseError);
  }
  // The empty file has no end marker either.
  CHECK_THROWS_AS(parse_annotations({}), ParseError);
}
