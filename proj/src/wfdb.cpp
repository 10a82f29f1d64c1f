#include "lgn/wfdb.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "lgn/common.hpp"

namespace lgn {

namespace {

// Annotation type codes 1..41 with their standard mnemonic symbols; codes
// without an entry (15, 17, 42..) have no assigned symbol.
constexpr char kSymbols[50] = {
    0,   'N', 'L', 'R', 'a', 'V', 'F', 'J', 'A', 'S',  // 0-9
    'E', 'j', '/', 'Q', '~', 0,   '|', 0,   's', 'T',  // 10-19
    '*', 'D', '"', '=', 'p', 'B', '^', 't', '+', 'u',  // 20-29
    '?', '!', '[', ']', 'e', 'n', '@', 'x', 'f', '(',  // 30-39
    ')', 'r', 0,   0,   0,   0,   0,   0,   0,   0};   // 40-49

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string f;
  while (ss >> f) out.push_back(f);
  return out;
}

long parse_int_field(const std::string& field, const char* what, size_t line_no) {
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(field.c_str(), &end, 10);
  if (end == field.c_str() || errno != 0)
    throw ParseError("header line " + std::to_string(line_no) + ": bad " +
                     what + " '" + field + "'");
  return v;
}

// Numeric prefix of a gain or rate field; WFDB allows suffixes such as
// "200/mV" or "360/1".
double parse_number_prefix(const std::string& field, const char* what,
                           size_t line_no) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || errno != 0)
    throw ParseError("header line " + std::to_string(line_no) + ": bad " +
                     what + " '" + field + "'");
  return v;
}

int32_t sign_extend_12(uint32_t v) {
  return (v & 0x800) ? int32_t(v) - 4096 : int32_t(v);
}

}  // namespace

WfdbHeader parse_header(const std::string& text) {
  std::istringstream ss(text);
  std::string line;
  size_t line_no = 0;
  WfdbHeader hdr;
  bool have_record_line = false;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = split_fields(line);
    if (!have_record_line) {
      if (f.size() < 4)
        throw ParseError("header line " + std::to_string(line_no) +
                         ": record line needs name, signals, rate, samples");
      // Record name may carry a segment count ("100/2"); keep the name part.
      hdr.record_name = f[0].substr(0, f[0].find('/'));
      hdr.num_signals = int(parse_int_field(f[1], "signal count", line_no));
      hdr.sampling_rate = parse_number_prefix(f[2], "sampling rate", line_no);
      hdr.num_samples = uint64_t(parse_int_field(f[3], "sample count", line_no));
      if (hdr.num_signals < 1)
        throw ParseError("header: signal count must be >= 1");
      if (!(hdr.sampling_rate > 0.0))
        throw ParseError("header: sampling rate must be > 0");
      have_record_line = true;
      continue;
    }
    if (int(hdr.signals.size()) == hdr.num_signals) continue;  // info lines
    if (f.size() < 7)
      throw ParseError("header line " + std::to_string(line_no) +
                       ": signal line needs at least 7 fields");
    WfdbSignalInfo sig;
    sig.file_name = f[0];
    sig.format = int(parse_int_field(f[1], "format", line_no));
    sig.gain = parse_number_prefix(f[2], "gain", line_no);
    sig.adc_res = int(parse_int_field(f[3], "adc resolution", line_no));
    sig.adc_zero = int(parse_int_field(f[4], "adc zero", line_no));
    sig.init_value = int(parse_int_field(f[5], "initial value", line_no));
    sig.checksum = int(parse_int_field(f[6], "checksum", line_no));
    // Field 8 is the block size; the description is everything after it.
    for (size_t i = 8; i < f.size(); ++i) {
      if (!sig.description.empty()) sig.description += ' ';
      sig.description += f[i];
    }
    hdr.signals.push_back(std::move(sig));
  }
  if (!have_record_line) throw ParseError("header: no record line found");
  if (int(hdr.signals.size()) != hdr.num_signals)
    throw ParseError("header: expected " + std::to_string(hdr.num_signals) +
                     " signal lines, found " +
                     std::to_string(hdr.signals.size()));
  return hdr;
}

std::vector<std::vector<int32_t>> decode_format212(
    const std::vector<uint8_t>& bytes, const WfdbHeader& header) {
  for (const WfdbSignalInfo& sig : header.signals)
    if (sig.format != 212)
      throw ParseError("signal format " + std::to_string(sig.format) +
                       " is not supported (only 212)");
  size_t n_sig = size_t(header.num_signals);
  uint64_t total = header.num_samples * n_sig;
  uint64_t groups = (total + 1) / 2;
  uint64_t expected = groups * 3;
  // An odd sample total may omit the final padding byte.
  bool odd = (total % 2) != 0;
  if (bytes.size() != expected && !(odd && bytes.size() + 1 == expected))
    throw ParseError("signal file is " + std::to_string(bytes.size()) +
                     " bytes; expected " + std::to_string(expected) +
                     " for " + std::to_string(total) + " samples");

  std::vector<std::vector<int32_t>> channels(
      n_sig, std::vector<int32_t>(size_t(header.num_samples)));
  for (uint64_t i = 0; i < total; ++i) {
    uint64_t g = i / 2;
    const uint8_t* p = bytes.data() + g * 3;
    uint32_t raw = (i % 2 == 0)
                       ? (uint32_t(p[1] & 0x0F) << 8) | p[0]
                       : (uint32_t(p[1] & 0xF0) << 4) | p[2];
    channels[size_t(i % n_sig)][size_t(i / n_sig)] = sign_extend_12(raw);
  }

  for (size_t s = 0; s < n_sig; ++s) {
    const WfdbSignalInfo& sig = header.signals[s];
    if (!channels[s].empty() && channels[s][0] != sig.init_value)
      throw ParseError("signal " + std::to_string(s) + ": first sample " +
                       std::to_string(channels[s][0]) +
                       " does not match header initial value " +
                       std::to_string(sig.init_value));
    int64_t sum = 0;
    for (int32_t v : channels[s]) sum += v;
    int16_t cksum = int16_t(uint16_t(uint64_t(sum) & 0xFFFF));
    if (int(cksum) != sig.checksum)
      throw ParseError("signal " + std::to_string(s) + ": checksum " +
                       std::to_string(cksum) + " does not match header " +
                       std::to_string(sig.checksum));
  }
  return channels;
}

std::vector<uint8_t> encode_format212(
    const std::vector<std::vector<int32_t>>& channels) {
  if (channels.empty()) throw ArgumentError("encode_format212: no channels");
  size_t n_samples = channels[0].size();
  for (const auto& ch : channels)
    if (ch.size() != n_samples)
      throw ArgumentError("encode_format212: channel lengths differ");
  uint64_t total = uint64_t(n_samples) * channels.size();
  std::vector<uint8_t> bytes(size_t((total + 1) / 2) * 3, 0);
  for (uint64_t i = 0; i < total; ++i) {
    int32_t v = channels[size_t(i % channels.size())][size_t(i / channels.size())];
    if (v < -2048 || v > 2047)
      throw ArgumentError("encode_format212: sample " + std::to_string(v) +
                          " does not fit 12 bits");
    uint32_t raw = uint32_t(v) & 0xFFF;
    uint8_t* p = bytes.data() + (i / 2) * 3;
    if (i % 2 == 0) {
      p[0] = uint8_t(raw & 0xFF);
      p[1] = uint8_t(p[1] | ((raw >> 8) & 0x0F));
    } else {
      p[1] = uint8_t(p[1] | (((raw >> 8) & 0x0F) << 4));
      p[2] = uint8_t(raw & 0xFF);
    }
  }
  return bytes;
}

char annotation_symbol(int code) {
  if (code < 0 || code >= 50) return 0;
  return kSymbols[code];
}

int annotation_code(char symbol) {
  if (symbol == 0) return -1;
  for (int c = 1; c < 50; ++c)
    if (kSymbols[c] == symbol) return c;
  return -1;
}

std::vector<WfdbAnnotation> parse_annotations(const std::vector<uint8_t>& bytes) {
  std::vector<WfdbAnnotation> out;
  size_t i = 0, n = bytes.size();
  auto read_word = [&](const char* what) -> uint32_t {
    if (i + 2 > n)
      throw ParseError("annotation file truncated at byte offset " +
                       std::to_string(i) + " while reading " + what);
    uint32_t w = uint32_t(bytes[i]) | (uint32_t(bytes[i + 1]) << 8);
    i += 2;
    return w;
  };
  int64_t time = 0;
  for (;;) {
    size_t word_off = i;
    uint32_t w = read_word("annotation word");
    uint32_t code = w >> 10;
    uint32_t delta = w & 0x3FF;
    if (code == 0 && delta == 0) break;  // end of file marker
    if (code == 59) {                    // SKIP: 32-bit interval, high word first
      uint32_t hi = read_word("skip interval");
      uint32_t lo = read_word("skip interval");
      time += int32_t((hi << 16) | lo);
      continue;
    }
    if (code == 60 || code == 61 || code == 62) continue;  // NUM / SUB / CHN
    if (code == 63) {  // AUX: delta counts bytes, padded to even
      size_t skip = delta + (delta & 1);
      if (i + skip > n)
        throw ParseError("annotation file truncated at byte offset " +
                         std::to_string(i) + " inside aux data");
      i += skip;
      continue;
    }
    if (code > 49)
      throw ParseError("invalid annotation code " + std::to_string(code) +
                       " at byte offset " + std::to_string(word_off));
    time += int64_t(delta);
    if (time < 0)
      throw ParseError("negative annotation time at byte offset " +
                       std::to_string(word_off));
    WfdbAnnotation a;
    a.sample = uint64_t(time);
    a.code = uint8_t(code);
    a.symbol = annotation_symbol(int(code));
    if (!out.empty() && a.sample < out.back().sample)
      throw ParseError("annotation times not monotone at byte offset " +
                       std::to_string(word_off));
    out.push_back(a);
  }
  return out;
}

}  // namespace lgn
