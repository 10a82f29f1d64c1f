#include "lgn/ecg.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>

#include "lgn/common.hpp"

namespace lgn {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string swap_extension(const std::string& path, const std::string& ext) {
  size_t slash = path.find_last_of('/');
  size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + ext;
  return path.substr(0, dot) + ext;
}

int leading_digits_of_basename(const std::string& path) {
  size_t slash = path.find_last_of('/');
  size_t start = (slash == std::string::npos) ? 0 : slash + 1;
  int v = 0;
  bool any = false;
  for (size_t i = start; i < path.size() &&
                         std::isdigit(static_cast<unsigned char>(path[i]));
       ++i) {
    v = v * 10 + (path[i] - '0');
    any = true;
  }
  return any ? v : 0;
}

EcgRecord read_record_csv(const std::string& signal_path,
                          const std::string& annotation_path) {
  EcgRecord rec;
  rec.record_id = leading_digits_of_basename(signal_path);

  std::vector<uint8_t> sig_bytes = read_file(signal_path);
  std::string text(sig_bytes.begin(), sig_bytes.end());
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
  if (!next_line(line) || line != "sample_index,value")
    throw ParseError(signal_path + ": expected header 'sample_index,value'");
  while (next_line(line)) {
    if (line.empty()) continue;
    size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError(signal_path + " line " + std::to_string(line_no) +
                       ": expected 'sample_index,value'");
    uint64_t idx = std::strtoull(line.c_str(), nullptr, 10);
    if (idx != rec.samples.size())
      throw ParseError(signal_path + " line " + std::to_string(line_no) +
                       ": sample index " + std::to_string(idx) +
                       " out of order");
    rec.samples.push_back(int32_t(std::strtol(line.c_str() + comma + 1,
                                              nullptr, 10)));
  }

  std::vector<uint8_t> ann_bytes = read_file(annotation_path);
  std::string ann_text(ann_bytes.begin(), ann_bytes.end());
  pos = 0;
  line_no = 0;
  text.swap(ann_text);
  if (!next_line(line) || line != "sample_index,symbol")
    throw ParseError(annotation_path +
                     ": expected header 'sample_index,symbol'");
  while (next_line(line)) {
    if (line.empty()) continue;
    size_t comma = line.find(',');
    if (comma == std::string::npos || comma + 2 != line.size())
      throw ParseError(annotation_path + " line " + std::to_string(line_no) +
                       ": expected 'sample_index,symbol'");
    WfdbAnnotation a;
    a.sample = std::strtoull(line.c_str(), nullptr, 10);
    a.symbol = line[comma + 1];
    int code = annotation_code(a.symbol);
    if (code < 0)
      throw ParseError(annotation_path + " line " + std::to_string(line_no) +
                       ": unknown annotation symbol '" +
                       std::string(1, a.symbol) + "'");
    a.code = uint8_t(code);
    if (!rec.annotations.empty() && a.sample < rec.annotations.back().sample)
      throw ParseError(annotation_path + " line " + std::to_string(line_no) +
                       ": annotation times not monotone");
    rec.annotations.push_back(a);
  }
  if (!rec.annotations.empty() &&
      rec.annotations.back().sample >= rec.samples.size())
    throw ParseError(annotation_path + ": annotation at sample " +
                     std::to_string(rec.annotations.back().sample) +
                     " is beyond the signal end");
  return rec;
}

}  // namespace

EcgRecord read_record(const std::string& signal_path,
                      const std::string& annotation_path) {
  if (ends_with(signal_path, ".csv") || ends_with(annotation_path, ".csv")) {
    if (!ends_with(signal_path, ".csv") || !ends_with(annotation_path, ".csv"))
      throw ArgumentError(
          "read_record: CSV fallback needs both files in CSV form");
    return read_record_csv(signal_path, annotation_path);
  }

  std::string header_path = swap_extension(signal_path, ".hea");
  std::vector<uint8_t> hdr_bytes = read_file(header_path);
  WfdbHeader hdr;
  try {
    hdr = parse_header(std::string(hdr_bytes.begin(), hdr_bytes.end()));
  } catch (const ParseError& e) {
    throw ParseError(header_path + ": " + e.what());
  }

  EcgRecord rec;
  rec.record_id = int(std::strtol(hdr.record_name.c_str(), nullptr, 10));
  rec.sampling_rate = hdr.sampling_rate;

  std::vector<std::vector<int32_t>> channels;
  try {
    channels = decode_format212(read_file(signal_path), hdr);
  } catch (const ParseError& e) {
    throw ParseError(signal_path + ": " + e.what());
  }
  rec.samples = std::move(channels[0]);
  int32_t zero = hdr.signals[0].adc_zero;
  for (int32_t& v : rec.samples) v -= zero;

  try {
    rec.annotations = parse_annotations(read_file(annotation_path));
  } catch (const ParseError& e) {
    throw ParseError(annotation_path + ": " + e.what());
  }
  if (!rec.annotations.empty() &&
      rec.annotations.back().sample >= rec.samples.size())
    throw ParseError(annotation_path + ": annotation at sample " +
                     std::to_string(rec.annotations.back().sample) +
                     " is beyond the signal end");
  return rec;
}

void write_record_csv(const EcgRecord& record, const std::string& signal_path,
                      const std::string& annotation_path) {
  std::string sig = "sample_index,value\n";
  char buf[64];
  for (size_t i = 0; i < record.samples.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%d\n", i, record.samples[i]);
    sig += buf;
  }
  std::string ann = "sample_index,symbol\n";
  for (const WfdbAnnotation& a : record.annotations) {
    if (annotation_code(a.symbol) < 0)
      throw ArgumentError(
          "write_record_csv: annotation code " + std::to_string(a.code) +
          " has no symbol and cannot be serialized");
    std::snprintf(buf, sizeof buf, "%llu,%c\n",
                  static_cast<unsigned long long>(a.sample), a.symbol);
    ann += buf;
  }
  write_file_atomic(signal_path, sig);
  write_file_atomic(annotation_path, ann);
}

InterPatientSplit split_inter_patient() {
  InterPatientSplit s;
  s.ds1 = {101, 106, 108, 109, 112, 114, 115, 116, 118, 119, 122,
           124, 201, 203, 205, 207, 208, 209, 215, 220, 223, 230};
  s.ds2 = {100, 103, 105, 111, 113, 117, 121, 123, 200, 202, 210,
           212, 213, 214, 219, 221, 222, 228, 231, 232, 233, 234};
  return s;
}

AamiClass map_aami(char symbol) {
  switch (symbol) {
    case 'N': case 'L': case 'R':
      return AamiClass::kN;
    case 'e': case 'j': case 'A': case 'a': case 'J': case 'S':
      return AamiClass::kS;
    case 'V': case 'E':
      return AamiClass::kV;
    case 'F':
      return AamiClass::kF;
    case 'Q': case '/': case 'f':
      return AamiClass::kQ;
    default:
      return AamiClass::kExcluded;
  }
}

}  // namespace lgn
