#include "lgn/runconfig.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "lgn/common.hpp"
#include "lgn/cost.hpp"

namespace lgn {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

// Strict scalar parsers: the whole token must be consumed.
uint64_t parse_u64(const std::string& s, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || errno != 0 || s[0] == '-')
    throw ArgumentError("bad value '" + s + "' for " + key +
                        " (expected a non-negative integer)");
  return uint64_t(v);
}

int parse_int(const std::string& s, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || errno != 0 || v < INT32_MIN || v > INT32_MAX)
    throw ArgumentError("bad value '" + s + "' for " + key +
                        " (expected an integer)");
  return int(v);
}

double parse_positive_double(const std::string& s, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || errno != 0)
    throw ArgumentError("bad value '" + s + "' for " + key +
                        " (expected a number)");
  if (!(v > 0.0) || !std::isfinite(v))
    throw ArgumentError(key + " must be > 0, got '" + s + "'");
  return v;
}

std::vector<uint64_t> parse_seed_list(const std::string& s) {
  std::vector<uint64_t> seeds;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    seeds.push_back(parse_u64(trim(s.substr(pos, comma - pos)), "seeds"));
    pos = comma + 1;
  }
  return seeds;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void set_run_config_key(RunConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "arch") {
    parse_arch(value);  // shape-checks the string; kept in string form
    cfg.arch = value;
  } else if (key == "input_width") {
    cfg.input_width = parse_u64(value, key);
  } else if (key == "num_classes") {
    cfg.num_classes = parse_int(value, key);
    if (cfg.num_classes < 2)
      throw ArgumentError("num_classes must be >= 2, got '" + value + "'");
  } else if (key == "temperature") {
    cfg.temperature = parse_positive_double(value, key);
  } else if (key == "learning_rate") {
    cfg.learning_rate = parse_positive_double(value, key);
  } else if (key == "epochs") {
    cfg.epochs = parse_int(value, key);
    if (cfg.epochs < 0)
      throw ArgumentError("epochs must be >= 0, got '" + value + "'");
  } else if (key == "batch_size") {
    cfg.batch_size = parse_int(value, key);
    if (cfg.batch_size < 1)
      throw ArgumentError("batch_size must be >= 1, got '" + value + "'");
  } else if (key == "seeds") {
    cfg.seeds = parse_seed_list(value);
  } else if (key == "encoding") {
    if (value != "binary" && value != "rate")
      throw ArgumentError("encoding must be 'binary' or 'rate', got '" +
                          value + "'");
    cfg.encoding = value;
  } else if (key == "train_data") {
    cfg.train_data = value;
  } else if (key == "test_data") {
    cfg.test_data = value;
  } else if (key == "out_dir") {
    cfg.out_dir = value;
  } else {
    throw ArgumentError("unknown key '" + key + "'");
  }
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ArgumentError("config line " + std::to_string(line_no) +
                          ": expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ArgumentError("config line " + std::to_string(line_no) +
                          ": empty key");
    if (!seen.insert(key).second)
      throw ArgumentError("config line " + std::to_string(line_no) +
                          ": duplicate key '" + key + "'");
    try {
      set_run_config_key(cfg, key, value);
    } catch (const ArgumentError& e) {
      throw ArgumentError("config line " + std::to_string(line_no) + ": " +
                          e.what());
    }
  }
  return cfg;
}

std::string run_config_text(const RunConfig& cfg) {
  std::string s;
  s += "arch = " + cfg.arch + "\n";
  s += "input_width = " + std::to_string(cfg.input_width) + "\n";
  s += "num_classes = " + std::to_string(cfg.num_classes) + "\n";
  s += "temperature = " + format_double(cfg.temperature) + "\n";
  s += "learning_rate = " + format_double(cfg.learning_rate) + "\n";
  s += "epochs = " + std::to_string(cfg.epochs) + "\n";
  s += "batch_size = " + std::to_string(cfg.batch_size) + "\n";
  s += "seeds = ";
  for (size_t i = 0; i < cfg.seeds.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(cfg.seeds[i]);
  }
  s += "\n";
  s += "encoding = " + cfg.encoding + "\n";
  s += "train_data = " + cfg.train_data + "\n";
  s += "test_data = " + cfg.test_data + "\n";
  s += "out_dir = " + cfg.out_dir + "\n";
  return s;
}

NetworkConfig network_config(const RunConfig& cfg, uint64_t seed,
                             uint64_t data_width) {
  std::vector<LayerSpec> layers = parse_arch(cfg.arch);
  NetworkConfig net;
  net.is_lut = layers[0].is_lut;
  net.lut_fanin = layers[0].fanin;
  for (const LayerSpec& l : layers) net.layer_sizes.push_back(l.width);
  net.input_width = cfg.input_width ? cfg.input_width : data_width;
  net.num_classes = cfg.num_classes;
  net.temperature = cfg.temperature;
  net.seed = seed;
  net.learning_rate = cfg.learning_rate;
  net.epochs = cfg.epochs;
  net.batch_size = cfg.batch_size;
  validate_config(net);
  return net;
}

std::string manifest_text(const std::string& params_text,
                          const std::string& command,
                          const std::vector<uint64_t>& seeds) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(
                    fnv1a64(params_text.data(), params_text.size())));
  std::string s;
  s += "command = " + command + "\n";
  s += "config_fnv1a64 = " + std::string(hash) + "\n";
  s += "seeds = ";
  for (size_t i = 0; i < seeds.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(seeds[i]);
  }
  s += "\n";
  s += "version = " + std::string(kVersion) + "\n";
  return s;
}

std::string manifest_text(const RunConfig& cfg, const std::string& command) {
  return manifest_text(run_config_text(cfg), command, cfg.seeds);
}

}  // namespace lgn
