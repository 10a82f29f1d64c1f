#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lgn/network.hpp"

namespace lgn {

/**
 * Parameters of one command run, read from a flat key=value file with
 * command-line overrides applied on top. Mirrors NetworkConfig but carries a
 * seed list (one training run per seed) plus dataset paths and the input
 * encoding. Keys match the field names below.
 */
struct RunConfig {
  std::string arch = "gate:1x8000";  // <kind>:<layers>x<width>
  uint64_t input_width = 0;          // 0: use the dataset's width
  int num_classes = 4;
  double temperature = 1.0;
  double learning_rate = 0.01;
  int epochs = 200;
  int batch_size = 100;
  std::vector<uint64_t> seeds = {1};
  std::string encoding = "binary";   // binary | rate
  std::string train_data;
  std::string test_data;
  std::string out_dir = ".";
};

/**
 * Applies one `key = value` assignment with typed validation. Unknown keys
 * and out-of-range values throw ArgumentError. Used both by the file parser
 * and for command-line overrides, so they validate identically.
 */
void set_run_config_key(RunConfig& cfg, const std::string& key,
                        const std::string& value);

/**
 * Parses a config file: one assignment per line, '#' lines are comments,
 * blank lines are skipped, duplicate keys are rejected. Errors carry the
 * line number.
 */
RunConfig parse_run_config(const std::string& text);

/** Canonical serialization; parse_run_config(run_config_text(c)) == c. */
std::string run_config_text(const RunConfig& cfg);

/**
 * The network configuration for one run: the architecture string expanded
 * into layer sizes, one seed from the list, and the input width resolved
 * against the dataset (when the config leaves it 0). Validates the result.
 */
NetworkConfig network_config(const RunConfig& cfg, uint64_t seed,
                             uint64_t data_width);

/**
 * Manifest written beside every command's outputs: the command name, the
 * FNV-1a hash of the parameter text, the seed list, and the library version.
 * Identical runs produce identical manifests.
 */
std::string manifest_text(const std::string& params_text,
                          const std::string& command,
                          const std::vector<uint64_t>& seeds);

/** The same manifest with the canonical config text as the parameter text. */
std::string manifest_text(const RunConfig& cfg, const std::string& command);

}  // namespace lgn
