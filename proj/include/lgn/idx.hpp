#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lgn/network.hpp"

namespace lgn {

/** IDX image container (big-endian headers, magic 0x803). */
struct IdxImages {
  uint32_t count = 0;
  uint32_t rows = 0;
  uint32_t cols = 0;
  std::vector<uint8_t> pixels;  // count * rows * cols
};

/** Reads an IDX image file, transparently inflating gzip input. */
IdxImages read_idx_images(const std::string& path);

/** Reads an IDX label file (magic 0x801). */
std::vector<uint8_t> read_idx_labels(const std::string& path);

/** Pixels strictly above this value binarize to 1. */
inline constexpr int kBinaryPixelThreshold = 127;

/**
 * Pairs images with labels as a Dataset. The binary variant maps
 * pixel > kBinaryPixelThreshold to 1.0; the rate variant maps pixel/255
 * into [0,1].
 */
Dataset idx_to_dataset(const IdxImages& images,
                       const std::vector<uint8_t>& labels, bool rate_encoded);

}  // namespace lgn
