#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgn {

inline constexpr const char* kVersion = "0.1.0";

/** Invalid arguments or configuration supplied by the caller. */
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/** Malformed or truncated input data (files, streams). */
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** Non-finite values or otherwise broken numerics at runtime. */
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- little-endian scalar IO (explicit, so files are identical on any host) ---

inline void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(uint8_t(v & 0xff));
  out.push_back(uint8_t((v >> 8) & 0xff));
  out.push_back(uint8_t((v >> 16) & 0xff));
  out.push_back(uint8_t((v >> 24) & 0xff));
}

inline void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  put_u32(out, uint32_t(v & 0xffffffffu));
  put_u32(out, uint32_t(v >> 32));
}

inline void put_f64(std::vector<uint8_t>& out, double d) {
  uint64_t v;
  static_assert(sizeof(v) == sizeof(d));
  __builtin_memcpy(&v, &d, 8);
  put_u64(out, v);
}

struct ByteReader {
  const uint8_t* p;
  size_t n;
  size_t off = 0;

  ByteReader(const uint8_t* data, size_t size, size_t start = 0)
      : p(data), n(size), off(start) {}

  size_t remaining() const { return n - off; }

  void need(size_t k) const {
    if (off + k > n)
      throw ParseError("unexpected end of data at byte offset " + std::to_string(off));
  }
  uint32_t u32() {
    need(4);
    uint32_t v = uint32_t(p[off]) | uint32_t(p[off + 1]) << 8 |
                 uint32_t(p[off + 2]) << 16 | uint32_t(p[off + 3]) << 24;
    off += 4;
    return v;
  }
  uint64_t u64() {
    uint64_t lo = u32();
    uint64_t hi = u32();
    return lo | hi << 32;
  }
  double f64() {
    uint64_t v = u64();
    double d;
    __builtin_memcpy(&d, &v, 8);
    return d;
  }
  uint8_t u8() {
    need(1);
    return p[off++];
  }
};

/** 64-bit FNV-1a; used for config hashes and checkpoint checksums. */
inline uint64_t fnv1a64(const void* data, size_t size) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  uint64_t h = 1469598103934665603ull;
  for (size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

/** Read a whole file into memory; ParseError if it cannot be opened. */
std::vector<uint8_t> read_file(const std::string& path);

/** Atomically replace `path` with `bytes` (write temp file, then rename). */
void write_file_atomic(const std::string& path, const void* data, size_t size);
inline void write_file_atomic(const std::string& path, const std::vector<uint8_t>& bytes) {
  write_file_atomic(path, bytes.data(), bytes.size());
}
inline void write_file_atomic(const std::string& path, const std::string& text) {
  write_file_atomic(path, text.data(), text.size());
}

}  // namespace lgn
