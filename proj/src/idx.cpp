#include "lgn/idx.hpp"

#include <zlib.h>

namespace lgn {

namespace {

/** Inflates gzip data; non-gzip input is returned unchanged. */
std::vector<uint8_t> maybe_gunzip(std::vector<uint8_t> raw, const std::string& path) {
  if (raw.size() < 2 || raw[0] != 0x1f || raw[1] != 0x8b) return raw;
  z_stream zs{};
  // 16+MAX_WBITS selects the gzip wrapper.
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK)
    throw ParseError(path + ": zlib init failed");
  std::vector<uint8_t> out;
  out.reserve(raw.size() * 4);
  std::vector<uint8_t> buf(1 << 16);
  zs.next_in = raw.data();
  zs.avail_in = uInt(raw.size());
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = buf.data();
    zs.avail_out = uInt(buf.size());
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw ParseError(path + ": corrupt gzip stream (zlib rc " +
                       std::to_string(rc) + ")");
    }
    out.insert(out.end(), buf.data(), buf.data() + (buf.size() - zs.avail_out));
  }
  inflateEnd(&zs);
  return out;
}

uint32_t be32(ByteReader& r) {
  r.need(4);
  uint32_t v = uint32_t(r.p[r.off]) << 24 | uint32_t(r.p[r.off + 1]) << 16 |
               uint32_t(r.p[r.off + 2]) << 8 | uint32_t(r.p[r.off + 3]);
  r.off += 4;
  return v;
}

}  // namespace

IdxImages read_idx_images(const std::string& path) {
  std::vector<uint8_t> bytes = maybe_gunzip(read_file(path), path);
  ByteReader r(bytes.data(), bytes.size());
  uint32_t magic = be32(r);
  if (magic != 0x803)
    throw ParseError(path + ": bad IDX image magic " + std::to_string(magic));
  IdxImages out;
  out.count = be32(r);
  out.rows = be32(r);
  out.cols = be32(r);
  uint64_t n = uint64_t(out.count) * out.rows * out.cols;
  if (r.remaining() != n)
    throw ParseError(path + ": expected " + std::to_string(n) +
                     " pixel bytes, found " + std::to_string(r.remaining()));
  out.pixels.assign(bytes.begin() + long(r.off), bytes.end());
  return out;
}

std::vector<uint8_t> read_idx_labels(const std::string& path) {
  std::vector<uint8_t> bytes = maybe_gunzip(read_file(path), path);
  ByteReader r(bytes.data(), bytes.size());
  uint32_t magic = be32(r);
  if (magic != 0x801)
    throw ParseError(path + ": bad IDX label magic " + std::to_string(magic));
  uint32_t count = be32(r);
  if (r.remaining() != count)
    throw ParseError(path + ": expected " + std::to_string(count) +
                     " label bytes, found " + std::to_string(r.remaining()));
  return std::vector<uint8_t>(bytes.begin() + long(r.off), bytes.end());
}

Dataset idx_to_dataset(const IdxImages& images, const std::vector<uint8_t>& labels,
                       bool rate_encoded) {
  if (images.count != labels.size())
    throw ArgumentError("idx_to_dataset: " + std::to_string(images.count) +
                        " images vs " + std::to_string(labels.size()) +
                        " labels");
  Dataset d;
  d.input_width = uint64_t(images.rows) * images.cols;
  d.x.resize(images.pixels.size());
  for (size_t i = 0; i < images.pixels.size(); ++i)
    d.x[i] = rate_encoded ? float(images.pixels[i]) / 255.0f
                          : (images.pixels[i] > kBinaryPixelThreshold ? 1.0f : 0.0f);
  d.y = labels;
  return d;
}

}  // namespace lgn
