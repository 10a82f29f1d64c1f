#include <cstring>

#include "lgn/network.hpp"

namespace lgn {

namespace {

constexpr char kMagic[8] = {'L', 'G', 'N', 'C', 'K', 'P', 'T', '\0'};
constexpr uint32_t kVersionTag = 1;
constexpr uint32_t kFlagHard = 1u << 0;

void put_config(std::vector<uint8_t>& out, const NetworkConfig& cfg) {
  put_u64(out, cfg.input_width);
  put_u32(out, uint32_t(cfg.num_classes));
  put_u32(out, cfg.is_lut ? 1 : 0);
  put_u32(out, uint32_t(cfg.fanin()));
  put_u32(out, uint32_t(cfg.layer_sizes.size()));
  for (uint64_t s : cfg.layer_sizes) put_u64(out, s);
  put_f64(out, cfg.temperature);
  put_u64(out, cfg.seed);
  put_f64(out, cfg.learning_rate);
  put_u32(out, uint32_t(cfg.epochs));
  put_u32(out, uint32_t(cfg.batch_size));
}

NetworkConfig read_config(ByteReader& r) {
  NetworkConfig cfg;
  cfg.input_width = r.u64();
  cfg.num_classes = int(r.u32());
  cfg.is_lut = r.u32() != 0;
  int fanin = int(r.u32());
  if (cfg.is_lut)
    cfg.lut_fanin = fanin;
  else if (fanin != 2)
    throw ParseError("checkpoint: gate networks must have fanin 2");
  uint32_t n_layers = r.u32();
  if (n_layers == 0 || n_layers > 1024)
    throw ParseError("checkpoint: implausible layer count");
  cfg.layer_sizes.resize(n_layers);
  for (auto& s : cfg.layer_sizes) s = r.u64();
  cfg.temperature = r.f64();
  cfg.seed = r.u64();
  cfg.learning_rate = r.f64();
  cfg.epochs = int(r.u32());
  cfg.batch_size = int(r.u32());
  try {
    validate_config(cfg);
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("checkpoint: invalid config: ") + e.what());
  }
  return cfg;
}

template <typename LayerT>
void put_wires(std::vector<uint8_t>& out, const std::vector<LayerT>& layers) {
  for (const LayerT& ly : layers) {
    put_u64(out, ly.wires.size());
    for (uint32_t w : ly.wires) put_u32(out, w);
  }
}

template <typename LayerT>
void read_wires(ByteReader& r, const NetworkConfig& cfg,
                std::vector<LayerT>& layers) {
  layers.resize(cfg.layer_sizes.size());
  uint64_t prev_width = cfg.input_width;
  for (size_t l = 0; l < layers.size(); ++l) {
    LayerT& ly = layers[l];
    ly.width = cfg.layer_sizes[l];
    ly.fanin = cfg.fanin();
    uint64_t n = r.u64();
    if (n != ly.width * uint64_t(ly.fanin))
      throw ParseError("checkpoint: wire count mismatch in layer " +
                       std::to_string(l));
    ly.wires.resize(size_t(n));
    for (auto& w : ly.wires) {
      w = r.u32();
      if (uint64_t(w) >= prev_width)
        throw ParseError("checkpoint: wire index out of range in layer " +
                         std::to_string(l));
    }
    prev_width = ly.width;
  }
}

void append_checksum(std::vector<uint8_t>& out) {
  put_u64(out, fnv1a64(out.data(), out.size()));
}

ByteReader open_reader(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < sizeof(kMagic) + 8 + 8)
    throw ParseError("checkpoint: truncated (size " +
                     std::to_string(bytes.size()) + ")");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw ParseError("checkpoint: bad magic");
  // The trailing checksum is stored little-endian; recompose portably.
  uint64_t stored = 0;
  for (size_t i = 0; i < 8; ++i)
    stored |= uint64_t(bytes[bytes.size() - 8 + i]) << (8 * i);
  if (stored != fnv1a64(bytes.data(), bytes.size() - 8))
    throw ParseError("checkpoint: checksum mismatch");
  return ByteReader(bytes.data(), bytes.size() - 8, sizeof(kMagic));
}

}  // namespace

std::vector<uint8_t> serialize_checkpoint(const SoftNetwork& net) {
  std::vector<uint8_t> out(kMagic, kMagic + sizeof(kMagic));
  put_u32(out, kVersionTag);
  put_u32(out, 0);
  put_config(out, net.config);
  put_wires(out, net.layers);
  for (const Layer& ly : net.layers) {
    put_u64(out, ly.params.size());
    for (double p : ly.params) put_f64(out, p);
  }
  append_checksum(out);
  return out;
}

std::vector<uint8_t> serialize_checkpoint(const HardNetwork& net) {
  std::vector<uint8_t> out(kMagic, kMagic + sizeof(kMagic));
  put_u32(out, kVersionTag);
  put_u32(out, kFlagHard);
  put_config(out, net.config);
  put_wires(out, net.layers);
  for (const HardLayer& ly : net.layers) {
    put_u64(out, ly.choice.size());
    out.insert(out.end(), ly.choice.begin(), ly.choice.end());
  }
  append_checksum(out);
  return out;
}

LoadedCheckpoint parse_checkpoint(const std::vector<uint8_t>& bytes) {
  ByteReader r = open_reader(bytes);
  uint32_t version = r.u32();
  if (version != kVersionTag)
    throw ParseError("checkpoint: unsupported version " + std::to_string(version));
  uint32_t flags = r.u32();
  if (flags & ~kFlagHard)
    throw ParseError("checkpoint: unknown flag bits");
  NetworkConfig cfg = read_config(r);

  LoadedCheckpoint out;
  out.hard = (flags & kFlagHard) != 0;
  if (!out.hard) {
    SoftNetwork net;
    net.config = cfg;
    read_wires(r, cfg, net.layers);
    for (size_t l = 0; l < net.layers.size(); ++l) {
      Layer& ly = net.layers[l];
      uint64_t n = r.u64();
      uint64_t want = cfg.is_lut ? ly.width << cfg.lut_fanin : ly.width * 16;
      if (n != want)
        throw ParseError("checkpoint: parameter count mismatch in layer " +
                         std::to_string(l));
      ly.params.resize(size_t(n));
      for (auto& p : ly.params) p = r.f64();
    }
    if (r.remaining() != 0) throw ParseError("checkpoint: trailing bytes");
    out.soft = std::move(net);
  } else {
    HardNetwork net;
    net.config = cfg;
    read_wires(r, cfg, net.layers);
    for (size_t l = 0; l < net.layers.size(); ++l) {
      HardLayer& ly = net.layers[l];
      uint64_t n = r.u64();
      uint64_t want = cfg.is_lut ? ly.width << cfg.lut_fanin : ly.width;
      if (n != want)
        throw ParseError("checkpoint: choice count mismatch in layer " +
                         std::to_string(l));
      ly.choice.resize(size_t(n));
      for (auto& c : ly.choice) {
        c = r.u8();
        if (c > (cfg.is_lut ? 1 : 15))
          throw ParseError("checkpoint: invalid choice value in layer " +
                           std::to_string(l));
      }
    }
    if (r.remaining() != 0) throw ParseError("checkpoint: trailing bytes");
    out.hardnet = std::move(net);
  }
  return out;
}

}  // namespace lgn
