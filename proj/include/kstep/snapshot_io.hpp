// Framed binary snapshot format: run-length-encoded occupancy with a CRC.
//
//   magic "KSNP" | u32 version | u64 L | u8 topology | i64 origin
//   | u8 first_bit | u64 nruns | u32 run[nruns] | u32 crc32
//
// All integers little-endian; the CRC (IEEE reflected, poly 0xEDB88320)
// covers every byte from the magic through the last run length.

#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include "kstep/lattice.hpp"

namespace kstep {

namespace detail {

inline uint32_t crc32_update(uint32_t crc, const void* data, size_t len) {
  static const auto table = [] {
    std::array<uint32_t, 256> t{};
    for (uint32_t i = 0; i < 256; ++i) {
      uint32_t c = i;
      for (int j = 0; j < 8; ++j) c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  const auto* p = static_cast<const unsigned char*>(data);
  crc = ~crc;
  for (size_t i = 0; i < len; ++i) crc = table[(crc ^ p[i]) & 0xFFu] ^ (crc >> 8);
  return ~crc;
}

struct ByteSink {
  std::vector<unsigned char> bytes;
  template <typename T>
  void put(T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    bytes.insert(bytes.end(), buf, buf + sizeof(T));
  }
};

struct ByteSource {
  const unsigned char* p;
  size_t left;
  template <typename T>
  T get() {
    if (left < sizeof(T)) throw std::runtime_error("snapshot: truncated");
    T v;
    std::memcpy(&v, p, sizeof(T));
    p += sizeof(T);
    left -= sizeof(T);
    return v;
  }
};

}  // namespace detail

inline std::vector<unsigned char> encode_snapshot(const Configuration& cfg) {
  detail::ByteSink sink;
  sink.put<char>('K');
  sink.put<char>('S');
  sink.put<char>('N');
  sink.put<char>('P');
  sink.put<uint32_t>(1);
  sink.put<uint64_t>(static_cast<uint64_t>(cfg.size()));
  sink.put<uint8_t>(cfg.topology == Topology::ring ? 0 : 1);
  sink.put<int64_t>(cfg.origin);
  const uint8_t first = cfg.occ.empty() ? 0 : cfg.occ.front();
  sink.put<uint8_t>(first);
  std::vector<uint32_t> runs;
  uint32_t run = 0;
  uint8_t cur = first;
  for (uint8_t b : cfg.occ) {
    if (b == cur) {
      ++run;
    } else {
      runs.push_back(run);
      cur = b;
      run = 1;
    }
  }
  if (run > 0) runs.push_back(run);
  sink.put<uint64_t>(static_cast<uint64_t>(runs.size()));
  for (uint32_t r : runs) sink.put<uint32_t>(r);
  const uint32_t crc = detail::crc32_update(0, sink.bytes.data(), sink.bytes.size());
  sink.put<uint32_t>(crc);
  return sink.bytes;
}

inline Configuration decode_snapshot(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 4 + 4 + 8 + 1 + 8 + 1 + 8 + 4)
    throw std::runtime_error("snapshot: truncated");
  const uint32_t stored_crc =
      detail::crc32_update(0, bytes.data(), bytes.size() - 4);
  detail::ByteSource src{bytes.data(), bytes.size()};
  if (src.get<char>() != 'K' || src.get<char>() != 'S' || src.get<char>() != 'N' ||
      src.get<char>() != 'P')
    throw std::runtime_error("snapshot: bad magic");
  if (src.get<uint32_t>() != 1) throw std::runtime_error("snapshot: bad version");
  const uint64_t L = src.get<uint64_t>();
  const uint8_t topo = src.get<uint8_t>();
  const int64_t origin = src.get<int64_t>();
  const uint8_t first = src.get<uint8_t>();
  const uint64_t nruns = src.get<uint64_t>();
  Configuration cfg;
  cfg.topology = topo == 0 ? Topology::ring : Topology::segment;
  cfg.origin = origin;
  cfg.occ.reserve(L);
  uint8_t cur = first;
  for (uint64_t i = 0; i < nruns; ++i) {
    const uint32_t run = src.get<uint32_t>();
    cfg.occ.insert(cfg.occ.end(), run, cur);
    cur = !cur;
  }
  if (cfg.occ.size() != L) throw std::runtime_error("snapshot: run lengths disagree with L");
  uint32_t file_crc;
  std::memcpy(&file_crc, bytes.data() + bytes.size() - 4, 4);
  if (file_crc != stored_crc) throw std::runtime_error("snapshot: checksum mismatch");
  return cfg;
}

inline void write_snapshot(const std::string& path, const Configuration& cfg) {
  const auto bytes = encode_snapshot(cfg);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_snapshot: cannot open " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

inline Configuration read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace kstep
