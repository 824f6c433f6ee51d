#pragma once

// Little-endian primitives shared by the table and checkpoint formats.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

namespace cmr::binary {

template <typename UInt>
void write_le(std::ostream& out, UInt value) {
  unsigned char bytes[sizeof(UInt)];
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(UInt));
}

template <typename UInt>
bool read_le(std::istream& in, UInt& value) {
  unsigned char bytes[sizeof(UInt)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(UInt))) return false;
  value = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    value |= static_cast<UInt>(bytes[i]) << (8 * i);
  }
  return true;
}

inline void write_f32(std::ostream& out, float v) {
  write_le(out, std::bit_cast<std::uint32_t>(v));
}
inline void write_f64(std::ostream& out, double v) {
  write_le(out, std::bit_cast<std::uint64_t>(v));
}
inline bool read_f32(std::istream& in, float& v) {
  std::uint32_t bits;
  if (!read_le(in, bits)) return false;
  v = std::bit_cast<float>(bits);
  return true;
}
inline bool read_f64(std::istream& in, double& v) {
  std::uint64_t bits;
  if (!read_le(in, bits)) return false;
  v = std::bit_cast<double>(bits);
  return true;
}

}  // namespace cmr::binary
