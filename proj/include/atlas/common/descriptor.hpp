#pragma once

#include <array>
#include <bit>
#include <cstdint>

namespace atlas {

// Fixed-width 256-bit binary feature descriptor.
using BinaryDescriptor = std::array<std::uint64_t, 4>;

constexpr int kDescriptorBits = 256;

inline int descriptor_bit(const BinaryDescriptor& d, int i) {
  return static_cast<int>((d[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1u);
}

inline void set_descriptor_bit(BinaryDescriptor& d, int i, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (i % 64);
  if (value) {
    d[static_cast<std::size_t>(i) / 64] |= mask;
  } else {
    d[static_cast<std::size_t>(i) / 64] &= ~mask;
  }
}

inline void flip_descriptor_bit(BinaryDescriptor& d, int i) {
  d[static_cast<std::size_t>(i) / 64] ^= std::uint64_t{1} << (i % 64);
}

inline int hamming_distance(const BinaryDescriptor& a,
                            const BinaryDescriptor& b) {
  int dist = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dist += std::popcount(a[i] ^ b[i]);
  }
  return dist;
}

}  // namespace atlas
