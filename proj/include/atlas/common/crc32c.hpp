#pragma once

#include <cstddef>
#include <cstdint>

#include <boost/crc.hpp>

namespace atlas {

// CRC-32C (Castagnoli). Check value for "123456789" is 0xE3069283.
inline std::uint32_t crc32c(const void* data, std::size_t size) {
  boost::crc_optimal<32, 0x1EDC6F41, 0xFFFFFFFF, 0xFFFFFFFF, true, true> crc;
  crc.process_bytes(data, size);
  return crc.checksum();
}

}  // namespace atlas
