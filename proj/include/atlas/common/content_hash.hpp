#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

namespace atlas {

using ContentHash = std::array<std::uint8_t, 32>;

// SHA-256 of a byte buffer (backed by OpenSSL).
ContentHash content_hash(const void* data, std::size_t size);

std::string hash_hex(const ContentHash& h);

}  // namespace atlas
