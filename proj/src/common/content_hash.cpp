#include "atlas/common/content_hash.hpp"

#include <openssl/evp.h>

#include "atlas/common/check.hpp"

namespace atlas {

ContentHash content_hash(const void* data, std::size_t size) {
  ContentHash out{};
  unsigned int out_len = 0;
  const int ok = EVP_Digest(data, size, out.data(), &out_len, EVP_sha256(), nullptr);
  ATLAS_CHECK(ok == 1 && out_len == out.size());
  return out;
}

std::string hash_hex(const ContentHash& h) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * h.size());
  for (std::uint8_t b : h) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

}  // namespace atlas
