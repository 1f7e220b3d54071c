#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>

namespace atlas {

// 128-bit identifier. Zero is reserved for "unset".
template <typename Tag>
struct UniqueId {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  constexpr UniqueId() = default;
  constexpr UniqueId(std::uint64_t h, std::uint64_t l) : hi(h), lo(l) {}

  [[nodiscard]] bool is_set() const { return hi != 0 || lo != 0; }

  template <typename Rng>
  static UniqueId random(Rng& rng) {
    UniqueId id;
    while (!id.is_set()) {
      id.hi = rng();
      id.lo = rng();
    }
    return id;
  }

  [[nodiscard]] std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(32, '0');
    for (int i = 0; i < 16; ++i) {
      out[15 - i] = digits[(hi >> (4 * i)) & 0xF];
      out[31 - i] = digits[(lo >> (4 * i)) & 0xF];
    }
    return out;
  }

  static UniqueId from_hex(const std::string& s) {
    UniqueId id;
    if (s.size() != 32) return id;
    auto nibble = [](char c) -> std::uint64_t {
      if (c >= '0' && c <= '9') return static_cast<std::uint64_t>(c - '0');
      if (c >= 'a' && c <= 'f') return static_cast<std::uint64_t>(c - 'a' + 10);
      if (c >= 'A' && c <= 'F') return static_cast<std::uint64_t>(c - 'A' + 10);
      return 0;
    };
    for (int i = 0; i < 16; ++i) id.hi = (id.hi << 4) | nibble(s[i]);
    for (int i = 16; i < 32; ++i) id.lo = (id.lo << 4) | nibble(s[i]);
    return id;
  }

  friend bool operator==(const UniqueId&, const UniqueId&) = default;
  friend auto operator<=>(const UniqueId&, const UniqueId&) = default;
};

struct MissionIdTag {};
struct VertexIdTag {};
struct EdgeIdTag {};
struct LandmarkIdTag {};
struct ResourceIdTag {};

using MissionId = UniqueId<MissionIdTag>;
using VertexId = UniqueId<VertexIdTag>;
using EdgeId = UniqueId<EdgeIdTag>;
using LandmarkId = UniqueId<LandmarkIdTag>;
using ResourceId = UniqueId<ResourceIdTag>;

}  // namespace atlas

namespace std {
template <typename Tag>
struct hash<atlas::UniqueId<Tag>> {
  size_t operator()(const atlas::UniqueId<Tag>& id) const noexcept {
    return static_cast<size_t>(id.hi ^ (id.lo * 0x9E3779B97F4A7C15ull));
  }
};
}  // namespace std
