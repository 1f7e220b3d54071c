#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "atlas/common/content_hash.hpp"
#include "atlas/common/id.hpp"

namespace atlas::vimap {

// Resource owners: a vertex, a set of missions, or a bare timestamp.
using ResourceOwner =
    std::variant<VertexId, std::vector<MissionId>, std::int64_t>;

struct ResourceRef {
  ResourceId id;
  std::uint32_t kind = 0;
  ResourceOwner owner;
  std::string relative_path;  // below the resource directory
  std::uint64_t byte_length = 0;
  ContentHash hash{};
};

// Out-of-core store for opaque byte blobs. Payloads live as content-addressed
// files below a base directory; an LRU cache bounds the bytes kept resident.
class ResourceStore {
 public:
  static constexpr std::size_t kDefaultCacheCapacity = 64;

  void set_directory(const std::string& directory) { directory_ = directory; }
  [[nodiscard]] const std::string& directory() const { return directory_; }

  void set_cache_capacity(std::size_t entries);
  [[nodiscard]] std::size_t cache_capacity() const { return cache_capacity_; }

  ResourceRef attach(std::uint32_t kind, const ResourceOwner& owner,
                     const std::vector<std::uint8_t>& bytes);
  // Loads (through the cache) and verifies the content hash.
  [[nodiscard]] std::vector<std::uint8_t> load(const ResourceRef& ref) const;

  [[nodiscard]] const std::map<ResourceId, ResourceRef>& refs() const {
    return refs_;
  }
  void insert_ref(const ResourceRef& ref);  // used by deserialization

  // Copies all payload files into another directory (used on save-as).
  void copy_payloads_to(const std::string& target_directory) const;

  // Adopts another store's refs, copying payload files over when the two
  // stores use different directories (used on map merge).
  void merge_from(const ResourceStore& other);

  // Cache instrumentation for tests.
  [[nodiscard]] std::size_t cache_resident_bytes() const { return resident_bytes_; }
  [[nodiscard]] std::size_t cache_peak_resident_bytes() const { return peak_resident_bytes_; }
  [[nodiscard]] std::size_t cache_hits() const { return cache_hits_; }

  [[nodiscard]] bool structurally_equal(const ResourceStore& other) const;

 private:
  void cache_insert(const ResourceId& id, std::vector<std::uint8_t> bytes) const;

  std::string directory_;
  std::map<ResourceId, ResourceRef> refs_;

  std::size_t cache_capacity_ = kDefaultCacheCapacity;
  // LRU: most recently used at the front.
  mutable std::list<std::pair<ResourceId, std::vector<std::uint8_t>>> cache_;
  mutable std::size_t resident_bytes_ = 0;
  mutable std::size_t peak_resident_bytes_ = 0;
  mutable std::size_t cache_hits_ = 0;
};

}  // namespace atlas::vimap
