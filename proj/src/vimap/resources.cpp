#include "atlas/vimap/resources.hpp"

#include <filesystem>
#include <fstream>

#include "atlas/common/check.hpp"

namespace atlas::vimap {

namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open resource file: " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

void write_file(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write resource file: " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

void ResourceStore::set_cache_capacity(std::size_t entries) {
  cache_capacity_ = entries;
  while (cache_.size() > cache_capacity_) {
    resident_bytes_ -= cache_.back().second.size();
    cache_.pop_back();
  }
}

ResourceRef ResourceStore::attach(std::uint32_t kind, const ResourceOwner& owner,
                                  const std::vector<std::uint8_t>& bytes) {
  if (directory_.empty()) {
    throw InvariantError("resource store has no directory configured");
  }
  fs::create_directories(directory_);

  ResourceRef ref;
  ref.kind = kind;
  ref.owner = owner;
  ref.byte_length = bytes.size();
  ref.hash = content_hash(bytes.data(), bytes.size());
  ref.relative_path = hash_hex(ref.hash) + ".bin";
  // Resource ids are content-derived so identical attachments are stable.
  ref.id = ResourceId(
      std::uint64_t(ref.hash[0]) << 56 | std::uint64_t(ref.hash[1]) << 48 |
          std::uint64_t(ref.hash[2]) << 40 | std::uint64_t(ref.hash[3]) << 32 |
          std::uint64_t(ref.hash[4]) << 24 | std::uint64_t(ref.hash[5]) << 16 |
          std::uint64_t(ref.hash[6]) << 8 | std::uint64_t(ref.hash[7]),
      std::uint64_t(ref.hash[8]) << 56 | std::uint64_t(ref.hash[9]) << 48 |
          std::uint64_t(ref.hash[10]) << 40 | std::uint64_t(ref.hash[11]) << 32 |
          std::uint64_t(ref.hash[12]) << 24 | std::uint64_t(ref.hash[13]) << 16 |
          std::uint64_t(ref.hash[14]) << 8 | std::uint64_t(ref.hash[15]));
  if (refs_.count(ref.id) > 0) {
    // Identical content attached twice; reuse the stored payload.
    return refs_.at(ref.id);
  }

  write_file(fs::path(directory_) / ref.relative_path, bytes);
  refs_.emplace(ref.id, ref);
  cache_insert(ref.id, bytes);
  return ref;
}

std::vector<std::uint8_t> ResourceStore::load(const ResourceRef& ref) const {
  for (auto it = cache_.begin(); it != cache_.end(); ++it) {
    if (it->first == ref.id) {
      ++cache_hits_;
      cache_.splice(cache_.begin(), cache_, it);
      return cache_.front().second;
    }
  }
  if (directory_.empty()) {
    throw IoError("resource store has no directory configured");
  }
  std::vector<std::uint8_t> bytes =
      read_file(fs::path(directory_) / ref.relative_path);
  if (bytes.size() != ref.byte_length ||
      content_hash(bytes.data(), bytes.size()) != ref.hash) {
    throw IoError("resource content hash mismatch: " + ref.relative_path);
  }
  cache_insert(ref.id, bytes);
  return bytes;
}

void ResourceStore::insert_ref(const ResourceRef& ref) {
  refs_[ref.id] = ref;
}

void ResourceStore::copy_payloads_to(const std::string& target_directory) const {
  if (refs_.empty()) return;
  fs::create_directories(target_directory);
  for (const auto& [id, ref] : refs_) {
    const fs::path source = fs::path(directory_) / ref.relative_path;
    const fs::path target = fs::path(target_directory) / ref.relative_path;
    if (fs::exists(target)) continue;
    if (!fs::exists(source)) {
      throw IoError("missing resource payload: " + source.string());
    }
    fs::copy_file(source, target, fs::copy_options::overwrite_existing);
  }
}

void ResourceStore::merge_from(const ResourceStore& other) {
  if (other.refs_.empty()) return;
  if (directory_.empty()) {
    directory_ = other.directory_;
  } else if (directory_ != other.directory_) {
    other.copy_payloads_to(directory_);
  }
  for (const auto& [id, ref] : other.refs_) {
    refs_[id] = ref;
  }
}

void ResourceStore::cache_insert(const ResourceId& id,
                                 std::vector<std::uint8_t> bytes) const {
  if (cache_capacity_ == 0) return;
  resident_bytes_ += bytes.size();
  cache_.emplace_front(id, std::move(bytes));
  while (cache_.size() > cache_capacity_) {
    resident_bytes_ -= cache_.back().second.size();
    cache_.pop_back();
  }
  peak_resident_bytes_ = std::max(peak_resident_bytes_, resident_bytes_);
}

bool ResourceStore::structurally_equal(const ResourceStore& other) const {
  if (refs_.size() != other.refs_.size()) return false;
  for (const auto& [id, ref] : refs_) {
    auto it = other.refs_.find(id);
    if (it == other.refs_.end()) return false;
    const ResourceRef& o = it->second;
    if (ref.kind != o.kind || ref.owner != o.owner ||
        ref.relative_path != o.relative_path ||
        ref.byte_length != o.byte_length || ref.hash != o.hash) {
      return false;
    }
  }
  return true;
}

}  // namespace atlas::vimap
