#pragma once

#include <string>

#include "atlas/vimap/map.hpp"

namespace atlas::vimap {

// Map directory layout:
//   manifest.json       format version, descriptor width, mission list
//   graph.bin           sectioned little-endian binary, CRC32C per section
//   resource_index.bin  resource references (same framing)
//   resources/          content-addressed payload files
void serialize(const ViMap& map, const std::string& directory);
ViMap deserialize(const std::string& directory);

}  // namespace atlas::vimap
