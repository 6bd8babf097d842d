#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "wordspot/retrieval.hpp"

namespace wordspot::io {

/// File layout, all integers little-endian:
///   magic "WSPTIDX\0" | u32 version | u32 n + n config bytes | u64 config fingerprint |
///   u32 dimension | u64 entry count | entries | u64 FNV-1a checksum of everything before it
/// Each entry: u32-length-prefixed id, label and page strings, i32 width, dimension x f64.
inline constexpr std::string_view kIndexMagic{"WSPTIDX\0", 8};
inline constexpr std::uint32_t kIndexVersion = 1;

std::vector<std::uint8_t> serialize_index(const retrieval::Index& index);

/// Throws FormatError for bad magic, unsupported version, fingerprint or checksum mismatch.
retrieval::Index deserialize_index(std::string_view bytes);

/// Writes to a sibling temporary file and renames it into place.
void save_index(const std::filesystem::path& path, const retrieval::Index& index);

retrieval::Index load_index(const std::filesystem::path& path);

/// Loads and refuses (ConfigMismatchError) an index built with a different extraction config.
retrieval::Index load_index(const std::filesystem::path& path, const DescriptorConfig& expected);

}  // namespace wordspot::io
