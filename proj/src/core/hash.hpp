#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace treering {

// FNV-1a 64. Identity checks only (config/checkpoint fingerprints), not
// cryptographic.
std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0xcbf29ce484222325ull);

std::string hash_hex(std::uint64_t h);
std::string hash_file_hex(const std::string& path);

}  // namespace treering
