#include "core/hash.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "core/rng.hpp"

namespace treering {

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed) { return fnv1a64(s.data(), s.size(), seed); }

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

std::string hash_file_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file for hashing: " + path);
    std::uint64_t h = 0xcbf29ce484222325ull;
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        const std::streamsize got = in.gcount();
        if (got > 0) h = fnv1a64(buf.data(), static_cast<std::size_t>(got), h);
    }
    return hash_hex(h);
}

std::uint64_t Rng::derive(std::uint64_t master, std::string_view tag) {
    std::uint64_t h = fnv1a64(&master, sizeof(master));
    h = fnv1a64(tag, h);
    // splitmix64 finalizer to decorrelate nearby seeds
    h += 0x9e3779b97f4a7c15ull;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
    return h ^ (h >> 31);
}

}  // namespace treering
