#pragma once

#include <cstdint>
#include <string_view>

namespace mftd {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Seed for a named pipeline stage, chained from the previous stage's seed.
inline std::uint64_t stage_seed(std::uint64_t previous, std::string_view stage) {
    return splitmix64(previous ^ fnv1a64(stage));
}

// Independent sub-stream for the (l, k) trace vector.
inline std::uint64_t trace_seed(std::uint64_t master, std::uint32_t l, std::uint32_t k) {
    return splitmix64(master ^ splitmix64((static_cast<std::uint64_t>(k) << 32) | l));
}

}  // namespace mftd
