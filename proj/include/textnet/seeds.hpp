#pragma once

#include <cstdint>
#include <string_view>

namespace textnet {

inline uint64_t fnv1a64(std::string_view bytes, uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Per-stage seed scheme: every randomized stage draws its seed from the
// master seed and a fixed stage label, so stages can be rerun in isolation
// and still reproduce the full run bit for bit.
inline uint64_t derive_seed(uint64_t master, std::string_view stage) {
    return splitmix64(master ^ fnv1a64(stage));
}

}  // namespace textnet
