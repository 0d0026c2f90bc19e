#pragma once

#include <cstdint>
#include <string_view>

namespace drg {

// Derives an independent seed stream per consumer so changing one consumer
// (e.g. dropout) does not perturb another (e.g. weight init).
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view consumer,
                                 std::uint64_t index = 0) {
    std::uint64_t h = 1469598103934665603ull;
    for (char ch : consumer) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ull;
    }
    h ^= root + 0x9e3779b97f4a7c15ull;
    h ^= index * 0xbf58476d1ce4e5b9ull;
    // splitmix64 finalizer
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebull;
    h ^= h >> 31;
    return h;
}

}  // namespace drg
