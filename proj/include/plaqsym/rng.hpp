#pragma once

#include <cstdint>

namespace plaqsym {

// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Stateless counter-based stream: value of element `counter` in stream `key`.
// Order-independent, so disorder realizations can be sampled site by site in
// any order (or in parallel) and still be bit-identical.
constexpr std::uint64_t counter_hash(std::uint64_t key, std::uint64_t counter) {
    return splitmix64(splitmix64(key) ^ (0x9e3779b97f4a7c15ull * (counter + 1)));
}

// Uniform double in [0, 1) from a 64-bit hash.
constexpr double hash_u01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

} // namespace plaqsym
