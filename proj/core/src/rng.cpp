#include "cmoforge/rng.hpp"

#include <numeric>
#include <stdexcept>

namespace cmoforge {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::mt19937_64& RandomSource::stream(std::string_view name) {
    auto it = streams_.find(name);
    if (it != streams_.end()) return it->second;
    std::uint64_t state = seed_ ^ fnv1a64(name);
    std::uint64_t s = splitmix64(state);
    auto [pos, _] = streams_.emplace(std::string(name), std::mt19937_64(s));
    return pos->second;
}

std::uint64_t RandomSource::derive(std::uint64_t base, std::string_view a,
                                   std::string_view b, std::uint64_t index) {
    std::uint64_t state = base;
    state ^= fnv1a64(a);
    state = splitmix64(state);
    state ^= fnv1a64(b);
    state = splitmix64(state);
    state ^= index;
    return splitmix64(state);
}

double uniform01(std::mt19937_64& rng) {
    // 53-bit mantissa; independent of libstdc++ distribution internals.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return static_cast<std::size_t>(v % n);
}

std::vector<std::size_t> sample_without_replacement(std::mt19937_64& rng,
                                                    std::size_t k, std::size_t n) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // Partial Fisher-Yates: first k slots end up uniformly distributed.
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + uniform_index(rng, n - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

}  // namespace cmoforge
