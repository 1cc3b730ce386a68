#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace cmoforge {

/// 64-bit FNV-1a. Used for substream derivation, prompt hashes and file checksums.
std::uint64_t fnv1a64(std::string_view bytes);

/// One step of the splitmix64 sequence; mutates the state and returns the output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seeded collection of named, mutually independent random substreams.
///
/// Two RandomSource instances built from the same seed produce identical
/// output per substream, and draws from one substream never perturb another.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed) {}

    /// Engine for the given substream, created deterministically on first use.
    std::mt19937_64& stream(std::string_view name);

    std::uint64_t seed() const { return seed_; }

    /// Deterministic per-run seed from (base, problem, algorithm, run index).
    static std::uint64_t derive(std::uint64_t base, std::string_view a,
                                std::string_view b, std::uint64_t index);

private:
    std::uint64_t seed_;
    std::map<std::string, std::mt19937_64, std::less<>> streams_;
};

/// Uniform double in [0, 1).
double uniform01(std::mt19937_64& rng);

/// Uniform integer in [0, n).
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

/// k distinct indices from [0, n), uniform without replacement, in draw order.
std::vector<std::size_t> sample_without_replacement(std::mt19937_64& rng,
                                                    std::size_t k, std::size_t n);

}  // namespace cmoforge
