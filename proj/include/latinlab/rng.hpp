#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace latinlab {

/// Seeded generator with a fixed, platform-independent stream.
///
/// Stream contract (version 1):
///   - raw words come from std::mt19937_64 seeded with the 64-bit seed; the
///     standard fixes that engine's output sequence bit for bit;
///   - below(b) maps raw words to [0, b) with Lemire's multiply-shift and
///     rejection of the biased low band (one or more words per call);
///   - uniform() uses the top 53 bits of one word.
/// No std::*_distribution is used, since their outputs vary by library.
class Rng {
public:
    static constexpr std::string_view name = "mt19937_64+lemire/v1";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    std::uint64_t below(std::uint64_t bound) {
        // bound == 0 is a caller error; return 0 rather than loop forever.
        if (bound == 0) return 0;
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    int below(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool coin() { return (next() >> 63) != 0; }

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[below(static_cast<std::uint64_t>(i))]);
        }
    }

    /// Uniform k-subset of {0..n-1}, returned sorted (Floyd's algorithm).
    std::vector<int> subset(int n, int k) {
        std::vector<char> taken(static_cast<std::size_t>(n), 0);
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(k));
        for (int j = n - k; j < n; ++j) {
            const int t = below(j + 1);
            const int pick = taken[static_cast<std::size_t>(t)] ? j : t;
            taken[static_cast<std::size_t>(pick)] = 1;
            out.push_back(pick);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Each element of {0..n-1} independently with probability 1/2.
    std::vector<int> half_subset(int n) {
        std::vector<int> out;
        for (int i = 0; i < n; ++i) {
            if (coin()) out.push_back(i);
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer over (seed, stream); used for per-item substreams.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace latinlab
