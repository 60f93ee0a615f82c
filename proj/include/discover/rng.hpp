#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace discover::rng {

// Generator identifier written into every output file header.
inline constexpr std::string_view kGeneratorName = "mt19937_64/splitmix64";

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-(run, expert) substream: mt19937_64 is bit-exact across platforms,
// and splitmix64 decorrelates the (seed, stream) pairs.
class Stream {
  public:
    Stream(std::uint64_t seed, std::uint64_t stream_id)
        : gen_(splitmix64(splitmix64(seed) ^ splitmix64(~stream_id))) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform integer in [1, n]. Lemire's method; avoids the
    // implementation-defined std::uniform_int_distribution.
    std::uint64_t uniform_1_to_n(std::uint64_t n) {
        using u128 = unsigned __int128;
        std::uint64_t x = next_u64();
        u128 m = static_cast<u128>(x) * static_cast<u128>(n);
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (-n) % n;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<u128>(x) * static_cast<u128>(n);
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64) + 1;
    }

    // Uniform double strictly inside (0, 1).
    double uniform_open01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

  private:
    std::mt19937_64 gen_;
};

} // namespace discover::rng
