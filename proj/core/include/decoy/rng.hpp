#pragma once

#include <cstdint>
#include <cmath>
#include <vector>
#include <string_view>

namespace decoy {

// Deterministic splitmix64 generator. The whole simulator depends on
// byte-identical reruns, so we never touch <random> distributions (their
// output is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    /// Standard normal via Box-Muller; the spare value is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Seed derivation: one master seed fans out into independent streams keyed
// by (purpose, index). Toggling one player's mode must not perturb another
// player's stream, so every consumer gets its own derived seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose,
                                 std::uint64_t index = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : purpose) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 0x00000100000001b3ULL;
    }
    h ^= master + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= index * 0xd1b54a32d192ed03ULL;
    Rng mix(h);
    return mix.next_u64();
}

}  // namespace decoy
