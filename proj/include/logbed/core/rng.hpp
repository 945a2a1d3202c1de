#pragma once

#include <cstdint>
#include <string_view>

namespace logbed::rng {

// SplitMix64. Mixing constants: gamma 0x9E3779B97F4A7C15,
// finalizers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.
// Chosen for cross-platform bit-exact reproducibility.
class Stream {
public:
    Stream() = default;
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1), 53-bit resolution. Exact in IEEE754 doubles.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Inclusive bounds. Modulo draw; bias is irrelevant at our range sizes
    // and the mapping must stay trivially portable.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1u;
        return lo + static_cast<std::int64_t>(next() % span);
    }

    double uniform_real(double lo, double hi) { return lo + unit() * (hi - lo); }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }

    bool chance(double p) { return unit() < p; }

    // Irwin-Hall(12) approximation of a standard normal; avoids libm so the
    // byte stream is identical on every platform.
    double gauss() {
        double acc = 0.0;
        for (int i = 0; i < 12; ++i) acc += unit();
        return acc - 6.0;
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_ = 0;
};

constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Independent stream per (seed, consumer label). Adding a consumer never
// perturbs the draws of existing ones.
inline Stream derive(std::uint64_t seed, std::string_view label) {
    return Stream(mix64(seed ^ fnv1a64(label)));
}

} // namespace logbed::rng
