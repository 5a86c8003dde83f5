#pragma once

#include <cmath>
#include <cstdint>

namespace cohortdiff {

// All Monte Carlo randomness flows through SplitMix64 (Steele, Lea & Flood 2014).
// Replicate k of a run with master seed s draws exclusively from the stream
// keyed by derive_stream(s, k), so a replicate's output is a pure function of
// (s, k) and results are identical for any number of workers or any schedule.
// The generator and the derivation below are part of the reproducibility
// contract: changing either changes every Monte Carlo result at equal seeds.

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Key for an independent child stream. Nested calls fan out further, e.g.
// derive_stream(derive_stream(seed, individual), window).
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed + kGoldenGamma * (2 * stream + 1));
}

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next() {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Unbiased integer in [0, n); n >= 1.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    // Exponential waiting time with the given rate (> 0).
    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

    // Standard normal via Box-Muller; the sibling value is discarded so the
    // stream position stays a simple function of the number of calls.
    double normal() {
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

private:
    std::uint64_t state_;
};

} // namespace cohortdiff
