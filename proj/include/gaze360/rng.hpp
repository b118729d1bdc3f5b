#pragma once

#include <cstdint>

namespace gaze360 {

// SplitMix64 (Steele, Lea & Flood variant used by java.util.SplittableRandom).
// Pinned byte-for-byte so every reimplementation reproduces identical streams;
// test vectors live in tests/test_synth.cpp and in the README.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 bits of mantissa.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo,hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [lo,hi] via rejection-free modulo (range is tiny vs 2^64;
    // bias is < 2^-50 and irrelevant here, determinism is what matters).
    int64_t uniform_int(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
    }

private:
    uint64_t state_;
};

}  // namespace gaze360
