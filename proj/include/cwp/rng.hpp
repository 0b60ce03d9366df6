#pragma once

#include <cstdint>
#include <vector>

#include "cwp/ints.hpp"

namespace cwp {

// Deterministic splitmix64 stream. All randomness in the library and the CLI
// flows through this so that a seed fully determines every output byte.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n) {
        // multiply-shift reduction; bias is negligible for our n and irrelevant
        // for test-instance generation, determinism is what matters
        while (true) {
            std::uint64_t x = next();
            __uint128_t m = static_cast<__uint128_t>(x) * n;
            std::uint64_t lo = static_cast<std::uint64_t>(m);
            if (lo >= n || lo >= (-n) % n) return static_cast<std::uint64_t>(m >> 64);
        }
    }

    // Uniform in [lo, hi] inclusive.
    long long range(long long lo, long long hi) {
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool chance(double p) { return static_cast<double>(next() >> 11) * 0x1.0p-53 < p; }

    // Uniform k-bit integer with the top bit set.
    Int bits(unsigned k) {
        Int v = 1;
        for (unsigned i = 1; i < k; ++i) {
            v <<= 1;
            if (next() & 1) v |= 1;
        }
        return v;
    }

    // Independent child stream; used to make parallel trials schedule-invariant.
    Rng split(std::uint64_t salt) {
        Rng child(state_ ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
        child.next();
        return child;
    }

  private:
    std::uint64_t state_;
};

}  // namespace cwp
