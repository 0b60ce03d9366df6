#pragma once

#include <boost/multiprecision/miller_rabin.hpp>

#include <random>

#include "cwp/error.hpp"
#include "cwp/ints.hpp"
#include "cwp/rng.hpp"

namespace cwp {

// Miller-Rabin with 64 rounds: error probability at most 4^-64 per composite,
// far below the 2^-80 budget. Witness choices come from the seeded stream so
// results are reproducible.
inline bool is_probable_prime(const Int& n, Rng& rng) {
    std::mt19937_64 gen(rng.next());
    return boost::multiprecision::miller_rabin_test(n, 64, gen);
}

// Uniform probable prime with exactly `bits` bits.
inline Int sample_prime(Rng& rng, unsigned bits) {
    if (bits < 2) fail(Code::BadParams, "prime_bits must be >= 2");
    for (;;) {
        Int cand = rng.bits(bits);
        if (bits > 1) cand |= 1;  // odd
        if (is_probable_prime(cand, rng)) return cand;
    }
}

// log2 of the count of `bits`-bit primes, estimated by the prime number
// theorem; used only for the reported residual error bound.
inline double prime_count_log2(unsigned bits) {
    // pi(2^b) - pi(2^(b-1)) ~ 2^(b-1) / (b ln 2)
    return static_cast<double>(bits - 1) - std::log2(static_cast<double>(bits) * 0.6931471805599453);
}

}  // namespace cwp
