#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace cwp {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Number of bits in |v|; bit_length(0) == 0.
inline unsigned bit_length(const Int& v) {
    if (v == 0) return 0;
    return static_cast<unsigned>(boost::multiprecision::msb(boost::multiprecision::abs(v))) + 1;
}

inline Int int_pow(Int base, Int exp) {
    Int r = 1;
    while (exp > 0) {
        if (boost::multiprecision::bit_test(exp, 0)) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

// Canonical residue in [0, m).
inline Int mod_norm(const Int& v, const Int& m) {
    Int r = v % m;
    if (r < 0) r += m;
    return r;
}

inline Int mod_mul(const Int& a, const Int& b, const Int& m) { return mod_norm(a * b, m); }
inline Int mod_add(const Int& a, const Int& b, const Int& m) { return mod_norm(a + b, m); }

inline Int mod_pow(Int base, Int exp, const Int& m) {
    Int r = 1;
    base = mod_norm(base, m);
    while (exp > 0) {
        if (boost::multiprecision::bit_test(exp, 0)) r = mod_mul(r, base, m);
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Modular inverse; requires gcd(a, m) == 1.
inline Int mod_inv(const Int& a, const Int& m) {
    Int t = 0, new_t = 1;
    Int r = m, new_r = mod_norm(a, m);
    while (new_r != 0) {
        Int q = r / new_r;
        Int tmp = t - q * new_t;
        t = new_t; new_t = tmp;
        tmp = r - q * new_r;
        r = new_r; new_r = tmp;
    }
    if (r != 1) throw std::runtime_error("mod_inv: not invertible");
    return mod_norm(t, m);
}

}  // namespace cwp
