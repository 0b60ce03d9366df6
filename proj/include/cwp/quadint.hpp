#pragma once

#include <ostream>
#include <string>

#include "cwp/error.hpp"
#include "cwp/ints.hpp"

namespace cwp {

// Element u + v*sqrt(2) of Z[sqrt(2)]. The representation is unique, so
// equality is componentwise and no normalization is ever needed.
struct QuadInt {
    Int u{0};
    Int v{0};

    QuadInt() = default;
    QuadInt(Int u_, Int v_) : u(std::move(u_)), v(std::move(v_)) {}
    explicit QuadInt(long long n) : u(n), v(0) {}

    static QuadInt zero() { return QuadInt{}; }
    static QuadInt one() { return QuadInt{1, 0}; }
    static QuadInt sqrt2() { return QuadInt{0, 1}; }

    bool operator==(const QuadInt& o) const = default;

    QuadInt operator+(const QuadInt& o) const { return {u + o.u, v + o.v}; }
    QuadInt operator-(const QuadInt& o) const { return {u - o.u, v - o.v}; }
    QuadInt operator-() const { return {-u, -v}; }

    // (u + v s)(u' + v' s) = (uu' + 2vv') + (uv' + vu') s  with s^2 = 2
    QuadInt operator*(const QuadInt& o) const {
        return {u * o.u + 2 * v * o.v, u * o.v + v * o.u};
    }

    QuadInt conj() const { return {u, -v}; }

    // Field norm u^2 - 2 v^2; multiplicative.
    Int norm() const { return u * u - 2 * v * v; }

    bool is_unit() const {
        Int n = norm();
        return n == 1 || n == -1;
    }

    // Inverse of a unit: conj / norm.
    QuadInt inv() const {
        Int n = norm();
        if (n == 1) return conj();
        if (n == -1) return -conj();
        fail(Code::NotInvertible, "QuadInt " + str() + " is not a unit");
    }

    std::string str() const { return u.str() + "+" + v.str() + "*sqrt2"; }
};

inline std::ostream& operator<<(std::ostream& os, const QuadInt& q) { return os << q.str(); }

inline QuadInt quad_pow(QuadInt base, Int e) {
    if (e < 0) {
        base = base.inv();
        e = -e;
    }
    QuadInt r = QuadInt::one();
    while (e > 0) {
        if (boost::multiprecision::bit_test(e, 0)) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

// Componentwise reduction, i.e. the image in F_p[x]/(x^2 - 2).
inline QuadInt quad_mod(const QuadInt& q, const Int& p) {
    return {mod_norm(q.u, p), mod_norm(q.v, p)};
}

inline QuadInt quad_mul_mod(const QuadInt& a, const QuadInt& b, const Int& p) {
    return quad_mod(a * b, p);
}

}  // namespace cwp
