#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cwp/error.hpp"
#include "cwp/ints.hpp"

namespace cwp {

// Coefficient ring: Z, or F_p for a prime p.
struct RingTag {
    bool modular = false;
    Int p = 0;

    bool operator==(const RingTag& o) const = default;

    Int reduce(const Int& v) const { return modular ? mod_norm(v, p) : v; }
    std::string str() const { return modular ? "F_" + p.str() : "Z"; }
};

inline RingTag ring_z() { return RingTag{}; }
inline RingTag ring_fp(const Int& p) {
    if (p < 2) fail(Code::BadModulus, "modulus must be >= 2");
    return RingTag{true, p};
}

inline void check_same_ring(const RingTag& a, const RingTag& b) {
    if (!(a == b)) fail(Code::RingMismatch, "mixing " + a.str() + " and " + b.str() + " operands");
}

using Exponents = std::vector<std::uint32_t>;

// Sparse multivariate polynomial. `nvars` counts all variables; when `has_y`
// is set the last variable is the distinguished division variable y.
// Invariant: no zero coefficients are stored and every exponent vector has
// length nvars.
struct MultiPoly {
    int nvars = 0;
    bool has_y = false;
    RingTag ring;
    std::map<Exponents, Int> terms;

    bool is_zero() const { return terms.empty(); }

    size_t term_count() const { return terms.size(); }

    void insert_term(const Exponents& e, const Int& c) {
        Int v = ring.reduce(c);
        if (v == 0) return;
        auto [it, fresh] = terms.emplace(e, v);
        if (!fresh) {
            it->second = ring.reduce(it->second + v);
            if (it->second == 0) terms.erase(it);
        }
    }

    bool operator==(const MultiPoly& o) const {
        return nvars == o.nvars && ring == o.ring && terms == o.terms;
    }

    // Largest exponent of variable `i` (0-based); 0 for the zero polynomial.
    std::uint32_t deg_var(int i) const {
        std::uint32_t d = 0;
        for (const auto& [e, c] : terms) d = std::max(d, e[static_cast<size_t>(i)]);
        return d;
    }

    std::uint32_t deg_y() const {
        if (!has_y) fail(Code::BadParams, "polynomial has no distinguished variable");
        return deg_var(nvars - 1);
    }

    std::string str() const;
};

inline MultiPoly mp_zero(int nvars, RingTag ring = ring_z(), bool has_y = false) {
    MultiPoly p;
    p.nvars = nvars;
    p.has_y = has_y;
    p.ring = ring;
    return p;
}

inline MultiPoly mp_const(const Int& c, int nvars, RingTag ring = ring_z(), bool has_y = false) {
    MultiPoly p = mp_zero(nvars, ring, has_y);
    p.insert_term(Exponents(static_cast<size_t>(nvars), 0), c);
    return p;
}

// x_{i+1}, i.e. variable with 0-based index i.
inline MultiPoly mp_var(int i, int nvars, RingTag ring = ring_z(), bool has_y = false) {
    if (i < 0 || i >= nvars) fail(Code::BadIndex, "variable index out of range");
    MultiPoly p = mp_zero(nvars, ring, has_y);
    Exponents e(static_cast<size_t>(nvars), 0);
    e[static_cast<size_t>(i)] = 1;
    p.insert_term(e, 1);
    return p;
}

inline MultiPoly mp_monomial(const Int& c, const Exponents& e, RingTag ring = ring_z(),
                             bool has_y = false) {
    MultiPoly p = mp_zero(static_cast<int>(e.size()), ring, has_y);
    p.insert_term(e, c);
    return p;
}

inline void check_compatible(const MultiPoly& a, const MultiPoly& b) {
    check_same_ring(a.ring, b.ring);
    if (a.nvars != b.nvars)
        fail(Code::DimensionMismatch, "polynomials over different variable sets");
}

inline MultiPoly mp_add(const MultiPoly& a, const MultiPoly& b) {
    check_compatible(a, b);
    MultiPoly r = a;
    for (const auto& [e, c] : b.terms) r.insert_term(e, c);
    return r;
}

inline MultiPoly mp_neg(const MultiPoly& a) {
    MultiPoly r = mp_zero(a.nvars, a.ring, a.has_y);
    for (const auto& [e, c] : a.terms) r.insert_term(e, -c);
    return r;
}

inline MultiPoly mp_sub(const MultiPoly& a, const MultiPoly& b) { return mp_add(a, mp_neg(b)); }

inline MultiPoly mp_mul(const MultiPoly& a, const MultiPoly& b) {
    check_compatible(a, b);
    MultiPoly r = mp_zero(a.nvars, a.ring, a.has_y || b.has_y);
    Exponents e(static_cast<size_t>(a.nvars), 0);
    for (const auto& [ea, ca] : a.terms) {
        for (const auto& [eb, cb] : b.terms) {
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.insert_term(e, ca * cb);
        }
    }
    return r;
}

inline MultiPoly mp_scale(const MultiPoly& a, const Int& c) {
    MultiPoly r = mp_zero(a.nvars, a.ring, a.has_y);
    for (const auto& [e, co] : a.terms) r.insert_term(e, co * c);
    return r;
}

// Value at an integer point (or a residue point for F_p).
inline Int mp_eval(const MultiPoly& p, const std::vector<Int>& point) {
    if (static_cast<int>(point.size()) != p.nvars)
        fail(Code::DimensionMismatch, "evaluation point has wrong arity");
    Int total = 0;
    for (const auto& [e, c] : p.terms) {
        Int t = c;
        for (size_t i = 0; i < e.size(); ++i)
            for (std::uint32_t k = 0; k < e[i]; ++k) t *= point[i];
        total += t;
    }
    return p.ring.reduce(total);
}

// Image of an integer under the unique ring map Z -> R.
template <class R>
R embed_int(const Int& a, const R& zero, const R& one) {
    bool neg = a < 0;
    Int v = neg ? Int(-a) : a;
    R r = zero;
    R p = one;
    while (v > 0) {
        if (boost::multiprecision::bit_test(v, 0)) r = r + p;
        v >>= 1;
        if (v > 0) p = p + p;
    }
    return neg ? zero - r : r;
}

// Generic evaluation in any commutative ring R with +, -, *.
template <class R>
R mp_eval_ring(const MultiPoly& p, const std::vector<R>& point, const R& zero, const R& one) {
    if (static_cast<int>(point.size()) != p.nvars)
        fail(Code::DimensionMismatch, "evaluation point has wrong arity");
    R total = zero;
    for (const auto& [e, c] : p.terms) {
        R t = embed_int(c, zero, one);
        for (size_t i = 0; i < e.size(); ++i)
            for (std::uint32_t k = 0; k < e[i]; ++k) t = t * point[i];
        total = total + t;
    }
    return total;
}

inline std::string MultiPoly::str() const {
    if (terms.empty()) return "0";
    std::string s;
    for (const auto& [e, c] : terms) {
        if (!s.empty()) s += " + ";
        s += c.str();
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            s += (has_y && i + 1 == e.size()) ? "*y" : "*x" + std::to_string(i + 1);
            if (e[i] > 1) s += "^" + std::to_string(e[i]);
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Univariate polynomials (Kronecker images); exponents are big integers since
// the substitution raises degrees to d^k.
// ---------------------------------------------------------------------------

struct UniPoly {
    RingTag ring;
    std::map<Int, Int> terms;

    bool is_zero() const { return terms.empty(); }

    void insert_term(const Int& e, const Int& c) {
        Int v = ring.reduce(c);
        if (v == 0) return;
        auto [it, fresh] = terms.emplace(e, v);
        if (!fresh) {
            it->second = ring.reduce(it->second + v);
            if (it->second == 0) terms.erase(it);
        }
    }

    // Degree of the zero polynomial is -1 by convention here.
    Int degree() const { return terms.empty() ? Int(-1) : terms.rbegin()->first; }

    Int leading_coeff() const { return terms.empty() ? Int(0) : terms.rbegin()->second; }

    bool operator==(const UniPoly& o) const { return ring == o.ring && terms == o.terms; }

    std::string str() const {
        if (terms.empty()) return "0";
        std::string s;
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
            if (!s.empty()) s += " + ";
            s += it->second.str();
            if (it->first != 0) s += "*z^" + it->first.str();
        }
        return s;
    }
};

inline UniPoly up_zero(RingTag ring = ring_z()) { return UniPoly{ring, {}}; }

inline UniPoly up_mul(const UniPoly& a, const UniPoly& b) {
    check_same_ring(a.ring, b.ring);
    UniPoly r = up_zero(a.ring);
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) r.insert_term(ea + eb, ca * cb);
    return r;
}

inline UniPoly up_add(const UniPoly& a, const UniPoly& b) {
    check_same_ring(a.ring, b.ring);
    UniPoly r = a;
    for (const auto& [e, c] : b.terms) r.insert_term(e, c);
    return r;
}

}  // namespace cwp
