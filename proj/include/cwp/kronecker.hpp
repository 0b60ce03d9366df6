#pragma once

#include <vector>

#include "cwp/multipoly.hpp"

namespace cwp {

// ---------------------------------------------------------------------------
// Kronecker substitution U_d : Z[x_1,...,x_k] -> Z[z], x_{i+1} |-> z^(d^i).
// On polynomials with all exponents < d the map is injective: the exponent of
// z is the base-d number whose digits are the x-exponents (least significant
// digit first, the distinguished variable y - when present - last and most
// significant).
// ---------------------------------------------------------------------------

inline UniPoly kronecker_map(const MultiPoly& p, const Int& d) {
    if (d < 2) fail(Code::BadModulus, "kronecker base must be >= 2");
    UniPoly q = up_zero(p.ring);
    for (const auto& [e, c] : p.terms) {
        Int n = 0;
        Int power = 1;
        for (size_t i = 0; i < e.size(); ++i) {
            if (Int(e[i]) >= d)
                fail(Code::ExponentTooLarge,
                     "exponent " + std::to_string(e[i]) + " not below base " + d.str());
            n += Int(e[i]) * power;
            power *= d;
        }
        q.insert_term(n, c);
    }
    return q;
}

// Inverse on the image: decode base-d digits. Exponent digits beyond the
// nvars-th are discarded, which cannot happen for polynomials in the image.
inline MultiPoly kronecker_unmap(const UniPoly& q, const Int& d, int nvars, bool has_y = false) {
    if (d < 2) fail(Code::BadModulus, "kronecker base must be >= 2");
    MultiPoly p = mp_zero(nvars, q.ring, has_y);
    for (const auto& [n, c] : q.terms) {
        Exponents e(static_cast<size_t>(nvars), 0);
        Int rest = n;
        for (int i = 0; i < nvars; ++i) {
            e[static_cast<size_t>(i)] = static_cast<std::uint32_t>(rest % d);
            rest /= d;
        }
        p.insert_term(e, c);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Univariate backend
// ---------------------------------------------------------------------------

inline UniPoly uni_mul_many(const std::vector<UniPoly>& ps) {
    if (ps.empty()) fail(Code::BadParams, "empty product");
    UniPoly acc = ps.front();
    for (size_t i = 1; i < ps.size(); ++i) acc = up_mul(acc, ps[i]);
    return acc;
}

// Euclidean division by a monic divisor; exact over Z and over F_p.
inline std::pair<UniPoly, UniPoly> uni_divrem(const UniPoly& s, const UniPoly& t) {
    check_same_ring(s.ring, t.ring);
    if (t.is_zero()) fail(Code::ZeroDivisor, "division by the zero polynomial");
    if (t.leading_coeff() != 1) fail(Code::NotMonic, "divisor is not monic");
    UniPoly q = up_zero(s.ring);
    UniPoly r = s;
    const Int dt = t.degree();
    while (!r.is_zero() && r.degree() >= dt) {
        Int shift = r.degree() - dt;
        Int coeff = r.leading_coeff();
        q.insert_term(shift, coeff);
        for (const auto& [e, c] : t.terms) r.insert_term(e + shift, -coeff * c);
    }
    return {q, r};
}

// ---------------------------------------------------------------------------
// Iterated multiplication via Kronecker substitution:
//   1. d  = max_j sum_i deg_{x_j}(p_i) bounds every variable degree of the product
//   2. map each factor through U_{d+1}
//   3. multiply the univariate images
//   4. decode through U_{d+1}^{-1}
// ---------------------------------------------------------------------------

inline MultiPoly iterated_multiply(const std::vector<MultiPoly>& ps) {
    if (ps.empty()) fail(Code::BadParams, "empty product");
    const MultiPoly& first = ps.front();
    for (const auto& p : ps) check_compatible(first, p);

    Int d = 0;
    for (int j = 0; j < first.nvars; ++j) {
        Int s = 0;
        for (const auto& p : ps) s += p.deg_var(j);
        d = std::max(d, s);
    }
    Int base = d + 1;
    if (base < 2) base = 2;  // all factors constant

    std::vector<UniPoly> imgs;
    imgs.reserve(ps.size());
    for (const auto& p : ps) imgs.push_back(kronecker_map(p, base));
    UniPoly prod = uni_mul_many(imgs);
    return kronecker_unmap(prod, base, first.nvars, first.has_y);
}

// ---------------------------------------------------------------------------
// Division with remainder in Z[x_1,...,x_k,y] (or F_p[...]), y distinguished.
// Requires the leading y-coefficient of t to be the constant 1 so quotient and
// remainder stay in the polynomial ring. Routed through U_{d^2+1} where d is a
// strict bound on every variable degree of s and t (max degree + 1, matching
// the strict degree-box convention); tracing the division algorithm shows the
// quotient and remainder have degrees at most d^2 - d, so the decoding is
// faithful. With d = max degree the remainder of s = x^D y^D can reach degree
// D^2 + D and overflow the digit base.
// ---------------------------------------------------------------------------

inline void check_monic_in_y(const MultiPoly& t) {
    if (t.is_zero()) fail(Code::ZeroDivisor, "division by the zero polynomial");
    std::uint32_t m = t.deg_y();
    // leading y-coefficient must be exactly the monomial 1 * y^m
    size_t found = 0;
    for (const auto& [e, c] : t.terms) {
        if (e.back() != m) continue;
        ++found;
        for (size_t i = 0; i + 1 < e.size(); ++i)
            if (e[i] != 0) fail(Code::NotMonicInY, "leading y-coefficient is not constant");
        if (c != 1) fail(Code::NotMonicInY, "leading y-coefficient is not 1");
    }
    if (found != 1) fail(Code::NotMonicInY, "leading y-coefficient is not 1");
}

inline std::pair<MultiPoly, MultiPoly> divrem_multivar(const MultiPoly& s, const MultiPoly& t) {
    check_compatible(s, t);
    if (!s.has_y || !t.has_y)
        fail(Code::BadParams, "divrem needs polynomials with a distinguished variable");
    check_monic_in_y(t);

    Int d = 1;
    for (int j = 0; j < s.nvars; ++j) {
        d = std::max(d, Int(s.deg_var(j)) + 1);
        d = std::max(d, Int(t.deg_var(j)) + 1);
    }
    Int base = d * d + 1;

    UniPoly u = kronecker_map(s, base);
    UniPoly v = kronecker_map(t, base);
    auto [uq, ur] = uni_divrem(u, v);
    MultiPoly q = kronecker_unmap(uq, base, s.nvars, true);
    MultiPoly r = kronecker_unmap(ur, base, s.nvars, true);
    return {q, r};
}

}  // namespace cwp
