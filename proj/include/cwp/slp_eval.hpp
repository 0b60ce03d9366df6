#pragma once

#include <vector>

#include "cwp/matrix.hpp"
#include "cwp/slp.hpp"

namespace cwp {

// One product per concatenation rule: the values of all variables, bottom-up.
template <class M, class Mul>
std::vector<M> eval_all_with(const std::vector<M>& letter_values, const ResolvedSlp& r, Mul mul) {
    std::vector<M> val;
    val.reserve(r.rules.size());
    for (const auto& rule : r.rules) {
        if (rule.terminal)
            val.push_back(letter_values[static_cast<size_t>(rule.a)]);
        else
            val.push_back(mul(val[static_cast<size_t>(rule.a)], val[static_cast<size_t>(rule.b)]));
    }
    return val;
}

template <class M>
std::vector<M> eval_all(const Slp& g, const GroupAlphabet<M>& alph) {
    ResolvedSlp r = resolve(g);
    std::vector<M> letter_values;
    letter_values.reserve(r.letters.size());
    for (const auto& l : r.letters) letter_values.push_back(alph.value_of(l));
    return eval_all_with(letter_values, r, [](const M& a, const M& b) { return a * b; });
}

// h(val(G)): the monoid element the expanded word multiplies out to.
template <class M>
M eval_matrix(const Slp& g, const GroupAlphabet<M>& alph) {
    ResolvedSlp r = resolve(g);
    std::vector<M> letter_values;
    letter_values.reserve(r.letters.size());
    for (const auto& l : r.letters) letter_values.push_back(alph.value_of(l));
    auto vals = eval_all_with(letter_values, r, [](const M& a, const M& b) { return a * b; });
    return vals[static_cast<size_t>(r.start)];
}

// --- modular variants -------------------------------------------------------

inline UTMatrix ut_reduce(const UTMatrix& m, const Int& p) {
    UTMatrix r(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = i + 1; j < m.dim(); ++j) r.at(i, j) = mod_norm(m.at(i, j), p);
    return r;
}

inline QuadMatrix quad_reduce(const QuadMatrix& m, const Int& p) {
    return QuadMatrix{quad_mod(m.a, p), quad_mod(m.b, p), quad_mod(m.c, p), quad_mod(m.d, p)};
}

// Rational entries become residues num * den^-1; requires gcd(den, p) = 1.
inline IntMatrix2 rat_reduce(const RatMatrix& m, const Int& p) {
    auto conv = [&](const Rat& x) {
        Int num = boost::multiprecision::numerator(x);
        Int den = boost::multiprecision::denominator(x);
        if (boost::multiprecision::gcd(den, p) != 1)
            fail(Code::BadModulus, "denominator shares a factor with the modulus");
        return mod_mul(mod_norm(num, p), mod_inv(den, p), p);
    };
    return IntMatrix2{conv(m.a), conv(m.b), conv(m.c), conv(m.d)};
}

inline UTMatrix eval_matrix_mod(const Slp& g, const GroupAlphabet<UTMatrix>& alph, const Int& p) {
    if (p < 2) fail(Code::BadModulus, "modulus must be >= 2");
    ResolvedSlp r = resolve(g);
    std::vector<UTMatrix> letter_values;
    for (const auto& l : r.letters) letter_values.push_back(ut_reduce(alph.value_of(l), p));
    auto vals = eval_all_with(letter_values, r, [&](const UTMatrix& a, const UTMatrix& b) {
        return ut_reduce(a * b, p);
    });
    return vals[static_cast<size_t>(r.start)];
}

inline QuadMatrix eval_matrix_mod(const Slp& g, const GroupAlphabet<QuadMatrix>& alph,
                                  const Int& p) {
    if (p < 2) fail(Code::BadModulus, "modulus must be >= 2");
    ResolvedSlp r = resolve(g);
    std::vector<QuadMatrix> letter_values;
    for (const auto& l : r.letters) letter_values.push_back(quad_reduce(alph.value_of(l), p));
    auto vals = eval_all_with(letter_values, r, [&](const QuadMatrix& a, const QuadMatrix& b) {
        return quad_reduce(a * b, p);
    });
    return vals[static_cast<size_t>(r.start)];
}

inline IntMatrix2 eval_matrix_mod(const Slp& g, const GroupAlphabet<RatMatrix>& alph,
                                  const Int& p) {
    if (p < 2) fail(Code::BadModulus, "modulus must be >= 2");
    ResolvedSlp r = resolve(g);
    std::vector<IntMatrix2> letter_values;
    for (const auto& l : r.letters) letter_values.push_back(rat_reduce(alph.value_of(l), p));
    auto vals = eval_all_with(letter_values, r, [&](const IntMatrix2& a, const IntMatrix2& b) {
        IntMatrix2 m = a * b;
        return IntMatrix2{mod_norm(m.a, p), mod_norm(m.b, p), mod_norm(m.c, p), mod_norm(m.d, p)};
    });
    return vals[static_cast<size_t>(r.start)];
}

// Identity tests for residue matrices (entries already reduced).
inline bool is_identity_mod(const UTMatrix& m, const Int&) { return m.is_identity(); }
inline bool is_identity_mod(const QuadMatrix& m, const Int& p) {
    return m.a == QuadInt{mod_norm(1, p), 0} && m.b == QuadInt{0, 0} && m.c == QuadInt{0, 0} &&
           m.d == QuadInt{mod_norm(1, p), 0};
}
inline bool is_identity_mod(const IntMatrix2& m, const Int& p) {
    return m.a == mod_norm(1, p) && m.b == 0 && m.c == 0 && m.d == mod_norm(1, p);
}

}  // namespace cwp
