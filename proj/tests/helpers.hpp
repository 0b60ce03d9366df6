#pragma once

// Test-only oracles, kept independent of the library code paths they check.

#include <vector>

#include "cwp/circuit_eval.hpp"
#include "cwp/matrix.hpp"
#include "cwp/multipoly.hpp"
#include "cwp/rng.hpp"
#include "cwp/slp_eval.hpp"
#include "cwp/tripoly.hpp"

namespace cwp::testing {

// Literal simulation of the pushdown acceptor: the stack holds gate indices,
// addition gates branch, multiplication gates push both factors, 1-gates pop,
// 0-gates reject. Exponential; only for tiny circuits.
struct PdaResult {
    Int runs = 0;
    bool capped = false;
};

inline PdaResult pda_count_runs(const Circuit& c, long long step_cap = 2000000) {
    Resolved r = resolve(c);
    PdaResult res;
    long long steps = 0;
    // explicit DFS over configurations (stack contents)
    struct Frame {
        std::vector<int> stack;
    };
    std::vector<Frame> todo;
    todo.push_back({{r.output}});
    while (!todo.empty()) {
        if (++steps > step_cap) {
            res.capped = true;
            return res;
        }
        Frame f = std::move(todo.back());
        todo.pop_back();
        if (f.stack.empty()) {
            res.runs += 1;
            continue;
        }
        int top = f.stack.back();
        const RGate& g = r.gates[static_cast<size_t>(top)];
        switch (g.kind) {
            case GateKind::Const:
                if (g.a == 1) {
                    f.stack.pop_back();
                    todo.push_back(std::move(f));
                }
                // 0 rejects: drop the configuration
                break;
            case GateKind::Add: {
                Frame left = f;
                left.stack.back() = g.a;
                todo.push_back(std::move(left));
                f.stack.back() = g.b;
                todo.push_back(std::move(f));
                break;
            }
            case GateKind::Mul:
                f.stack.back() = g.b;
                f.stack.push_back(g.a);
                todo.push_back(std::move(f));
                break;
            case GateKind::Var:
                throw std::runtime_error("pda oracle needs a variable-free circuit");
        }
    }
    return res;
}

// Naive fold-multiply, the oracle for the Kronecker-backed product.
inline MultiPoly naive_product(const std::vector<MultiPoly>& ps) {
    MultiPoly acc = ps.at(0);
    for (size_t i = 1; i < ps.size(); ++i) acc = mp_mul(acc, ps[i]);
    return acc;
}

inline MultiPoly random_poly(Rng& rng, int nvars, int max_deg, int terms, int coeff_range,
                             RingTag ring = ring_z(), bool has_y = false) {
    MultiPoly p = mp_zero(nvars, ring, has_y);
    for (int t = 0; t < terms; ++t) {
        Exponents e;
        for (int v = 0; v < nvars; ++v)
            e.push_back(static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(max_deg) + 1)));
        Int c = rng.range(-coeff_range, coeff_range);
        p.insert_term(e, c);
    }
    return p;
}

// Multiply the expanded word out letter by letter.
template <class M>
M word_product(const std::vector<std::string>& word, const GroupAlphabet<M>& alph, const M& id) {
    M acc = id;
    for (const auto& l : word) acc = acc * alph.value_of(l);
    return acc;
}

inline TriPolyMatrix sequential_tri_product(const std::vector<TriPolyMatrix>& ms) {
    TriPolyMatrix acc = ms.at(0);
    for (size_t i = 1; i < ms.size(); ++i) acc = tri_mul(acc, ms[i]);
    return acc;
}

// M_{s,t} = g^s h^t g^-s h^-t over Z[sqrt2], the commutator family from the
// polycyclic-group analysis.
inline QuadMatrix m_st(int s, int t) {
    GroupAlphabet<QuadMatrix> alph = make_ga_sqrt2_alphabet();
    QuadMatrix g = alph.value_of("g"), h = alph.value_of("h");
    return mat2_pow(g, s) * mat2_pow(h, t) * mat2_pow(g, -s) * mat2_pow(h, -t);
}

inline Int binom(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    Int r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// The decomposition exponents from the commutator-subgroup proof:
// M_{s,t} = v^{c1} u^{c2}.
inline std::pair<Int, Int> proof_c1_c2(long long s, long long t) {
    Int c1 = 0, c2 = 0;
    if (s >= 0) {
        for (long long i = 1; i <= s / 2; ++i) c1 += Int(t) * binom(s, 2 * i) * int_pow(2, i - 1);
        for (long long i = 1; i <= (s + 1) / 2; ++i)
            c2 += Int(t) * binom(s, 2 * i - 1) * int_pow(2, i - 1);
    } else {
        long long ns = -s;
        long long a = ns % 2;
        c1 = Int(-a) * t;
        for (long long i = 1; i <= ns / 2; ++i) {
            Int sgn = ((ns - 2 * i) % 2 == 0) ? 1 : -1;
            c1 += Int(t) * binom(ns, 2 * i) * int_pow(2, i - 1) * sgn;
        }
        for (long long i = 1; i <= (ns + 1) / 2; ++i) {
            Int sgn = ((ns - (2 * i - 1)) % 2 == 0) ? 1 : -1;
            c2 += Int(t) * binom(ns, 2 * i - 1) * int_pow(2, i - 1) * sgn;
        }
    }
    return {c1, c2};
}

}  // namespace cwp::testing
