#pragma once

#include <map>
#include <string>
#include <vector>

#include "cwp/circuit.hpp"
#include "cwp/multipoly.hpp"

namespace cwp {

// Variable binding for evaluation. Every variable occurring in the circuit
// must be bound.
using Assignment = std::map<std::string, Int>;

namespace detail {

inline std::vector<Int> assignment_vector(const Resolved& r, const Assignment& a) {
    std::vector<Int> point;
    point.reserve(r.var_names.size());
    for (const auto& name : r.var_names) {
        auto it = a.find(name);
        if (it == a.end()) fail(Code::UnboundVariable, "variable " + name + " is not bound");
        point.push_back(it->second);
    }
    return point;
}

}  // namespace detail

// Exact evaluation over Z in one bottom-up sweep, each gate evaluated once.
inline Int eval_int(const Circuit& c, const Assignment& a = {}) {
    Resolved r = resolve(c);
    std::vector<Int> point = detail::assignment_vector(r, a);
    std::vector<Int> val(r.gates.size());
    for (size_t i = 0; i < r.gates.size(); ++i) {
        const RGate& g = r.gates[i];
        switch (g.kind) {
            case GateKind::Const: val[i] = g.a; break;
            case GateKind::Var: val[i] = point[static_cast<size_t>(g.a)]; break;
            case GateKind::Add: val[i] = val[static_cast<size_t>(g.a)] + val[static_cast<size_t>(g.b)]; break;
            case GateKind::Mul: val[i] = val[static_cast<size_t>(g.a)] * val[static_cast<size_t>(g.b)]; break;
        }
    }
    return val[static_cast<size_t>(r.output)];
}

// Evaluation with every gate reduced into [0, m).
inline Int eval_mod(const Circuit& c, const Assignment& a, const Int& m) {
    if (m < 2) fail(Code::BadModulus, "modulus must be >= 2, got " + m.str());
    Resolved r = resolve(c);
    std::vector<Int> point = detail::assignment_vector(r, a);
    for (auto& v : point) v = mod_norm(v, m);
    std::vector<Int> val(r.gates.size());
    for (size_t i = 0; i < r.gates.size(); ++i) {
        const RGate& g = r.gates[i];
        switch (g.kind) {
            case GateKind::Const: val[i] = mod_norm(Int(g.a), m); break;
            case GateKind::Var: val[i] = point[static_cast<size_t>(g.a)]; break;
            case GateKind::Add: val[i] = mod_add(val[static_cast<size_t>(g.a)], val[static_cast<size_t>(g.b)], m); break;
            case GateKind::Mul: val[i] = mod_mul(val[static_cast<size_t>(g.a)], val[static_cast<size_t>(g.b)], m); break;
        }
    }
    return val[static_cast<size_t>(r.output)];
}

// Evaluation in an arbitrary commutative ring; used for exact points in
// Z[sqrt(2)] and the like.
template <class R>
R eval_ring(const Circuit& c, const std::map<std::string, R>& a, const R& zero, const R& one) {
    Resolved r = resolve(c);
    std::vector<R> point;
    point.reserve(r.var_names.size());
    for (const auto& name : r.var_names) {
        auto it = a.find(name);
        if (it == a.end()) fail(Code::UnboundVariable, "variable " + name + " is not bound");
        point.push_back(it->second);
    }
    const R minus_one = zero - one;
    std::vector<R> val(r.gates.size(), zero);
    for (size_t i = 0; i < r.gates.size(); ++i) {
        const RGate& g = r.gates[i];
        switch (g.kind) {
            case GateKind::Const: val[i] = g.a == 0 ? zero : (g.a == 1 ? one : minus_one); break;
            case GateKind::Var: val[i] = point[static_cast<size_t>(g.a)]; break;
            case GateKind::Add: val[i] = val[static_cast<size_t>(g.a)] + val[static_cast<size_t>(g.b)]; break;
            case GateKind::Mul: val[i] = val[static_cast<size_t>(g.a)] * val[static_cast<size_t>(g.b)]; break;
        }
    }
    return val[static_cast<size_t>(r.output)];
}

// Number of accepting runs of the pushdown acceptor that guesses a summand
// through every addition gate and expands both factors of a multiplication:
// 0-gates reject, 1-gates pop. Computed by memoized top-down recursion; for a
// positive variable-free circuit this equals eval_int.
inline Int count_accepting_paths(const Circuit& c) {
    Resolved r = resolve(c);
    for (const RGate& g : r.gates) {
        if (g.kind == GateKind::Const && g.a == -1)
            fail(Code::NotPositive, "circuit contains the constant -1");
        if (g.kind == GateKind::Var)
            fail(Code::NotVariableFree, "circuit contains variables");
    }
    std::vector<Int> memo(r.gates.size());
    std::vector<bool> done(r.gates.size(), false);
    std::vector<int> stack{r.output};
    while (!stack.empty()) {
        int i = stack.back();
        const RGate& g = r.gates[static_cast<size_t>(i)];
        if (done[static_cast<size_t>(i)]) {
            stack.pop_back();
            continue;
        }
        if (g.kind == GateKind::Const) {
            memo[static_cast<size_t>(i)] = g.a;  // 0 rejects, 1 accepts once
            done[static_cast<size_t>(i)] = true;
            stack.pop_back();
            continue;
        }
        if (!done[static_cast<size_t>(g.a)] || !done[static_cast<size_t>(g.b)]) {
            if (!done[static_cast<size_t>(g.a)]) stack.push_back(g.a);
            if (!done[static_cast<size_t>(g.b)]) stack.push_back(g.b);
            continue;
        }
        const Int& x = memo[static_cast<size_t>(g.a)];
        const Int& y = memo[static_cast<size_t>(g.b)];
        memo[static_cast<size_t>(i)] = g.kind == GateKind::Add ? Int(x + y) : Int(x * y);
        done[static_cast<size_t>(i)] = true;
        stack.pop_back();
    }
    return memo[static_cast<size_t>(r.output)];
}

struct EvalLimits {
    size_t max_terms = 1000000;  // hard monomial budget for eval_poly
};

// Fully expanded sparse polynomial value of the circuit over Z. Polynomials
// can be exponentially larger than the circuit, so every intermediate result
// is checked against the term budget and TooLarge is raised on overflow,
// never a silent truncation.
inline MultiPoly eval_poly(const Circuit& c, const EvalLimits& limits = {}) {
    Resolved r = resolve(c);
    const int k = static_cast<int>(r.var_names.size());
    std::vector<MultiPoly> val(r.gates.size());
    for (size_t i = 0; i < r.gates.size(); ++i) {
        const RGate& g = r.gates[i];
        switch (g.kind) {
            case GateKind::Const: val[i] = mp_const(g.a, k); break;
            case GateKind::Var: val[i] = mp_var(g.a, k); break;
            case GateKind::Add: val[i] = mp_add(val[static_cast<size_t>(g.a)], val[static_cast<size_t>(g.b)]); break;
            case GateKind::Mul: val[i] = mp_mul(val[static_cast<size_t>(g.a)], val[static_cast<size_t>(g.b)]); break;
        }
        if (val[i].term_count() > limits.max_terms)
            fail(Code::TooLarge, "term budget of " + std::to_string(limits.max_terms) +
                                     " monomials exceeded at gate " + c.gates[i].id);
    }
    return val[static_cast<size_t>(r.output)];
}

}  // namespace cwp
