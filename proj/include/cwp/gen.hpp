#pragma once

#include <string>
#include <vector>

#include "cwp/circuit.hpp"
#include "cwp/matrix.hpp"
#include "cwp/rng.hpp"
#include "cwp/skew.hpp"
#include "cwp/slp.hpp"

namespace cwp {

// Seeded instance generators. Identical parameters and seed give identical
// instances; every emitted instance passes validation and its kind's
// structural predicate.

inline Slp gen_slp_ut(int d, int rules, std::uint64_t seed) {
    if (d < 2) fail(Code::BadIndex, "need d >= 2 for a nonempty alphabet");
    if (rules < 1) fail(Code::BadParams, "need at least one rule");
    Rng rng(seed);
    Slp g;
    int terminals = std::min(rules, 1 + static_cast<int>(rng.below(3)));
    for (int i = 0; i < rules; ++i) {
        std::string id = "r" + std::to_string(i);
        if (i < terminals) {
            int gi = static_cast<int>(rng.range(1, d - 1));
            int sign = rng.chance(0.5) ? 1 : -1;
            g.rules.push_back({id, TerminalRhs{ut_letter(gi, sign)}});
        } else {
            int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(i)));
            int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(i)));
            g.rules.push_back({id, ConcatRhs{"r" + std::to_string(a), "r" + std::to_string(b)}});
        }
    }
    g.start = "r" + std::to_string(rules - 1);
    return g;
}

inline Circuit gen_circuit(int gates, int vars, std::uint64_t seed) {
    if (gates < 1) fail(Code::BadParams, "need at least one gate");
    Rng rng(seed);
    Circuit c;
    for (int i = 0; i < gates; ++i) {
        std::string id = "g" + std::to_string(i);
        // early gates are inputs, later gates mostly operators
        bool input = i == 0 || rng.chance(i < 3 ? 0.8 : 0.25);
        if (input) {
            if (vars > 0 && rng.chance(0.5))
                c.gates.push_back({id, VarRhs{"x" + std::to_string(rng.range(1, vars))}});
            else
                c.gates.push_back({id, ConstRhs{static_cast<int>(rng.range(-1, 1))}});
        } else {
            std::string a = "g" + std::to_string(rng.below(static_cast<std::uint64_t>(i)));
            std::string b = "g" + std::to_string(rng.below(static_cast<std::uint64_t>(i)));
            if (rng.chance(0.5))
                c.gates.push_back({id, AddRhs{a, b}});
            else
                c.gates.push_back({id, MulRhs{a, b}});
        }
    }
    c.output = "g" + std::to_string(gates - 1);
    return c;
}

// like gen_circuit but constants stay in {0, 1}
inline Circuit gen_positive_circuit(int gates, int vars, std::uint64_t seed) {
    if (gates < 1) fail(Code::BadParams, "need at least one gate");
    Rng rng(seed);
    Circuit c;
    for (int i = 0; i < gates; ++i) {
        std::string id = "g" + std::to_string(i);
        bool input = i == 0 || rng.chance(i < 3 ? 0.8 : 0.25);
        if (input) {
            if (vars > 0 && rng.chance(0.5))
                c.gates.push_back({id, VarRhs{"x" + std::to_string(rng.range(1, vars))}});
            else
                c.gates.push_back({id, ConstRhs{rng.chance(0.8) ? 1 : 0}});
        } else {
            std::string a = "g" + std::to_string(rng.below(static_cast<std::uint64_t>(i)));
            std::string b = "g" + std::to_string(rng.below(static_cast<std::uint64_t>(i)));
            if (rng.chance(0.5))
                c.gates.push_back({id, AddRhs{a, b}});
            else
                c.gates.push_back({id, MulRhs{a, b}});
        }
    }
    c.output = "g" + std::to_string(gates - 1);
    return c;
}

inline Circuit gen_addition(int gates, std::uint64_t seed) {
    if (gates < 1) fail(Code::BadParams, "need at least one gate");
    Rng rng(seed);
    Circuit c;
    for (int i = 0; i < gates; ++i) {
        std::string id = "g" + std::to_string(i);
        bool input = i == 0 || rng.chance(i < 3 ? 0.7 : 0.2);
        if (input) {
            c.gates.push_back({id, ConstRhs{rng.chance(0.8) ? 1 : 0}});
        } else {
            std::string a = "g" + std::to_string(rng.below(static_cast<std::uint64_t>(i)));
            std::string b = "g" + std::to_string(rng.below(static_cast<std::uint64_t>(i)));
            c.gates.push_back({id, AddRhs{a, b}});
        }
    }
    c.output = "g" + std::to_string(gates - 1);
    return c;
}

inline Circuit gen_skew(int gates, int vars, std::uint64_t seed) {
    if (gates < 1) fail(Code::BadParams, "need at least one gate");
    Rng rng(seed);
    Circuit c;
    std::vector<int> inputs;  // indices of input gates
    for (int i = 0; i < gates; ++i) {
        std::string id = "g" + std::to_string(i);
        bool input = i == 0 || inputs.empty() || rng.chance(i < 3 ? 0.8 : 0.3);
        if (input) {
            if (vars > 0 && rng.chance(0.6))
                c.gates.push_back({id, VarRhs{"x" + std::to_string(rng.range(1, vars))}});
            else
                c.gates.push_back({id, ConstRhs{static_cast<int>(rng.range(-1, 1))}});
            inputs.push_back(i);
        } else {
            std::string a = "g" + std::to_string(rng.below(static_cast<std::uint64_t>(i)));
            if (rng.chance(0.5)) {
                std::string b = "g" + std::to_string(rng.below(static_cast<std::uint64_t>(i)));
                c.gates.push_back({id, AddRhs{a, b}});
            } else {
                // multiplications keep one input-gate factor
                std::string b = "g" + std::to_string(inputs[rng.below(inputs.size())]);
                if (rng.chance(0.5))
                    c.gates.push_back({id, MulRhs{b, a}});
                else
                    c.gates.push_back({id, MulRhs{a, b}});
            }
        }
    }
    c.output = "g" + std::to_string(gates - 1);
    return c;
}

inline PowerfulSkewCircuit gen_powerful(int gates, int vars, std::uint64_t seed) {
    if (gates < 1) fail(Code::BadParams, "need at least one gate");
    if (vars < 1) fail(Code::BadParams, "need at least one variable");
    Rng rng(seed);
    PowerfulSkewCircuit c;
    c.nvars = vars;
    for (int i = 0; i < gates; ++i) {
        std::string id = "g" + std::to_string(i);
        bool input = i == 0 || rng.chance(i < 3 ? 0.7 : 0.25);
        if (input) {
            if (rng.chance(0.5))
                c.gates.push_back({id, VarRhs{"x" + std::to_string(rng.range(1, vars))}});
            else
                c.gates.push_back({id, ConstRhs{static_cast<int>(rng.range(-1, 1))}});
        } else if (rng.chance(0.55)) {
            std::string a = "g" + std::to_string(rng.below(static_cast<std::uint64_t>(i)));
            std::string b = "g" + std::to_string(rng.below(static_cast<std::uint64_t>(i)));
            c.gates.push_back({id, AddRhs{a, b}});
        } else {
            PowerMulRhs pm;
            pm.coeff = rng.range(-3, 3);
            for (int v = 0; v < vars; ++v) pm.exps.push_back(rng.range(0, 3));
            pm.gate = "g" + std::to_string(rng.below(static_cast<std::uint64_t>(i)));
            c.gates.push_back({id, pm});
        }
    }
    c.output = "g" + std::to_string(gates - 1);
    return c;
}

}  // namespace cwp
