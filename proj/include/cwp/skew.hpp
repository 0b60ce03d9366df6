#pragma once

#include <array>
#include <cstdlib>
#include <map>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cwp/circuit.hpp"
#include "cwp/multipoly.hpp"
#include "cwp/slp.hpp"

namespace cwp {

// ---------------------------------------------------------------------------
// Exponent schedules for the skew-circuit encodings: variable x_i is played
// by alpha_i = a^{E_i}. Paper mode uses E_i = 2^(i*n^2) with n the gate
// count, which makes the identity verdict equivalent to polynomial identity;
// the numbers are then far beyond exact evaluation, so tests use small
// schedules where the per-gate matrix invariant can be checked exactly.
// ---------------------------------------------------------------------------

struct ExponentSchedule {
    std::vector<Int> exps;  // E_1, ..., E_m
    bool paper_mode = false;

    static ExponentSchedule paper(int nvars, long long gate_count) {
        ExponentSchedule s;
        s.paper_mode = true;
        Int n2 = Int(gate_count) * gate_count;
        for (int i = 1; i <= nvars; ++i) s.exps.push_back(Int(1) << static_cast<unsigned>((n2 * i).convert_to<unsigned long long>()));
        return s;
    }

    static ExponentSchedule test(std::vector<Int> exps) {
        ExponentSchedule s;
        s.exps = std::move(exps);
        return s;
    }

    // strictly increasing, as the paper-mode schedule is by construction
    bool strictly_increasing() const {
        for (size_t i = 1; i < exps.size(); ++i)
            if (exps[i] <= exps[i - 1]) return false;
        return true;
    }
};

// Result of the group encoding: the SLP plus, for every circuit gate, the SLP
// variable whose value is [[1, p_gate(alpha)], [0, 1]].
struct GroupEncodedCircuit {
    Slp slp;
    std::map<std::string, std::string> gate_var;      // positive flavor
    std::map<std::string, std::string> gate_var_neg;  // inverse flavor
};

namespace detail {

// Incremental SLP builder over the alphabet {g, h} with inverses. Words are
// lists of already-defined rule ids; single-element words become aliases.
struct GaSlpBuilder {
    Slp slp;
    IdGen ids;
    std::unordered_map<std::string, std::string> letter_rule;
    std::unordered_map<std::string, std::string> alias;

    std::string resolve(std::string id) const {
        for (auto it = alias.find(id); it != alias.end(); it = alias.find(id)) id = it->second;
        return id;
    }

    std::string letter(const std::string& l) {
        auto it = letter_rule.find(l);
        if (it != letter_rule.end()) return it->second;
        std::string id = ids.fresh("lt." + l);
        slp.rules.push_back({id, TerminalRhs{l}});
        letter_rule[l] = id;
        return id;
    }

    std::string word(const std::string& hint, const std::vector<std::string>& parts) {
        if (parts.empty()) fail(Code::BadParams, "empty word");
        std::string acc = resolve(parts[0]);
        if (parts.size() == 1) {
            std::string id = ids.fresh(hint);
            alias[id] = acc;
            return id;
        }
        for (size_t k = 1; k < parts.size(); ++k) {
            std::string next = ids.fresh(k + 1 == parts.size() ? hint : hint + "#" + std::to_string(k));
            slp.rules.push_back({next, ConcatRhs{acc, resolve(parts[k])}});
            acc = next;
        }
        return acc;
    }

    // identity element: the cancelling pair h h^-1
    std::string id_word(const std::string& hint) {
        return word(hint, {letter("h"), letter("h^-1")});
    }

    // g^e for e >= 0 built by iterated squaring over base letter ("g" or "g^-1")
    std::string power(const std::string& base_letter, const Int& e, const std::string& hint) {
        if (e == 0) return id_word(hint);
        std::string bit = letter(base_letter);
        unsigned nbits = bit_length(e);
        std::vector<std::string> doubled{bit};
        for (unsigned k = 1; k < nbits; ++k) {
            std::string next = ids.fresh(hint + ".d" + std::to_string(k));
            slp.rules.push_back({next, ConcatRhs{doubled.back(), doubled.back()}});
            doubled.push_back(next);
        }
        std::vector<std::string> parts;
        for (unsigned k = 0; k < nbits; ++k)
            if (boost::multiprecision::bit_test(e, k)) parts.push_back(doubled[k]);
        return word(hint, parts);
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Skew circuit -> SLP over {g, h}^+- with, for every gate A,
//   val(A) = [[1, p_A(alpha_1, ..., alpha_m)], [0, 1]],  alpha_i = a^{E_i}.
// Constants map to h-letters, additions concatenate, and x_i * B conjugates B
// by the power word g^{E_i}. Gates also get an inverse flavor (top-right
// entry negated) so constant -1 factors and subtraction-free inputs encode
// uniformly.
// ---------------------------------------------------------------------------

inline GroupEncodedCircuit skew_to_group_slp(const Circuit& c, const ExponentSchedule& sched) {
    require_valid(c);
    CircuitMetrics cm = metrics(c);
    if (!cm.is_skew) fail(Code::NotSkew, "circuit has a multiplication without an input-gate factor");

    Resolved r = resolve(c);
    const size_t m = r.var_names.size();
    if (sched.exps.size() < m)
        fail(Code::ScheduleTooShort, "schedule covers " + std::to_string(sched.exps.size()) +
                                         " of " + std::to_string(m) + " variables");

    detail::GaSlpBuilder b;

    // power words A_i = g^{E_i} and their inverses
    std::vector<std::string> power_pos(m), power_neg(m);
    for (size_t i = 0; i < m; ++i) {
        power_pos[i] = b.power("g", sched.exps[i], "A" + std::to_string(i + 1));
        power_neg[i] = b.power("g^-1", sched.exps[i], "Ai" + std::to_string(i + 1));
    }

    GroupEncodedCircuit out;
    // var[gate][flavor]: flavor 0 encodes +p, flavor 1 encodes -p
    std::vector<std::array<std::string, 2>> var(r.gates.size());

    auto conjugate = [&](int vi, const std::string& inner, const std::string& hint) {
        return b.word(hint, {power_pos[static_cast<size_t>(vi)], inner, power_neg[static_cast<size_t>(vi)]});
    };

    for (size_t gi = 0; gi < r.gates.size(); ++gi) {
        const RGate& g = r.gates[gi];
        const std::string& id = c.gates[gi].id;
        for (int f = 0; f < 2; ++f) {
            const bool neg = f == 1;
            const std::string hint = (neg ? "N." : "P.") + id;
            std::string v;
            switch (g.kind) {
                case GateKind::Const:
                    if (g.a == 0)
                        v = b.id_word(hint);
                    else if ((g.a == 1) != neg)
                        v = b.word(hint, {b.letter("h")});
                    else
                        v = b.word(hint, {b.letter("h^-1")});
                    break;
                case GateKind::Var:
                    // a bare variable gate reads as x_i * 1
                    v = conjugate(g.a, b.word(hint + ".h", {b.letter(neg ? "h^-1" : "h")}), hint);
                    break;
                case GateKind::Add:
                    v = b.word(hint, {var[static_cast<size_t>(g.a)][static_cast<size_t>(f)],
                                      var[static_cast<size_t>(g.b)][static_cast<size_t>(f)]});
                    break;
                case GateKind::Mul: {
                    // one side is an input gate; route on its label
                    int in = g.a, other = g.b;
                    GateKind ka = r.gates[static_cast<size_t>(g.a)].kind;
                    if (ka != GateKind::Const && ka != GateKind::Var) std::swap(in, other);
                    const RGate& ing = r.gates[static_cast<size_t>(in)];
                    if (ing.kind == GateKind::Var) {
                        v = conjugate(ing.a, var[static_cast<size_t>(other)][static_cast<size_t>(f)], hint);
                    } else if (ing.a == 0) {
                        v = b.id_word(hint);
                    } else if (ing.a == 1) {
                        v = b.word(hint, {var[static_cast<size_t>(other)][static_cast<size_t>(f)]});
                    } else {  // factor -1 flips the flavor of the other side
                        v = b.word(hint, {var[static_cast<size_t>(other)][static_cast<size_t>(1 - f)]});
                    }
                    break;
                }
            }
            var[gi][static_cast<size_t>(f)] = v;
        }
        out.gate_var[id] = var[gi][0];
        out.gate_var_neg[id] = var[gi][1];
    }

    b.slp.start = b.resolve(var[static_cast<size_t>(r.output)][0]);
    out.slp = std::move(b.slp);
    // aliases may appear in the maps; resolve them against the final alias table
    for (auto& [k, vv] : out.gate_var) vv = b.resolve(vv);
    for (auto& [k, vv] : out.gate_var_neg) vv = b.resolve(vv);
    return out;
}

// ---------------------------------------------------------------------------
// Powerful skew circuits: multiplications carry a monomial with binary-coded
// exponents and an integer coefficient, rhs(A) = alpha * prod x_i^{e_i} * B.
// ---------------------------------------------------------------------------

struct PowerMulRhs {
    Int coeff;
    std::vector<Int> exps;  // one exponent per circuit variable x_1..x_m
    std::string gate;
    bool operator==(const PowerMulRhs&) const = default;
};

using PowerRhs = std::variant<ConstRhs, VarRhs, AddRhs, PowerMulRhs>;

struct PowerGate {
    std::string id;
    PowerRhs rhs;
    bool operator==(const PowerGate&) const = default;
};

struct PowerfulSkewCircuit {
    std::vector<PowerGate> gates;
    std::string output;
    int nvars = 0;  // variables are x_1..x_nvars
    bool operator==(const PowerfulSkewCircuit&) const = default;
};

inline std::optional<ValidationError> validate_powerful(const PowerfulSkewCircuit& c) {
    std::unordered_set<std::string> seen;
    for (const auto& g : c.gates) {
        if (seen.count(g.id)) return ValidationError{Code::DuplicateId, g.id, "gate declared twice"};
        auto check = [&](const std::string& ref) -> std::optional<ValidationError> {
            if (!seen.count(ref))
                return ValidationError{Code::ForwardReference, g.id,
                                       "references " + ref + " which is not declared earlier"};
            return std::nullopt;
        };
        if (const auto* k = std::get_if<ConstRhs>(&g.rhs)) {
            if (k->value < -1 || k->value > 1)
                return ValidationError{Code::BadConstant, g.id, "constant outside {-1,0,1}"};
        } else if (const auto* v = std::get_if<VarRhs>(&g.rhs)) {
            bool ok = v->name.size() >= 2 && v->name[0] == 'x';
            int idx = 0;
            if (ok) {
                for (size_t i = 1; i < v->name.size(); ++i)
                    if (v->name[i] < '0' || v->name[i] > '9') ok = false;
                if (ok) idx = std::atoi(v->name.c_str() + 1);
            }
            if (!ok || idx < 1 || idx > c.nvars)
                return ValidationError{Code::NotPowerfulSkew, g.id,
                                       "variable " + v->name + " outside x_1..x_" + std::to_string(c.nvars)};
        } else if (const auto* a = std::get_if<AddRhs>(&g.rhs)) {
            if (auto e = check(a->left)) return e;
            if (auto e = check(a->right)) return e;
        } else {
            const auto& pm = std::get<PowerMulRhs>(g.rhs);
            if (static_cast<int>(pm.exps.size()) != c.nvars)
                return ValidationError{Code::NotPowerfulSkew, g.id, "exponent vector arity mismatch"};
            for (const auto& e : pm.exps)
                if (e < 0) return ValidationError{Code::NotPowerfulSkew, g.id, "negative exponent"};
            if (auto e = check(pm.gate)) return e;
        }
        seen.insert(g.id);
    }
    if (c.gates.empty() || !seen.count(c.output))
        return ValidationError{Code::MissingOutput, c.output, "output gate is not declared"};
    return std::nullopt;
}

inline void require_valid(const PowerfulSkewCircuit& c) {
    if (auto e = validate_powerful(c)) fail(e->code, "gate '" + e->gate + "': " + e->message);
}

// Value of a powerful skew circuit as a sparse polynomial (test oracle and
// the basis for the pit subcommand).
inline MultiPoly powerful_eval_poly(const PowerfulSkewCircuit& c, size_t max_terms = 1000000) {
    require_valid(c);
    std::unordered_map<std::string, MultiPoly> val;
    const int k = c.nvars;
    for (const auto& g : c.gates) {
        MultiPoly v = mp_zero(k);
        if (const auto* kk = std::get_if<ConstRhs>(&g.rhs)) {
            v = mp_const(kk->value, k);
        } else if (const auto* vr = std::get_if<VarRhs>(&g.rhs)) {
            v = mp_var(std::atoi(vr->name.c_str() + 1) - 1, k);
        } else if (const auto* a = std::get_if<AddRhs>(&g.rhs)) {
            v = mp_add(val.at(a->left), val.at(a->right));
        } else {
            const auto& pm = std::get<PowerMulRhs>(g.rhs);
            Exponents e;
            for (const auto& ex : pm.exps) {
                if (ex > 1000000) fail(Code::TooLarge, "exponent too large for expansion");
                e.push_back(ex.convert_to<std::uint32_t>());
            }
            v = mp_mul(mp_monomial(pm.coeff, e), val.at(pm.gate));
        }
        if (v.term_count() > max_terms) fail(Code::TooLarge, "term budget exceeded");
        val[g.id] = std::move(v);
    }
    return val.at(c.output);
}

// Residue of the powerful-skew value at an integer point; exponentiation is
// modular, so binary-coded exponents stay cheap.
inline Int powerful_eval_mod(const PowerfulSkewCircuit& c, const std::vector<Int>& point,
                             const Int& p) {
    require_valid(c);
    if (p < 2) fail(Code::BadModulus, "modulus must be >= 2");
    if (static_cast<int>(point.size()) < c.nvars)
        fail(Code::BadParams, "point has too few coordinates");
    std::unordered_map<std::string, Int> val;
    for (const auto& g : c.gates) {
        Int v;
        if (const auto* kk = std::get_if<ConstRhs>(&g.rhs)) {
            v = mod_norm(Int(kk->value), p);
        } else if (const auto* vr = std::get_if<VarRhs>(&g.rhs)) {
            v = mod_norm(point[static_cast<size_t>(std::atoi(vr->name.c_str() + 1) - 1)], p);
        } else if (const auto* a = std::get_if<AddRhs>(&g.rhs)) {
            v = mod_add(val.at(a->left), val.at(a->right), p);
        } else {
            const auto& pm = std::get<PowerMulRhs>(g.rhs);
            v = mod_mul(mod_norm(pm.coeff, p), val.at(pm.gate), p);
            for (size_t i = 0; i < pm.exps.size(); ++i)
                v = mod_mul(v, mod_pow(point[i], pm.exps[i], p), p);
        }
        val[g.id] = v;
    }
    return val.at(c.output);
}

inline GroupEncodedCircuit powerful_skew_to_group_slp(const PowerfulSkewCircuit& c,
                                                      const ExponentSchedule& sched) {
    require_valid(c);
    if (sched.exps.size() < static_cast<size_t>(c.nvars))
        fail(Code::ScheduleTooShort, "schedule covers " + std::to_string(sched.exps.size()) +
                                         " of " + std::to_string(c.nvars) + " variables");

    detail::GaSlpBuilder b;
    GroupEncodedCircuit out;
    std::unordered_map<std::string, std::array<std::string, 2>> var;

    // g^(E_i * e_i) as one power word; the monomial prod x_i^{e_i} becomes the
    // diagonal word prod g^(E_i e_i), conjugating the inner gate
    auto monomial_conjugate = [&](const std::vector<Int>& exps, const std::string& inner,
                                  const std::string& hint) {
        std::vector<size_t> active;
        for (size_t i = 0; i < exps.size(); ++i)
            if (exps[i] != 0) active.push_back(i);
        if (active.empty()) return b.word(hint, {inner});  // empty product: plain copy
        std::vector<std::string> full;
        for (size_t i : active)
            full.push_back(b.power("g", sched.exps[i] * exps[i], hint + ".w" + std::to_string(i + 1)));
        full.push_back(inner);
        for (size_t k = active.size(); k-- > 0;) {
            size_t i = active[k];
            full.push_back(b.power("g^-1", sched.exps[i] * exps[i], hint + ".wi" + std::to_string(i + 1)));
        }
        return b.word(hint, full);
    };

    // alpha * W by binary doubling of the encoded word W
    auto scale_by = [&](const Int& alpha, const std::string& w_pos, const std::string& w_neg,
                        const std::string& hint) {
        if (alpha == 0) return b.id_word(hint);
        bool neg = alpha < 0;
        Int a = neg ? Int(-alpha) : alpha;
        const std::string& base = neg ? w_neg : w_pos;
        unsigned nbits = bit_length(a);
        std::vector<std::string> doubled{base};
        for (unsigned k = 1; k < nbits; ++k) {
            std::string next = b.ids.fresh(hint + ".s" + std::to_string(k));
            b.slp.rules.push_back({next, ConcatRhs{b.resolve(doubled.back()), b.resolve(doubled.back())}});
            doubled.push_back(next);
        }
        std::vector<std::string> parts;
        for (unsigned k = 0; k < nbits; ++k)
            if (boost::multiprecision::bit_test(a, k)) parts.push_back(doubled[k]);
        return b.word(hint, parts);
    };

    for (const auto& g : c.gates) {
        for (int f = 0; f < 2; ++f) {
            const bool neg = f == 1;
            const std::string hint = (neg ? "N." : "P.") + g.id;
            std::string v;
            if (const auto* kk = std::get_if<ConstRhs>(&g.rhs)) {
                if (kk->value == 0)
                    v = b.id_word(hint);
                else if ((kk->value == 1) != neg)
                    v = b.word(hint, {b.letter("h")});
                else
                    v = b.word(hint, {b.letter("h^-1")});
            } else if (const auto* vr = std::get_if<VarRhs>(&g.rhs)) {
                int vi = std::atoi(vr->name.c_str() + 1) - 1;
                std::vector<Int> exps(static_cast<size_t>(c.nvars), 0);
                exps[static_cast<size_t>(vi)] = 1;
                v = monomial_conjugate(exps, b.word(hint + ".h", {b.letter(neg ? "h^-1" : "h")}), hint);
            } else if (const auto* a = std::get_if<AddRhs>(&g.rhs)) {
                v = b.word(hint, {var.at(a->left)[static_cast<size_t>(f)],
                                  var.at(a->right)[static_cast<size_t>(f)]});
            } else {
                const auto& pm = std::get<PowerMulRhs>(g.rhs);
                // normalize the coefficient to 1 first, then conjugate
                const std::string inner_pos = var.at(pm.gate)[static_cast<size_t>(f)];
                const std::string inner_neg = var.at(pm.gate)[static_cast<size_t>(1 - f)];
                std::string scaled = scale_by(pm.coeff, inner_pos, inner_neg, hint + ".c");
                v = monomial_conjugate(pm.exps, scaled, hint);
            }
            var[g.id][static_cast<size_t>(f)] = v;
        }
        out.gate_var[g.id] = b.resolve(var.at(g.id)[0]);
        out.gate_var_neg[g.id] = b.resolve(var.at(g.id)[1]);
    }

    b.slp.start = b.resolve(var.at(c.output)[0]);
    out.slp = std::move(b.slp);
    return out;
}

}  // namespace cwp
