#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "cwp/error.hpp"
#include "cwp/ints.hpp"

namespace cwp {

// ---------------------------------------------------------------------------
// Arithmetic circuit: a dag of gates in declaration order, where every gate
// may only reference gates declared before it. Constants are restricted to
// {-1, 0, 1}; anything richer has to be built from gates.
// ---------------------------------------------------------------------------

struct ConstRhs {
    int value = 0;  // -1, 0 or 1
    bool operator==(const ConstRhs&) const = default;
};
struct VarRhs {
    std::string name;
    bool operator==(const VarRhs&) const = default;
};
struct AddRhs {
    std::string left, right;
    bool operator==(const AddRhs&) const = default;
};
struct MulRhs {
    std::string left, right;
    bool operator==(const MulRhs&) const = default;
};

using Rhs = std::variant<ConstRhs, VarRhs, AddRhs, MulRhs>;

struct Gate {
    std::string id;
    Rhs rhs;
    bool operator==(const Gate&) const = default;
};

struct Circuit {
    std::vector<Gate> gates;
    std::string output;
    bool operator==(const Circuit&) const = default;
};

struct ValidationError {
    Code code;
    std::string gate;
    std::string message;
};

// Checks the Circuit invariants in declaration order and reports the first
// violation: unique ids, references only to earlier gates, constants in
// {-1,0,1}, and a declared output gate.
inline std::optional<ValidationError> validate(const Circuit& c) {
    std::unordered_set<std::string> seen;
    seen.reserve(c.gates.size() * 2);
    for (const auto& g : c.gates) {
        if (seen.count(g.id))
            return ValidationError{Code::DuplicateId, g.id, "gate id declared twice"};
        auto check_ref = [&](const std::string& ref) -> std::optional<ValidationError> {
            if (!seen.count(ref)) {
                if (ref == g.id || [&] {
                        for (const auto& h : c.gates)
                            if (h.id == ref) return true;
                        return false;
                    }())
                    return ValidationError{Code::ForwardReference, g.id,
                                           "gate references " + ref + " which is not declared earlier"};
                return ValidationError{Code::UndeclaredGate, g.id,
                                       "gate references undeclared gate " + ref};
            }
            return std::nullopt;
        };
        if (const auto* k = std::get_if<ConstRhs>(&g.rhs)) {
            if (k->value < -1 || k->value > 1)
                return ValidationError{Code::BadConstant, g.id,
                                       "constant " + std::to_string(k->value) + " outside {-1,0,1}"};
        } else if (const auto* a = std::get_if<AddRhs>(&g.rhs)) {
            if (auto e = check_ref(a->left)) return e;
            if (auto e = check_ref(a->right)) return e;
        } else if (const auto* m = std::get_if<MulRhs>(&g.rhs)) {
            if (auto e = check_ref(m->left)) return e;
            if (auto e = check_ref(m->right)) return e;
        }
        seen.insert(g.id);
    }
    if (c.gates.empty() || !seen.count(c.output))
        return ValidationError{Code::MissingOutput, c.output, "output gate is not declared"};
    return std::nullopt;
}

inline void require_valid(const Circuit& c) {
    if (auto e = validate(c)) fail(e->code, "gate '" + e->gate + "': " + e->message);
}

// ---------------------------------------------------------------------------
// Resolved form: gate references replaced by indices, variables collected in
// a canonical order ("x2" sorts numerically before "x10"; other names sort
// lexicographically after all x<number> names).
// ---------------------------------------------------------------------------

enum class GateKind : unsigned char { Const, Var, Add, Mul };

struct RGate {
    GateKind kind;
    int a = -1, b = -1;  // child indices / variable index / constant in a
};

struct Resolved {
    std::vector<RGate> gates;
    std::vector<std::string> var_names;  // canonical order
    int output = -1;
};

inline bool var_name_less(const std::string& x, const std::string& y) {
    auto parse = [](const std::string& s) -> std::pair<bool, unsigned long long> {
        if (s.size() < 2 || s[0] != 'x') return {false, 0};
        unsigned long long v = 0;
        for (size_t i = 1; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') return {false, 0};
            v = v * 10 + static_cast<unsigned long long>(s[i] - '0');
        }
        return {true, v};
    };
    auto [xn, xv] = parse(x);
    auto [yn, yv] = parse(y);
    if (xn && yn) return xv < yv;
    if (xn != yn) return xn;
    return x < y;
}

inline std::vector<std::string> circuit_variables(const Circuit& c) {
    std::vector<std::string> names;
    std::unordered_set<std::string> seen;
    for (const auto& g : c.gates)
        if (const auto* v = std::get_if<VarRhs>(&g.rhs))
            if (seen.insert(v->name).second) names.push_back(v->name);
    std::sort(names.begin(), names.end(), var_name_less);
    return names;
}

inline Resolved resolve(const Circuit& c) {
    require_valid(c);
    Resolved r;
    r.var_names = circuit_variables(c);
    std::unordered_map<std::string, int> var_index;
    for (size_t i = 0; i < r.var_names.size(); ++i) var_index[r.var_names[i]] = static_cast<int>(i);
    std::unordered_map<std::string, int> pos;
    pos.reserve(c.gates.size() * 2);
    r.gates.reserve(c.gates.size());
    for (const auto& g : c.gates) {
        RGate rg{GateKind::Const};
        if (const auto* k = std::get_if<ConstRhs>(&g.rhs)) {
            rg.kind = GateKind::Const;
            rg.a = k->value;
        } else if (const auto* v = std::get_if<VarRhs>(&g.rhs)) {
            rg.kind = GateKind::Var;
            rg.a = var_index.at(v->name);
        } else if (const auto* a = std::get_if<AddRhs>(&g.rhs)) {
            rg.kind = GateKind::Add;
            rg.a = pos.at(a->left);
            rg.b = pos.at(a->right);
        } else if (const auto* m = std::get_if<MulRhs>(&g.rhs)) {
            rg.kind = GateKind::Mul;
            rg.a = pos.at(m->left);
            rg.b = pos.at(m->right);
        }
        pos[g.id] = static_cast<int>(r.gates.size());
        r.gates.push_back(rg);
    }
    r.output = pos.at(c.output);
    return r;
}

// ---------------------------------------------------------------------------
// Metrics per the recursive definitions: input gates have depth 1, mdepth 0
// and formal degree 1; depth/mdepth take maxima over children, formal degree
// takes a max for additions and a sum for multiplications.
// ---------------------------------------------------------------------------

struct CircuitMetrics {
    long long depth = 0;
    long long mdepth = 0;
    Int formal_degree = 0;
    bool is_positive = false;
    bool is_skew = false;
    bool is_variable_free = false;
    bool is_addition = false;
};

struct GateMetrics {
    std::vector<long long> depth;
    std::vector<long long> mdepth;
    std::vector<Int> degree;
};

inline GateMetrics gate_metrics(const Resolved& r) {
    GateMetrics m;
    const size_t n = r.gates.size();
    m.depth.resize(n);
    m.mdepth.resize(n);
    m.degree.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const RGate& g = r.gates[i];
        switch (g.kind) {
            case GateKind::Const:
            case GateKind::Var:
                m.depth[i] = 1;
                m.mdepth[i] = 0;
                m.degree[i] = 1;
                break;
            case GateKind::Add:
                m.depth[i] = 1 + std::max(m.depth[g.a], m.depth[g.b]);
                m.mdepth[i] = std::max(m.mdepth[g.a], m.mdepth[g.b]);
                m.degree[i] = std::max(m.degree[g.a], m.degree[g.b]);
                break;
            case GateKind::Mul:
                m.depth[i] = 1 + std::max(m.depth[g.a], m.depth[g.b]);
                m.mdepth[i] = 1 + std::max(m.mdepth[g.a], m.mdepth[g.b]);
                m.degree[i] = m.degree[g.a] + m.degree[g.b];
                break;
        }
    }
    return m;
}

inline CircuitMetrics metrics(const Circuit& c) {
    Resolved r = resolve(c);
    GateMetrics gm = gate_metrics(r);
    CircuitMetrics cm;
    cm.depth = gm.depth[static_cast<size_t>(r.output)];
    cm.mdepth = gm.mdepth[static_cast<size_t>(r.output)];
    cm.formal_degree = gm.degree[static_cast<size_t>(r.output)];
    cm.is_positive = true;
    cm.is_variable_free = true;
    bool any_mul = false;
    bool skew = true;
    for (const RGate& g : r.gates) {
        if (g.kind == GateKind::Const && g.a == -1) cm.is_positive = false;
        if (g.kind == GateKind::Var) cm.is_variable_free = false;
        if (g.kind == GateKind::Mul) {
            any_mul = true;
            bool left_input = r.gates[static_cast<size_t>(g.a)].kind == GateKind::Const ||
                              r.gates[static_cast<size_t>(g.a)].kind == GateKind::Var;
            bool right_input = r.gates[static_cast<size_t>(g.b)].kind == GateKind::Const ||
                               r.gates[static_cast<size_t>(g.b)].kind == GateKind::Var;
            if (!left_input && !right_input) skew = false;
        }
    }
    cm.is_skew = skew;
    cm.is_addition = cm.is_positive && !any_mul;
    return cm;
}

// ---------------------------------------------------------------------------
// Fresh-id allocation for passes that synthesize gates.
// ---------------------------------------------------------------------------

class IdGen {
  public:
    explicit IdGen(const Circuit& c) {
        for (const auto& g : c.gates) used_.insert(g.id);
    }
    IdGen() = default;

    void reserve(const std::string& id) { used_.insert(id); }

    std::string fresh(const std::string& hint) {
        if (used_.insert(hint).second) return hint;
        for (;; ++counter_) {
            std::string cand = hint + "$" + std::to_string(counter_);
            if (used_.insert(cand).second) {
                ++counter_;
                return cand;
            }
        }
    }

  private:
    std::unordered_set<std::string> used_;
    unsigned long long counter_ = 0;
};

}  // namespace cwp
