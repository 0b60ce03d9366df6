#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cwp/circuit.hpp"
#include "cwp/circuit_eval.hpp"
#include "cwp/matrix.hpp"
#include "cwp/slp.hpp"

namespace cwp {

// ---------------------------------------------------------------------------
// Subtraction elimination: two positive circuits with val(c) = val(c1) - val(c2)
// over every ring. Gate A splits into A.1 and A.2; multiplication follows the
// sign calculus A.1 = B.1*C.1 + B.2*C.2 and A.2 = B.1*C.2 + B.2*C.1.
// Degrees are preserved, depth at most doubles, mdepth is preserved.
// ---------------------------------------------------------------------------

inline std::pair<Circuit, Circuit> eliminate_subtraction(const Circuit& c) {
    require_valid(c);
    Circuit out;
    out.gates.reserve(c.gates.size() * 2);
    auto pos = [](const std::string& id, int half) { return id + (half == 1 ? ".1" : ".2"); };
    for (const auto& g : c.gates) {
        if (const auto* k = std::get_if<ConstRhs>(&g.rhs)) {
            if (k->value == -1) {
                out.gates.push_back({pos(g.id, 1), ConstRhs{0}});
                out.gates.push_back({pos(g.id, 2), ConstRhs{1}});
            } else {
                out.gates.push_back({pos(g.id, 1), ConstRhs{k->value}});
                out.gates.push_back({pos(g.id, 2), ConstRhs{0}});
            }
        } else if (const auto* v = std::get_if<VarRhs>(&g.rhs)) {
            out.gates.push_back({pos(g.id, 1), VarRhs{v->name}});
            out.gates.push_back({pos(g.id, 2), ConstRhs{0}});
        } else if (const auto* a = std::get_if<AddRhs>(&g.rhs)) {
            out.gates.push_back({pos(g.id, 1), AddRhs{pos(a->left, 1), pos(a->right, 1)}});
            out.gates.push_back({pos(g.id, 2), AddRhs{pos(a->left, 2), pos(a->right, 2)}});
        } else {
            const auto& m = std::get<MulRhs>(g.rhs);
            out.gates.push_back({g.id + ".1a", MulRhs{pos(m.left, 1), pos(m.right, 1)}});
            out.gates.push_back({g.id + ".1b", MulRhs{pos(m.left, 2), pos(m.right, 2)}});
            out.gates.push_back({pos(g.id, 1), AddRhs{g.id + ".1a", g.id + ".1b"}});
            out.gates.push_back({g.id + ".2a", MulRhs{pos(m.left, 1), pos(m.right, 2)}});
            out.gates.push_back({g.id + ".2b", MulRhs{pos(m.left, 2), pos(m.right, 1)}});
            out.gates.push_back({pos(g.id, 2), AddRhs{g.id + ".2a", g.id + ".2b"}});
        }
    }
    Circuit c1 = out, c2 = std::move(out);
    c1.output = pos(c.output, 1);
    c2.output = pos(c.output, 2);
    return {std::move(c1), std::move(c2)};
}

// ---------------------------------------------------------------------------
// Structure-preserving partitions of the multiplication gates
// ---------------------------------------------------------------------------

struct PartitionedCircuit {
    Circuit circuit;
    std::vector<std::vector<std::string>> classes;  // classes[k] is V_{k+1}
};

// Checks that the classes are disjoint, cover exactly the multiplication
// gates, and that class indices strictly increase along every dag path
// between multiplication gates.
inline std::optional<ValidationError> validate_partition(const PartitionedCircuit& pc) {
    if (auto e = validate(pc.circuit)) return e;
    Resolved r = resolve(pc.circuit);
    std::unordered_map<std::string, int> pos;
    for (size_t i = 0; i < pc.circuit.gates.size(); ++i) pos[pc.circuit.gates[i].id] = static_cast<int>(i);

    std::vector<int> cls(r.gates.size(), -1);
    for (size_t k = 0; k < pc.classes.size(); ++k) {
        for (const auto& id : pc.classes[k]) {
            auto it = pos.find(id);
            if (it == pos.end())
                return ValidationError{Code::BadPartition, id, "partition names an unknown gate"};
            int i = it->second;
            if (r.gates[static_cast<size_t>(i)].kind != GateKind::Mul)
                return ValidationError{Code::BadPartition, id, "partition contains a non-multiplication gate"};
            if (cls[static_cast<size_t>(i)] != -1)
                return ValidationError{Code::BadPartition, id, "gate appears in two classes"};
            cls[static_cast<size_t>(i)] = static_cast<int>(k);
        }
    }
    for (size_t i = 0; i < r.gates.size(); ++i)
        if (r.gates[i].kind == GateKind::Mul && cls[i] == -1)
            return ValidationError{Code::BadPartition, pc.circuit.gates[i].id,
                                   "multiplication gate missing from the partition"};

    // strictly increasing along paths: compare each mul with the largest class
    // strictly below it
    std::vector<int> max_below(r.gates.size(), -1);
    for (size_t i = 0; i < r.gates.size(); ++i) {
        const RGate& g = r.gates[i];
        if (g.kind == GateKind::Add || g.kind == GateKind::Mul) {
            for (int ch : {g.a, g.b}) {
                int below = max_below[static_cast<size_t>(ch)];
                if (r.gates[static_cast<size_t>(ch)].kind == GateKind::Mul)
                    below = std::max(below, cls[static_cast<size_t>(ch)]);
                max_below[i] = std::max(max_below[i], below);
            }
            if (g.kind == GateKind::Mul && max_below[i] >= cls[i])
                return ValidationError{Code::BadPartition, pc.circuit.gates[i].id,
                                       "class does not increase along a path"};
        }
    }
    return std::nullopt;
}

inline void require_valid_partition(const PartitionedCircuit& pc) {
    if (auto e = validate_partition(pc))
        fail(e->code, "gate '" + e->gate + "': " + e->message);
}

// ---------------------------------------------------------------------------
// SLP over Gamma_d -> variable-free circuit computing the sum of squares of
// the strict upper entries of the product matrix; gate X(i,j) evaluates to
// entry [i,j] of the matrix of SLP variable X. mdepth <= d, degree <= 2(d-1),
// and the multiplication gates carry a structure-preserving partition: entry
// products for span j-i land in V_{j-i}, the output squares in V_d.
// ---------------------------------------------------------------------------

struct SlpCircuit {
    PartitionedCircuit pc;
    // circuit gate computing entry (i, j) of an SLP variable, key "X|i|j"
    std::unordered_map<std::string, std::string> entry_gate;
};

inline std::string entry_key(const std::string& var, int i, int j) {
    return var + "|" + std::to_string(i) + "|" + std::to_string(j);
}

inline SlpCircuit slp_to_circuit_full(const Slp& g, int d) {
    require_valid(g);
    if (d < 1) fail(Code::BadIndex, "dimension must be >= 1");
    SlpCircuit out;
    Circuit& c = out.pc.circuit;
    out.pc.classes.assign(static_cast<size_t>(d), {});
    IdGen ids;
    for (const auto& rule : g.rules) ids.reserve(rule.id);

    auto gate_of = [&](const std::string& var, int i, int j) {
        return out.entry_gate.at(entry_key(var, i, j));
    };

    for (const auto& rule : g.rules) {
        if (const auto* t = std::get_if<TerminalRhs>(&rule.rhs)) {
            auto [gi, sign] = parse_ut_letter(t->letter, d);  // BadLetter if not Gamma_d
            for (int i = 1; i < d; ++i)
                for (int j = i + 1; j <= d; ++j) {
                    int value = (i == gi && j == gi + 1) ? sign : 0;
                    std::string id = ids.fresh(rule.id + "_" + std::to_string(i) + "_" + std::to_string(j));
                    c.gates.push_back({id, ConstRhs{value}});
                    out.entry_gate[entry_key(rule.id, i, j)] = id;
                }
        } else {
            const auto& cc = std::get<ConcatRhs>(rule.rhs);
            for (int i = 1; i < d; ++i)
                for (int j = i + 1; j <= d; ++j) {
                    // B(i,j) + C(i,j) + sum_{i<k<j} B(i,k) * C(k,j)
                    std::string acc = ids.fresh(rule.id + "_s" + std::to_string(i) + "_" + std::to_string(j));
                    c.gates.push_back({acc, AddRhs{gate_of(cc.left, i, j), gate_of(cc.right, i, j)}});
                    for (int k = i + 1; k < j; ++k) {
                        std::string prod = ids.fresh(rule.id + "_p" + std::to_string(i) + "_" +
                                                     std::to_string(k) + "_" + std::to_string(j));
                        c.gates.push_back({prod, MulRhs{gate_of(cc.left, i, k), gate_of(cc.right, k, j)}});
                        out.pc.classes[static_cast<size_t>(j - i - 1)].push_back(prod);
                        std::string next = ids.fresh(rule.id + "_a" + std::to_string(i) + "_" +
                                                     std::to_string(k) + "_" + std::to_string(j));
                        c.gates.push_back({next, AddRhs{acc, prod}});
                        acc = next;
                    }
                    out.entry_gate[entry_key(rule.id, i, j)] = acc;
                }
        }
    }

    // output: sum of squares of the strict upper entries of the start variable
    std::string acc;
    for (int i = 1; i < d; ++i)
        for (int j = i + 1; j <= d; ++j) {
            std::string sq = ids.fresh("T_sq" + std::to_string(i) + "_" + std::to_string(j));
            const std::string& s = gate_of(g.start, i, j);
            c.gates.push_back({sq, MulRhs{s, s}});
            out.pc.classes[static_cast<size_t>(d - 1)].push_back(sq);
            if (acc.empty()) {
                acc = sq;
            } else {
                std::string next = ids.fresh("T_acc" + std::to_string(i) + "_" + std::to_string(j));
                c.gates.push_back({next, AddRhs{acc, sq}});
                acc = next;
            }
        }
    if (acc.empty()) {  // d == 1: the empty sum
        acc = ids.fresh("T");
        c.gates.push_back({acc, ConstRhs{0}});
    }
    c.output = acc;
    return out;
}

inline PartitionedCircuit slp_to_circuit(const Slp& g, int d) {
    return slp_to_circuit_full(g, d).pc;
}

// Partition for the doubled circuit of eliminate_subtraction: the four
// product gates spawned by a multiplication inherit its class.
inline std::pair<PartitionedCircuit, PartitionedCircuit> eliminate_subtraction_partitioned(
    const PartitionedCircuit& pc) {
    auto [c1, c2] = eliminate_subtraction(pc.circuit);
    std::vector<std::vector<std::string>> classes(pc.classes.size());
    for (size_t k = 0; k < pc.classes.size(); ++k)
        for (const auto& id : pc.classes[k]) {
            classes[k].push_back(id + ".1a");
            classes[k].push_back(id + ".1b");
            classes[k].push_back(id + ".2a");
            classes[k].push_back(id + ".2b");
        }
    return {PartitionedCircuit{std::move(c1), classes}, PartitionedCircuit{std::move(c2), classes}};
}

// ---------------------------------------------------------------------------
// Multiplication-depth reduction: eliminates the lowest partition class by
// serial composition. For every mul gate A_i = B_i * C_i in V_1 the circuit
// acquires a copy in which the unique 1-gate is rewired to C_i and A_i reads
// the copy of B_i; copies of multiplication gates are set to 0. Classes shift
// down by one.
//
// Faithful mode copies every gate exactly as in the construction. Compact
// mode keeps only the part of each copy that feeds its B_i, resolves the
// resulting unit additions by aliasing, and drops dead gates; values agree
// with faithful mode, the circuit stays desk-sized.
// ---------------------------------------------------------------------------

enum class CopyMode { Faithful, Compact };

namespace detail {

struct ConstNormalized {
    Circuit circuit;
    std::string zero, one;
    std::unordered_map<std::string, std::string> remap;  // old id -> surviving id
};

// Unique 0-gate and unique 1-gate up front; every constant gate is aliased to
// them. Requires a positive circuit.
inline ConstNormalized normalize_constants(const Circuit& c) {
    ConstNormalized out;
    IdGen ids(c);
    out.zero = ids.fresh("K0");
    out.one = ids.fresh("K1");
    out.circuit.gates.push_back({out.zero, ConstRhs{0}});
    out.circuit.gates.push_back({out.one, ConstRhs{1}});
    auto resolve_id = [&](const std::string& id) {
        auto it = out.remap.find(id);
        return it == out.remap.end() ? id : it->second;
    };
    for (const auto& g : c.gates) {
        if (const auto* k = std::get_if<ConstRhs>(&g.rhs)) {
            if (k->value == -1) fail(Code::NotPositive, "circuit contains the constant -1");
            out.remap[g.id] = k->value == 0 ? out.zero : out.one;
        } else if (const auto* a = std::get_if<AddRhs>(&g.rhs)) {
            out.circuit.gates.push_back({g.id, AddRhs{resolve_id(a->left), resolve_id(a->right)}});
        } else if (const auto* m = std::get_if<MulRhs>(&g.rhs)) {
            out.circuit.gates.push_back({g.id, MulRhs{resolve_id(m->left), resolve_id(m->right)}});
        } else {
            fail(Code::NotVariableFree, "circuit contains variables");
        }
    }
    out.circuit.output = resolve_id(c.output);
    return out;
}

// Restrict to gates reachable from the output; class lists shrink accordingly.
inline PartitionedCircuit prune_unreachable(const PartitionedCircuit& pc) {
    std::unordered_map<std::string, size_t> pos;
    pos.reserve(pc.circuit.gates.size() * 2);
    for (size_t i = 0; i < pc.circuit.gates.size(); ++i) pos[pc.circuit.gates[i].id] = i;
    std::vector<bool> live(pc.circuit.gates.size(), false);
    std::vector<size_t> stack{pos.at(pc.circuit.output)};
    live[stack[0]] = true;
    while (!stack.empty()) {
        size_t i = stack.back();
        stack.pop_back();
        const Rhs& r = pc.circuit.gates[i].rhs;
        auto visit = [&](const std::string& id) {
            size_t j = pos.at(id);
            if (!live[j]) {
                live[j] = true;
                stack.push_back(j);
            }
        };
        if (const auto* a = std::get_if<AddRhs>(&r)) {
            visit(a->left);
            visit(a->right);
        } else if (const auto* m = std::get_if<MulRhs>(&r)) {
            visit(m->left);
            visit(m->right);
        }
    }
    PartitionedCircuit out;
    out.circuit.output = pc.circuit.output;
    out.circuit.gates.reserve(pc.circuit.gates.size());
    for (size_t i = 0; i < pc.circuit.gates.size(); ++i)
        if (live[i]) out.circuit.gates.push_back(pc.circuit.gates[i]);
    out.classes.resize(pc.classes.size());
    for (size_t k = 0; k < pc.classes.size(); ++k)
        for (const auto& id : pc.classes[k])
            if (live[pos.at(id)]) out.classes[k].push_back(id);
    return out;
}

}  // namespace detail

inline PartitionedCircuit reduce_mdepth_once(const PartitionedCircuit& pc,
                                             CopyMode mode = CopyMode::Faithful) {
    require_valid_partition(pc);
    if (pc.classes.empty()) fail(Code::BadPartition, "partition needs at least one class");

    detail::ConstNormalized norm = detail::normalize_constants(pc.circuit);

    const std::vector<std::string>& v1 = pc.classes.front();
    std::vector<std::vector<std::string>> shifted(pc.classes.begin() + 1, pc.classes.end());

    if (v1.empty()) {
        PartitionedCircuit out{norm.circuit, std::move(shifted)};
        return mode == CopyMode::Compact ? detail::prune_unreachable(out) : out;
    }

    const Circuit& base = norm.circuit;
    std::unordered_map<std::string, size_t> pos;
    pos.reserve(base.gates.size() * 2);
    for (size_t i = 0; i < base.gates.size(); ++i) pos[base.gates[i].id] = i;

    std::unordered_set<std::string> v1_set(v1.begin(), v1.end());

    IdGen ids(base);
    Circuit out;
    if (mode == CopyMode::Faithful) out.gates.reserve(base.gates.size() * (v1.size() + 1));
    out.output = base.output;

    // compact mode only: gates replaced by pure forwards
    std::unordered_map<std::string, std::string> alias;
    auto resolve_alias = [&](std::string id) {
        for (auto it = alias.find(id); it != alias.end(); it = alias.find(id)) id = it->second;
        return id;
    };

    // sub-dag below a gate (gate itself included)
    auto cone_of = [&](const std::string& top) {
        std::unordered_set<std::string> cone{top};
        std::vector<std::string> stack{top};
        while (!stack.empty()) {
            std::string id = stack.back();
            stack.pop_back();
            const Rhs& r = base.gates[pos.at(id)].rhs;
            auto visit = [&](const std::string& ch) {
                if (cone.insert(ch).second) stack.push_back(ch);
            };
            if (const auto* a = std::get_if<AddRhs>(&r)) {
                visit(a->left);
                visit(a->right);
            } else if (const auto* m = std::get_if<MulRhs>(&r)) {
                visit(m->left);
                visit(m->right);
            }
        }
        return cone;
    };

    int copy_no = 0;
    for (const auto& g : base.gates) {
        if (!v1_set.count(g.id)) {
            if (mode == CopyMode::Faithful) {
                out.gates.push_back(g);
            } else if (const auto* a = std::get_if<AddRhs>(&g.rhs)) {
                out.gates.push_back({g.id, AddRhs{resolve_alias(a->left), resolve_alias(a->right)}});
            } else if (const auto* m = std::get_if<MulRhs>(&g.rhs)) {
                out.gates.push_back({g.id, MulRhs{resolve_alias(m->left), resolve_alias(m->right)}});
            } else {
                out.gates.push_back(g);
            }
            continue;
        }

        ++copy_no;
        const auto& m = std::get<MulRhs>(base.gates[pos.at(g.id)].rhs);
        const std::string b_i = m.left;
        const std::string c_i = mode == CopyMode::Compact ? resolve_alias(m.right) : m.right;
        const std::string suffix = "@" + std::to_string(copy_no);

        // ids of this round's copies; allocated up front so references inside
        // the copy block resolve no matter how fresh() disambiguates
        std::unordered_map<std::string, std::string> cid;
        auto copy_id = [&](const std::string& h) -> const std::string& {
            auto it = cid.find(h);
            if (it == cid.end()) it = cid.emplace(h, ids.fresh(h + suffix)).first;
            return it->second;
        };

        if (mode == CopyMode::Faithful) {
            for (const auto& h : base.gates) {
                const std::string& hid = copy_id(h.id);
                if (h.id == norm.zero) {
                    out.gates.push_back({hid, ConstRhs{0}});
                } else if (h.id == norm.one) {
                    out.gates.push_back({hid, AddRhs{c_i, norm.zero}});
                } else if (const auto* a = std::get_if<AddRhs>(&h.rhs)) {
                    out.gates.push_back({hid, AddRhs{copy_id(a->left), copy_id(a->right)}});
                } else {
                    // copies of multiplication gates are set to 0
                    out.gates.push_back({hid, ConstRhs{0}});
                }
            }
            out.gates.push_back({g.id, AddRhs{copy_id(b_i), norm.zero}});
        } else {
            auto cone = cone_of(b_i);
            for (const auto& h : base.gates) {
                if (!cone.count(h.id)) continue;
                if (h.id == norm.zero) {
                    alias[copy_id(h.id)] = norm.zero;
                } else if (h.id == norm.one) {
                    alias[copy_id(h.id)] = c_i;
                } else if (const auto* a = std::get_if<AddRhs>(&h.rhs)) {
                    std::string l = resolve_alias(copy_id(a->left));
                    std::string r = resolve_alias(copy_id(a->right));
                    out.gates.push_back({copy_id(h.id), AddRhs{l, r}});
                } else {
                    fail(Code::BadPartition, "multiplication gate below class 1: " + h.id);
                }
            }
            alias[g.id] = resolve_alias(copy_id(b_i));
        }
    }

    if (mode == CopyMode::Compact) {
        out.output = resolve_alias(out.output);
        PartitionedCircuit result{std::move(out), std::move(shifted)};
        return detail::prune_unreachable(result);
    }
    return PartitionedCircuit{std::move(out), std::move(shifted)};
}

// Applies reduce_mdepth_once per class; the result contains no multiplication
// gates and has the same value.
inline Circuit to_addition_circuit(const PartitionedCircuit& pc,
                                   CopyMode mode = CopyMode::Compact) {
    PartitionedCircuit cur = pc;
    size_t rounds = pc.classes.size();
    for (size_t k = 0; k < rounds; ++k) cur = reduce_mdepth_once(cur, mode);
    for (const auto& g : cur.circuit.gates)
        if (std::holds_alternative<MulRhs>(g.rhs))
            fail(Code::BadPartition, "multiplication gate survived the pipeline: " + g.id);
    return cur.circuit;
}

// ---------------------------------------------------------------------------
// Degree normalization: pads with multiply-by-1 gates until every addition
// gate has children of its own formal degree and both circuits share one
// formal degree. Values are unchanged; pad gates are tagged by id.
// ---------------------------------------------------------------------------

struct DegreeAnnotatedCircuit {
    Circuit circuit;
    std::unordered_map<std::string, Int> degree;  // per-gate formal degree
    std::vector<std::string> pad_gates;
};

namespace detail {

struct DegreeNormState {
    Circuit out;
    IdGen ids;
    std::string one;
    bool one_emitted = false;
    std::unordered_map<std::string, Int> deg;
    std::vector<std::string> pads;

    explicit DegreeNormState(const Circuit& c) : ids(c) { one = ids.fresh("pad1"); }

    const std::string& one_gate() {
        if (!one_emitted) {
            // inserted lazily at the front so pads may reference it
            out.gates.insert(out.gates.begin(), {one, ConstRhs{1}});
            deg[one] = 1;
            one_emitted = true;
        }
        return one;
    }

    // chain of multiply-by-1 gates lifting `id` by `by` degrees
    std::string pad(const std::string& id, Int by) {
        std::string cur = id;
        for (Int k = 0; k < by; ++k) {
            std::string next = ids.fresh("pad." + id);
            out.gates.push_back({next, MulRhs{cur, one_gate()}});
            pads.push_back(next);
            deg[next] = deg.at(cur) + 1;
            cur = next;
        }
        return cur;
    }
};

inline DegreeAnnotatedCircuit degree_normalize_one(const Circuit& c) {
    require_valid(c);
    DegreeNormState st(c);
    for (const auto& g : c.gates) {
        if (const auto* k = std::get_if<ConstRhs>(&g.rhs)) {
            if (k->value == -1) fail(Code::NotPositive, "circuit contains the constant -1");
            st.out.gates.push_back(g);
            st.deg[g.id] = 1;
        } else if (std::holds_alternative<VarRhs>(g.rhs)) {
            st.out.gates.push_back(g);
            st.deg[g.id] = 1;
        } else if (const auto* a = std::get_if<AddRhs>(&g.rhs)) {
            Int dl = st.deg.at(a->left), dr = st.deg.at(a->right);
            std::string l = a->left, r = a->right;
            if (dl < dr) l = st.pad(l, dr - dl);
            if (dr < dl) r = st.pad(r, dl - dr);
            st.out.gates.push_back({g.id, AddRhs{l, r}});
            st.deg[g.id] = std::max(dl, dr);
        } else {
            const auto& m = std::get<MulRhs>(g.rhs);
            st.out.gates.push_back(g);
            st.deg[g.id] = st.deg.at(m.left) + st.deg.at(m.right);
        }
    }
    st.out.output = c.output;
    return {std::move(st.out), std::move(st.deg), std::move(st.pads)};
}

inline void pad_output(DegreeAnnotatedCircuit& a, const Int& target) {
    Int have = a.degree.at(a.circuit.output);
    if (have == target) return;
    DegreeNormState st(a.circuit);
    st.out = std::move(a.circuit);
    st.deg = std::move(a.degree);
    st.pads = std::move(a.pad_gates);
    // reuse an existing pad-1 gate if the circuit has one
    a.circuit = {};
    std::string padded = st.pad(st.out.output, target - have);
    st.out.output = padded;
    a.circuit = std::move(st.out);
    a.degree = std::move(st.deg);
    a.pad_gates = std::move(st.pads);
}

}  // namespace detail

inline std::pair<DegreeAnnotatedCircuit, DegreeAnnotatedCircuit> degree_normalize(
    const Circuit& c1, const Circuit& c2) {
    DegreeAnnotatedCircuit a1 = detail::degree_normalize_one(c1);
    DegreeAnnotatedCircuit a2 = detail::degree_normalize_one(c2);
    Int d1 = a1.degree.at(a1.circuit.output);
    Int d2 = a2.degree.at(a2.circuit.output);
    Int target = std::max(d1, d2);
    detail::pad_output(a1, target);
    detail::pad_output(a2, target);
    return {std::move(a1), std::move(a2)};
}

// ---------------------------------------------------------------------------
// Encoding a pair of positive variable-free circuits of common formal degree d
// into an SLP over Gamma_{d+1} evaluating to T_{1,d+1}^{v1 - v2}. The SLP has
// variables A(i, b) per gate A, span equal to the gate degree, and flavor
// b = +-1, with val(A(i, b)) = T_{i, i+deg A}^{b * val(A)}. Additions
// concatenate, multiplications become commutators of the factors.
// ---------------------------------------------------------------------------

namespace detail {

struct UtSlpBuilder {
    Slp slp;
    IdGen ids;
    std::unordered_map<std::string, std::string> letter_rule;
    std::unordered_map<std::string, std::string> alias;

    std::string resolve(std::string id) const {
        auto it = alias.find(id);
        while (it != alias.end()) {
            id = it->second;
            it = alias.find(id);
        }
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

    // rule for the concatenation of existing rules; single-element words alias
    std::string word(const std::string& hint, const std::vector<std::string>& parts) {
        if (parts.empty()) fail(Code::BadParams, "empty word");
        std::string acc = resolve(parts[0]);
        for (size_t k = 1; k < parts.size(); ++k) {
            std::string next = k + 1 == parts.size() ? ids.fresh(hint)
                                                     : ids.fresh(hint + "#" + std::to_string(k));
            slp.rules.push_back({next, ConcatRhs{acc, resolve(parts[k])}});
            acc = next;
        }
        if (parts.size() == 1) {
            std::string id = ids.fresh(hint);
            alias[id] = acc;
            return id;
        }
        return acc;
    }
};

}  // namespace detail

inline Slp circuit_pair_to_ut_slp(const DegreeAnnotatedCircuit& a1,
                                  const DegreeAnnotatedCircuit& a2) {
    const Int big_d1 = a1.degree.at(a1.circuit.output);
    const Int big_d2 = a2.degree.at(a2.circuit.output);
    if (big_d1 != big_d2)
        fail(Code::DegreeMismatch,
             "circuits have formal degrees " + big_d1.str() + " and " + big_d2.str());
    if (big_d1 > 64) fail(Code::TooLarge, "formal degree too large to index a matrix group");
    const int d = big_d1.convert_to<int>();
    const int dim = d + 1;

    detail::UtSlpBuilder b;

    // per circuit: variable name of (gate, start row i, flavor b)
    auto encode = [&](const DegreeAnnotatedCircuit& ac, const std::string& tag)
        -> std::unordered_map<std::string, std::string> {
        std::unordered_map<std::string, std::string> var;  // key "gate|i|b"
        auto key = [](const std::string& g, int i, int bb) {
            return g + "|" + std::to_string(i) + "|" + (bb > 0 ? "+" : "-");
        };
        auto deg_of = [&](const std::string& g) { return ac.degree.at(g).convert_to<int>(); };
        for (const auto& g : ac.circuit.gates) {
            const int dg = deg_of(g.id);
            for (int i = 1; i + dg <= dim; ++i) {
                for (int bb : {1, -1}) {
                    std::string hint = tag + "." + g.id + "." + std::to_string(i) +
                                       (bb > 0 ? "p" : "m");
                    std::string id;
                    if (const auto* k = std::get_if<ConstRhs>(&g.rhs)) {
                        if (k->value == -1) fail(Code::NotPositive, "circuit contains -1");
                        if (k->value == 0) {
                            // identity: a cancelling generator pair
                            id = b.word(hint, {b.letter(ut_letter(i)), b.letter(ut_letter(i, -1))});
                        } else {
                            // degree-1 input: T_{i,i+1}^b is a single generator
                            id = b.word(hint, {b.letter(ut_letter(i, bb))});
                        }
                    } else if (std::holds_alternative<VarRhs>(g.rhs)) {
                        fail(Code::NotVariableFree, "inputs must be substituted before encoding");
                    } else if (const auto* ar = std::get_if<AddRhs>(&g.rhs)) {
                        if (deg_of(ar->left) != dg || deg_of(ar->right) != dg)
                            fail(Code::DegreeMismatch,
                                 "addition gate " + g.id + " has children of unequal degree");
                        id = b.word(hint, {var.at(key(ar->left, i, bb)), var.at(key(ar->right, i, bb))});
                    } else {
                        const auto& m = std::get<MulRhs>(g.rhs);
                        const int db = deg_of(m.left);
                        const int k = i + db;
                        const std::string& bl_m = var.at(key(m.left, i, -1));
                        const std::string& cr_m = var.at(key(m.right, k, -1));
                        const std::string& bl_p = var.at(key(m.left, i, 1));
                        const std::string& cr_p = var.at(key(m.right, k, 1));
                        if (bb > 0)
                            id = b.word(hint, {bl_m, cr_m, bl_p, cr_p});
                        else
                            id = b.word(hint, {cr_m, bl_m, cr_p, bl_p});
                    }
                    var[key(g.id, i, bb)] = id;
                }
            }
        }
        return var;
    };

    auto var1 = encode(a1, "L");
    auto var2 = encode(a2, "R");
    std::string s = b.word("S", {var1.at(a1.circuit.output + "|1|+"), var2.at(a2.circuit.output + "|1|-")});
    b.slp.start = b.resolve(s);
    return b.slp;
}

}  // namespace cwp
