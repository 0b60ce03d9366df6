#pragma once

#include <json.hpp>

#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "cwp/circuit.hpp"
#include "cwp/coset.hpp"
#include "cwp/multipoly.hpp"
#include "cwp/passes.hpp"
#include "cwp/skew.hpp"
#include "cwp/slp.hpp"

namespace cwp {

using Json = nlohmann::json;

// big integers serialize as JSON numbers while they fit, strings afterwards
inline Json int_to_json(const Int& v) {
    static const Int lo = std::numeric_limits<std::int64_t>::min();
    static const Int hi = std::numeric_limits<std::int64_t>::max();
    if (v >= lo && v <= hi) return v.convert_to<std::int64_t>();
    return v.str();
}

inline Int int_from_json(const Json& j) {
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_string()) return Int(j.get<std::string>());
    fail(Code::ParseError, "expected an integer or integer string");
}

// ---------------------------------------------------------------------------
// Circuits. Right-hand sides {"const":c}, {"var":"x1"}, {"add":[...]},
// {"mul":[...]}; add/mul lists may have more than two operands and may nest
// right-hand-side objects, which desugars into fresh gates on load.
// ---------------------------------------------------------------------------

namespace detail {

struct CircuitLoader {
    Circuit c;
    IdGen ids;

    std::string load_rhs_operand(const Json& j, const std::string& hint) {
        if (j.is_string()) return j.get<std::string>();
        if (j.is_object()) {
            std::string id = ids.fresh(hint);
            c.gates.push_back({id, Rhs{}});
            size_t at = c.gates.size() - 1;
            Rhs r = load_rhs(j, id);
            c.gates[at].rhs = std::move(r);
            return id;
        }
        fail(Code::ParseError, "operand must be a gate id or a nested right-hand side");
    }

    Rhs load_rhs(const Json& j, const std::string& hint) {
        if (!j.is_object() || j.size() != 1)
            fail(Code::ParseError, "right-hand side must be an object with one key");
        if (j.contains("const")) {
            const Json& v = j["const"];
            if (!v.is_number_integer()) fail(Code::ParseError, "const must be an integer");
            long long k = v.get<long long>();
            if (k < -1 || k > 1)
                fail(Code::BadConstant, "constant " + std::to_string(k) + " outside {-1,0,1}");
            return ConstRhs{static_cast<int>(k)};
        }
        if (j.contains("var")) return VarRhs{j["var"].get<std::string>()};
        for (const char* op : {"add", "mul"}) {
            if (!j.contains(op)) continue;
            const Json& list = j[op];
            if (!list.is_array() || list.size() < 2)
                fail(Code::ParseError, std::string(op) + " needs at least two operands");
            std::vector<std::string> ops;
            for (size_t i = 0; i < list.size(); ++i)
                ops.push_back(load_rhs_operand(list[i], hint + "." + std::to_string(i)));
            // left fold; all but the last pair become fresh gates
            std::string acc = ops[0];
            for (size_t i = 1; i + 1 < ops.size(); ++i) {
                std::string id = ids.fresh(hint + "#" + std::to_string(i));
                if (std::string(op) == "add")
                    c.gates.push_back({id, AddRhs{acc, ops[i]}});
                else
                    c.gates.push_back({id, MulRhs{acc, ops[i]}});
                acc = id;
            }
            if (std::string(op) == "add") return AddRhs{acc, ops.back()};
            return MulRhs{acc, ops.back()};
        }
        fail(Code::ParseError, "unknown right-hand side kind");
    }
};

}  // namespace detail

inline Circuit circuit_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("gates") || !j.contains("output"))
        fail(Code::ParseError, "circuit needs \"gates\" and \"output\"");
    detail::CircuitLoader loader;
    // reserve declared ids first so desugaring cannot collide
    for (const Json& gj : j["gates"]) {
        if (!gj.is_object() || !gj.contains("id") || !gj.contains("rhs"))
            fail(Code::ParseError, "every gate needs \"id\" and \"rhs\"");
        loader.ids.reserve(gj["id"].get<std::string>());
    }
    for (const Json& gj : j["gates"]) {
        std::string id = gj["id"].get<std::string>();
        Rhs r = loader.load_rhs(gj["rhs"], id);
        loader.c.gates.push_back({id, std::move(r)});
    }
    loader.c.output = j["output"].get<std::string>();
    require_valid(loader.c);
    return loader.c;
}

inline Json rhs_to_json(const Rhs& r) {
    if (const auto* k = std::get_if<ConstRhs>(&r)) return Json{{"const", k->value}};
    if (const auto* v = std::get_if<VarRhs>(&r)) return Json{{"var", v->name}};
    if (const auto* a = std::get_if<AddRhs>(&r)) return Json{{"add", {a->left, a->right}}};
    const auto& m = std::get<MulRhs>(r);
    return Json{{"mul", {m.left, m.right}}};
}

inline Json circuit_to_json(const Circuit& c) {
    Json gates = Json::array();
    for (const auto& g : c.gates) gates.push_back(Json{{"id", g.id}, {"rhs", rhs_to_json(g.rhs)}});
    return Json{{"gates", std::move(gates)}, {"output", c.output}};
}

inline Json partitioned_to_json(const PartitionedCircuit& pc) {
    Json j = circuit_to_json(pc.circuit);
    j["partition"] = pc.classes;
    return j;
}

inline PartitionedCircuit partitioned_from_json(const Json& j) {
    PartitionedCircuit pc;
    pc.circuit = circuit_from_json(j);
    if (j.contains("partition"))
        pc.classes = j["partition"].get<std::vector<std::vector<std::string>>>();
    if (auto e = validate_partition(pc)) fail(e->code, e->gate + ": " + e->message);
    return pc;
}

// ---------------------------------------------------------------------------
// SLPs. Rules {"id","terminal"} or {"id","concat":[...]} (two or more
// variables) or {"id","word":[{"var":..}|{"letter":..}, ...]}.
// ---------------------------------------------------------------------------

inline Slp slp_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rules") || !j.contains("start"))
        fail(Code::ParseError, "slp needs \"rules\" and \"start\"");
    Slp g;
    IdGen ids;
    for (const Json& rj : j["rules"]) {
        if (!rj.is_object() || !rj.contains("id")) fail(Code::ParseError, "rule needs \"id\"");
        ids.reserve(rj["id"].get<std::string>());
    }
    auto letter_rules = std::map<std::string, std::string>{};
    auto letter_rule = [&](const std::string& l) {
        auto it = letter_rules.find(l);
        if (it != letter_rules.end()) return it->second;
        std::string id = ids.fresh("lt." + l);
        g.rules.push_back({id, TerminalRhs{l}});
        letter_rules[l] = id;
        return id;
    };
    for (const Json& rj : j["rules"]) {
        std::string id = rj["id"].get<std::string>();
        if (rj.contains("terminal")) {
            g.rules.push_back({id, TerminalRhs{rj["terminal"].get<std::string>()}});
        } else if (rj.contains("concat")) {
            auto parts = rj["concat"].get<std::vector<std::string>>();
            if (parts.size() < 2) fail(Code::ParseError, "concat needs at least two variables");
            std::string acc = parts[0];
            for (size_t i = 1; i + 1 < parts.size(); ++i) {
                std::string mid = ids.fresh(id + "#" + std::to_string(i));
                g.rules.push_back({mid, ConcatRhs{acc, parts[i]}});
                acc = mid;
            }
            g.rules.push_back({id, ConcatRhs{acc, parts.back()}});
        } else if (rj.contains("word")) {
            struct Tok {
                bool letter;
                std::string s;
            };
            std::vector<Tok> toks;
            for (const Json& tok : rj["word"]) {
                if (tok.contains("var"))
                    toks.push_back({false, tok["var"].get<std::string>()});
                else if (tok.contains("letter"))
                    toks.push_back({true, tok["letter"].get<std::string>()});
                else
                    fail(Code::ParseError, "word tokens are {\"var\":..} or {\"letter\":..}");
            }
            if (toks.empty()) fail(Code::ParseError, "word rules cannot be empty");
            if (toks.size() == 1) {
                if (!toks[0].letter)
                    fail(Code::ParseError, "a single-variable word has no binary form");
                g.rules.push_back({id, TerminalRhs{toks[0].s}});
            } else {
                std::vector<std::string> parts;
                for (const Tok& t : toks) parts.push_back(t.letter ? letter_rule(t.s) : t.s);
                std::string acc = parts[0];
                for (size_t i = 1; i + 1 < parts.size(); ++i) {
                    std::string mid = ids.fresh(id + "#" + std::to_string(i));
                    g.rules.push_back({mid, ConcatRhs{acc, parts[i]}});
                    acc = mid;
                }
                g.rules.push_back({id, ConcatRhs{acc, parts.back()}});
            }
        } else {
            fail(Code::ParseError, "rule needs \"terminal\", \"concat\" or \"word\"");
        }
    }
    g.start = j["start"].get<std::string>();
    require_valid(g);
    return g;
}

inline Json slp_to_json(const Slp& g) {
    Json rules = Json::array();
    for (const auto& r : g.rules) {
        if (const auto* t = std::get_if<TerminalRhs>(&r.rhs))
            rules.push_back(Json{{"id", r.id}, {"terminal", t->letter}});
        else {
            const auto& c = std::get<ConcatRhs>(r.rhs);
            rules.push_back(Json{{"id", r.id}, {"concat", {c.left, c.right}}});
        }
    }
    return Json{{"rules", std::move(rules)}, {"start", g.start}};
}

// ---------------------------------------------------------------------------
// Bundles and annotated circuits
// ---------------------------------------------------------------------------

inline Json pair_to_json(const Circuit& c1, const Circuit& c2) {
    return Json{{"c1", circuit_to_json(c1)}, {"c2", circuit_to_json(c2)}};
}

inline Json annotated_to_json(const DegreeAnnotatedCircuit& a) {
    Json degrees = Json::object();
    for (const auto& [id, d] : a.degree) degrees[id] = int_to_json(d);
    return Json{{"circuit", circuit_to_json(a.circuit)},
                {"degrees", std::move(degrees)},
                {"pads", a.pad_gates}};
}

inline DegreeAnnotatedCircuit annotated_from_json(const Json& j) {
    DegreeAnnotatedCircuit a;
    a.circuit = circuit_from_json(j.at("circuit"));
    for (const auto& [id, d] : j.at("degrees").items()) a.degree[id] = int_from_json(d);
    if (j.contains("pads")) a.pad_gates = j["pads"].get<std::vector<std::string>>();
    return a;
}

// ---------------------------------------------------------------------------
// Powerful skew circuits
// ---------------------------------------------------------------------------

inline PowerfulSkewCircuit powerful_from_json(const Json& j) {
    PowerfulSkewCircuit c;
    c.nvars = j.at("nvars").get<int>();
    for (const Json& gj : j.at("gates")) {
        std::string id = gj.at("id").get<std::string>();
        const Json& r = gj.at("rhs");
        if (r.contains("const"))
            c.gates.push_back({id, ConstRhs{r["const"].get<int>()}});
        else if (r.contains("var"))
            c.gates.push_back({id, VarRhs{r["var"].get<std::string>()}});
        else if (r.contains("add")) {
            auto parts = r["add"].get<std::vector<std::string>>();
            if (parts.size() != 2) fail(Code::ParseError, "powerful add takes exactly two gates");
            c.gates.push_back({id, AddRhs{parts[0], parts[1]}});
        } else if (r.contains("pmul")) {
            const Json& pm = r["pmul"];
            PowerMulRhs rhs;
            rhs.coeff = int_from_json(pm.at("coeff"));
            for (const Json& e : pm.at("exps")) rhs.exps.push_back(int_from_json(e));
            rhs.gate = pm.at("gate").get<std::string>();
            c.gates.push_back({id, std::move(rhs)});
        } else {
            fail(Code::ParseError, "unknown powerful right-hand side");
        }
    }
    c.output = j.at("output").get<std::string>();
    require_valid(c);
    return c;
}

inline Json powerful_to_json(const PowerfulSkewCircuit& c) {
    Json gates = Json::array();
    for (const auto& g : c.gates) {
        Json r;
        if (const auto* k = std::get_if<ConstRhs>(&g.rhs))
            r = Json{{"const", k->value}};
        else if (const auto* v = std::get_if<VarRhs>(&g.rhs))
            r = Json{{"var", v->name}};
        else if (const auto* a = std::get_if<AddRhs>(&g.rhs))
            r = Json{{"add", {a->left, a->right}}};
        else {
            const auto& pm = std::get<PowerMulRhs>(g.rhs);
            Json exps = Json::array();
            for (const auto& e : pm.exps) exps.push_back(int_to_json(e));
            r = Json{{"pmul", Json{{"coeff", int_to_json(pm.coeff)},
                                   {"exps", std::move(exps)},
                                   {"gate", pm.gate}}}};
        }
        gates.push_back(Json{{"id", g.id}, {"rhs", std::move(r)}});
    }
    return Json{{"gates", std::move(gates)}, {"output", c.output}, {"nvars", c.nvars}};
}

// ---------------------------------------------------------------------------
// Coset systems
// ---------------------------------------------------------------------------

inline std::vector<std::string> split_word(const std::string& s) {
    std::vector<std::string> w;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) w.push_back(tok);
    return w;
}

inline CosetSystem cosets_from_json(const Json& j) {
    CosetSystem cs;
    cs.index = j.at("index").get<int>();
    if (j.contains("reps"))
        for (const Json& rj : j["reps"]) {
            if (rj.is_string())
                cs.reps.push_back(split_word(rj.get<std::string>()));
            else
                cs.reps.push_back(rj.get<std::vector<std::string>>());
        }
    for (const auto& [letter, perm] : j.at("action").items())
        cs.action[letter] = perm.get<std::vector<int>>();
    if (j.contains("rewrite"))
        for (const auto& [key, word] : j["rewrite"].items()) {
            if (word.is_string())
                cs.rewrite[key] = split_word(word.get<std::string>());
            else
                cs.rewrite[key] = word.get<std::vector<std::string>>();
        }
    if (j.contains("h_letters")) {
        cs.h_letters = j["h_letters"].get<std::vector<std::string>>();
    } else {
        std::unordered_set<std::string> seen;
        for (const auto& [key, word] : cs.rewrite)
            for (const auto& l : word) {
                std::string base = inverse_letter(l) < l ? inverse_letter(l) : l;
                if (seen.insert(base).second) cs.h_letters.push_back(base);
            }
    }
    require_consistent(cs);
    return cs;
}

// ---------------------------------------------------------------------------
// Polynomials: a list of terms [coeff, n_1, ..., n_k]
// ---------------------------------------------------------------------------

inline MultiPoly poly_from_json(const Json& j, RingTag ring = ring_z(), bool has_y = false) {
    if (!j.is_array()) fail(Code::ParseError, "polynomial must be an array of terms");
    int nvars = -1;
    MultiPoly p;
    for (const Json& term : j) {
        if (!term.is_array() || term.empty())
            fail(Code::ParseError, "term must be [coeff, exponents...]");
        int k = static_cast<int>(term.size()) - 1;
        if (nvars == -1) {
            nvars = k;
            p = mp_zero(nvars, ring, has_y);
        } else if (k != nvars) {
            fail(Code::ParseError, "terms have inconsistent arity");
        }
        Exponents e;
        for (int i = 1; i <= k; ++i) {
            Int ev = int_from_json(term[static_cast<size_t>(i)]);
            if (ev < 0 || ev > 0xffffffffLL) fail(Code::ParseError, "exponent out of range");
            e.push_back(ev.convert_to<std::uint32_t>());
        }
        p.insert_term(e, int_from_json(term[0]));
    }
    if (nvars == -1) p = mp_zero(0, ring, has_y);
    return p;
}

inline Json poly_to_json(const MultiPoly& p) {
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms) {  // map order = lexicographic by exponents
        Json term = Json::array();
        term.push_back(int_to_json(c));
        for (auto n : e) term.push_back(n);
        terms.push_back(std::move(term));
    }
    return terms;
}

// ---------------------------------------------------------------------------
// DOT emission: one node per gate, edges child -> parent
// ---------------------------------------------------------------------------

inline std::string circuit_to_dot(const Circuit& c) {
    std::ostringstream os;
    os << "digraph circuit {\n  rankdir=BT;\n";
    for (const auto& g : c.gates) {
        std::string label;
        if (const auto* k = std::get_if<ConstRhs>(&g.rhs))
            label = std::to_string(k->value);
        else if (const auto* v = std::get_if<VarRhs>(&g.rhs))
            label = v->name;
        else if (std::holds_alternative<AddRhs>(g.rhs))
            label = "+";
        else
            label = "*";
        os << "  \"" << g.id << "\" [label=\"" << g.id << ": " << label << "\"";
        if (g.id == c.output) os << " shape=doublecircle";
        os << "];\n";
        if (const auto* a = std::get_if<AddRhs>(&g.rhs)) {
            os << "  \"" << a->left << "\" -> \"" << g.id << "\";\n";
            os << "  \"" << a->right << "\" -> \"" << g.id << "\";\n";
        } else if (const auto* m = std::get_if<MulRhs>(&g.rhs)) {
            os << "  \"" << m->left << "\" -> \"" << g.id << "\";\n";
            os << "  \"" << m->right << "\" -> \"" << g.id << "\";\n";
        }
    }
    os << "}\n";
    return os.str();
}

inline std::string slp_to_dot(const Slp& g) {
    std::ostringstream os;
    os << "digraph slp {\n  rankdir=BT;\n";
    for (const auto& r : g.rules) {
        std::string label;
        if (const auto* t = std::get_if<TerminalRhs>(&r.rhs))
            label = t->letter;
        else
            label = ".";
        os << "  \"" << r.id << "\" [label=\"" << r.id << ": " << label << "\"";
        if (r.id == g.start) os << " shape=doublecircle";
        os << "];\n";
        if (const auto* c = std::get_if<ConcatRhs>(&r.rhs)) {
            os << "  \"" << c->left << "\" -> \"" << r.id << "\";\n";
            os << "  \"" << c->right << "\" -> \"" << r.id << "\";\n";
        }
    }
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Code::IoError, "cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(Code::ParseError, std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail(Code::IoError, "cannot open " + path + " for writing");
    out << text;
}

}  // namespace cwp
