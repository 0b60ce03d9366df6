#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "cwp/circuit.hpp"  // ValidationError, IdGen
#include "cwp/error.hpp"
#include "cwp/ints.hpp"
#include "cwp/matrix.hpp"  // inverse_letter

namespace cwp {

// ---------------------------------------------------------------------------
// Straight-line programs: a grammar producing exactly one word. Rules are in
// declaration order and may only reference earlier variables; after loading,
// right-hand sides are a single terminal letter or a concatenation of two
// variables.
// ---------------------------------------------------------------------------

struct TerminalRhs {
    std::string letter;
    bool operator==(const TerminalRhs&) const = default;
};
struct ConcatRhs {
    std::string left, right;
    bool operator==(const ConcatRhs&) const = default;
};

using SlpRhs = std::variant<TerminalRhs, ConcatRhs>;

struct SlpRule {
    std::string id;
    SlpRhs rhs;
    bool operator==(const SlpRule&) const = default;
};

struct Slp {
    std::vector<SlpRule> rules;
    std::string start;
    bool operator==(const Slp&) const = default;
};

inline std::optional<ValidationError> validate_slp(const Slp& g) {
    std::unordered_set<std::string> seen;
    seen.reserve(g.rules.size() * 2);
    for (const auto& r : g.rules) {
        if (seen.count(r.id))
            return ValidationError{Code::DuplicateId, r.id, "variable declared twice"};
        if (const auto* c = std::get_if<ConcatRhs>(&r.rhs)) {
            if (!seen.count(c->left))
                return ValidationError{Code::ForwardReference, r.id,
                                       "references " + c->left + " which is not declared earlier"};
            if (!seen.count(c->right))
                return ValidationError{Code::ForwardReference, r.id,
                                       "references " + c->right + " which is not declared earlier"};
        }
        seen.insert(r.id);
    }
    if (g.rules.empty() || !seen.count(g.start))
        return ValidationError{Code::MissingStart, g.start, "start variable is not declared"};
    return std::nullopt;
}

inline void require_valid(const Slp& g) {
    if (auto e = validate_slp(g)) fail(e->code, "variable '" + e->gate + "': " + e->message);
}

struct ResolvedSlp {
    // kind: terminal (letter index into letters) or concat (child indices)
    struct Rule {
        bool terminal;
        int a, b;  // terminal: a = letter index; concat: children
    };
    std::vector<Rule> rules;
    std::vector<std::string> letters;
    int start = -1;
};

inline ResolvedSlp resolve(const Slp& g) {
    require_valid(g);
    ResolvedSlp r;
    std::unordered_map<std::string, int> pos, letter_pos;
    r.rules.reserve(g.rules.size());
    for (const auto& rule : g.rules) {
        ResolvedSlp::Rule rr{};
        if (const auto* t = std::get_if<TerminalRhs>(&rule.rhs)) {
            rr.terminal = true;
            auto [it, fresh] = letter_pos.emplace(t->letter, static_cast<int>(r.letters.size()));
            if (fresh) r.letters.push_back(t->letter);
            rr.a = it->second;
            rr.b = -1;
        } else {
            const auto& c = std::get<ConcatRhs>(rule.rhs);
            rr.terminal = false;
            rr.a = pos.at(c.left);
            rr.b = pos.at(c.right);
        }
        pos[rule.id] = static_cast<int>(r.rules.size());
        r.rules.push_back(rr);
    }
    r.start = pos.at(g.start);
    return r;
}

// |val(G)|, bottom-up; the word itself can be exponentially long.
inline Int word_length(const Slp& g) {
    ResolvedSlp r = resolve(g);
    std::vector<Int> len(r.rules.size());
    for (size_t i = 0; i < r.rules.size(); ++i)
        len[i] = r.rules[i].terminal
                     ? Int(1)
                     : len[static_cast<size_t>(r.rules[i].a)] + len[static_cast<size_t>(r.rules[i].b)];
    return len[static_cast<size_t>(r.start)];
}

struct Expanded {
    std::optional<std::vector<std::string>> word;  // set iff length <= max_len
    Int length;
};

// Explicit word val(G) when its length fits the cap.
inline Expanded expand(const Slp& g, const Int& max_len) {
    Expanded out;
    out.length = word_length(g);
    if (out.length > max_len) return out;
    ResolvedSlp r = resolve(g);
    std::vector<std::string> word;
    word.reserve(out.length.convert_to<size_t>());
    std::vector<int> stack{r.start};
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        const auto& rule = r.rules[static_cast<size_t>(i)];
        if (rule.terminal) {
            word.push_back(r.letters[static_cast<size_t>(rule.a)]);
        } else {
            stack.push_back(rule.b);  // right below left so left expands first
            stack.push_back(rule.a);
        }
    }
    out.word = std::move(word);
    return out;
}

// SLP for letter^e with O(log e) rules via iterated squaring. e = 0 yields the
// cancelling pair letter * letter^-1 (the grammar itself has no empty word).
inline Slp power_slp(const std::string& letter, const Int& e) {
    if (e < 0) fail(Code::BadParams, "exponent must be >= 0");
    Slp g;
    if (e == 0) {
        g.rules.push_back({"p0", TerminalRhs{letter}});
        g.rules.push_back({"p1", TerminalRhs{inverse_letter(letter)}});
        g.rules.push_back({"S", ConcatRhs{"p0", "p1"}});
        g.start = "S";
        return g;
    }
    g.rules.push_back({"p0", TerminalRhs{letter}});
    unsigned bits = bit_length(e);
    for (unsigned k = 1; k < bits; ++k)
        g.rules.push_back({"p" + std::to_string(k),
                           ConcatRhs{"p" + std::to_string(k - 1), "p" + std::to_string(k - 1)}});
    std::string acc;
    for (unsigned k = 0; k < bits; ++k) {
        if (!boost::multiprecision::bit_test(e, k)) continue;
        std::string part = "p" + std::to_string(k);
        if (acc.empty()) {
            acc = part;
        } else {
            std::string next = "s" + std::to_string(k);
            g.rules.push_back({next, ConcatRhs{part, acc}});  // higher bits to the left
            acc = next;
        }
    }
    g.start = acc;
    return g;
}

// w^-1: reverse every concatenation and invert every letter.
inline Slp slp_inverse(const Slp& g) {
    require_valid(g);
    Slp r;
    r.rules.reserve(g.rules.size());
    for (const auto& rule : g.rules) {
        if (const auto* t = std::get_if<TerminalRhs>(&rule.rhs))
            r.rules.push_back({rule.id, TerminalRhs{inverse_letter(t->letter)}});
        else {
            const auto& c = std::get<ConcatRhs>(rule.rhs);
            r.rules.push_back({rule.id, ConcatRhs{c.right, c.left}});
        }
    }
    r.start = g.start;
    return r;
}

// Concatenation a.b with the rules of b renamed away from those of a.
inline Slp slp_concat(const Slp& a, const Slp& b) {
    require_valid(a);
    require_valid(b);
    Slp r = a;
    IdGen ids;
    for (const auto& rule : a.rules) ids.reserve(rule.id);
    std::unordered_map<std::string, std::string> rename;
    for (const auto& rule : b.rules) rename[rule.id] = ids.fresh(rule.id);
    for (const auto& rule : b.rules) {
        if (const auto* t = std::get_if<TerminalRhs>(&rule.rhs))
            r.rules.push_back({rename[rule.id], *t});
        else {
            const auto& c = std::get<ConcatRhs>(rule.rhs);
            r.rules.push_back({rename[rule.id], ConcatRhs{rename.at(c.left), rename.at(c.right)}});
        }
    }
    std::string s = ids.fresh("S");
    r.rules.push_back({s, ConcatRhs{a.start, rename.at(b.start)}});
    r.start = s;
    return r;
}

// SLP for an explicit word (length >= 1), as a left-leaning comb.
inline Slp slp_from_word(const std::vector<std::string>& word, const std::string& prefix = "w") {
    if (word.empty()) fail(Code::BadParams, "cannot build an SLP for the empty word");
    Slp g;
    for (size_t i = 0; i < word.size(); ++i)
        g.rules.push_back({prefix + "t" + std::to_string(i), TerminalRhs{word[i]}});
    std::string acc = prefix + "t0";
    for (size_t i = 1; i < word.size(); ++i) {
        std::string next = prefix + "c" + std::to_string(i);
        g.rules.push_back({next, ConcatRhs{acc, prefix + "t" + std::to_string(i)}});
        acc = next;
    }
    g.start = acc;
    return g;
}

}  // namespace cwp
