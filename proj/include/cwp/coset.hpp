#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cwp/slp.hpp"

namespace cwp {

// ---------------------------------------------------------------------------
// Explicit data for a finite-index normal subgroup H of G: coset
// representatives g_1 = 1, ..., g_n, the right-multiplication action of every
// G-letter on cosets, and rewriting words w_{a,i,j} over H-generators
// representing g_i a g_j^{-1} (defined exactly when coset i * a = coset j).
// The action of an inverse letter is the inverse permutation and its
// rewriting words are the reversed-inverted base words, so both may be
// omitted from the input.
// ---------------------------------------------------------------------------

struct CosetSystem {
    int index = 1;
    std::vector<std::vector<std::string>> reps;                // optional; reps[0] must be empty
    std::map<std::string, std::vector<int>> action;            // letter -> 1-based permutation
    std::map<std::string, std::vector<std::string>> rewrite;   // "a|i|j" -> word over H-letters
    std::vector<std::string> h_letters;                        // base letters of H

    static std::string rw_key(const std::string& a, int i, int j) {
        return a + "|" + std::to_string(i) + "|" + std::to_string(j);
    }
};

inline std::optional<std::string> coset_system_problem(const CosetSystem& cs) {
    if (cs.index < 1) return "index must be >= 1";
    if (!cs.reps.empty()) {
        if (static_cast<int>(cs.reps.size()) != cs.index) return "wrong number of representatives";
        if (!cs.reps.front().empty()) return "the first representative must be the empty word";
    }
    for (const auto& [a, perm] : cs.action) {
        if (static_cast<int>(perm.size()) != cs.index)
            return "action of " + a + " has wrong arity";
        std::vector<bool> hit(static_cast<size_t>(cs.index), false);
        for (int t : perm) {
            if (t < 1 || t > cs.index) return "action of " + a + " leaves the coset range";
            if (hit[static_cast<size_t>(t - 1)]) return "action of " + a + " is not a permutation";
            hit[static_cast<size_t>(t - 1)] = true;
        }
    }
    return std::nullopt;
}

inline void require_consistent(const CosetSystem& cs) {
    if (auto p = coset_system_problem(cs)) fail(Code::InconsistentCosetSystem, *p);
}

namespace detail {

// permutation of a letter, deriving inverses on demand
inline std::vector<int> letter_action(const CosetSystem& cs, const std::string& a) {
    auto it = cs.action.find(a);
    if (it != cs.action.end()) return it->second;
    std::string partner = inverse_letter(a);
    it = cs.action.find(partner);
    if (it == cs.action.end()) fail(Code::UnknownLetter, "no coset action for letter " + a);
    std::vector<int> inv(it->second.size());
    for (size_t i = 0; i < it->second.size(); ++i)
        inv[static_cast<size_t>(it->second[i] - 1)] = static_cast<int>(i) + 1;
    return inv;
}

inline std::vector<std::string> invert_word(const std::vector<std::string>& w) {
    std::vector<std::string> r;
    r.reserve(w.size());
    for (size_t i = w.size(); i-- > 0;) r.push_back(inverse_letter(w[i]));
    return r;
}

// w_{a,i,j}, deriving the inverse-letter words from the base table:
// g_i a^-1 g_j^-1 = (g_j a g_i^-1)^-1.
inline std::vector<std::string> rewrite_word(const CosetSystem& cs, const std::string& a, int i,
                                             int j) {
    auto it = cs.rewrite.find(CosetSystem::rw_key(a, i, j));
    if (it != cs.rewrite.end()) return it->second;
    std::string partner = inverse_letter(a);
    it = cs.rewrite.find(CosetSystem::rw_key(partner, j, i));
    if (it == cs.rewrite.end())
        fail(Code::InconsistentCosetSystem,
             "no rewriting word for letter " + a + " from coset " + std::to_string(i));
    return invert_word(it->second);
}

}  // namespace detail

struct IndexReduction {
    bool in_subgroup = false;
    int coset = 1;               // coset of val(g); 1 means H itself
    std::optional<Slp> h_slp;    // set iff in_subgroup
};

// The finite-index reduction: fold the quotient action over the SLP to find
// the coset of val(g); if it is the subgroup itself, build the rewritten SLP
// over H-letters with variables (rule, entry coset) and terminal words from
// the rewrite table. val(output) = 1 in H iff val(g) = 1 in G.
inline IndexReduction reduce_finite_index(const Slp& g, const CosetSystem& cs) {
    require_valid(g);
    require_consistent(cs);
    ResolvedSlp r = resolve(g);
    const int n = cs.index;

    std::vector<std::vector<int>> letter_perm;
    letter_perm.reserve(r.letters.size());
    for (const auto& l : r.letters) letter_perm.push_back(detail::letter_action(cs, l));

    // permutation per rule: sigma_A(i) = coset of g_i * val(A)
    std::vector<std::vector<int>> sigma(r.rules.size());
    for (size_t k = 0; k < r.rules.size(); ++k) {
        const auto& rule = r.rules[k];
        if (rule.terminal) {
            sigma[k] = letter_perm[static_cast<size_t>(rule.a)];
        } else {
            sigma[k].resize(static_cast<size_t>(n));
            const auto& sb = sigma[static_cast<size_t>(rule.a)];
            const auto& sc = sigma[static_cast<size_t>(rule.b)];
            for (int i = 0; i < n; ++i)
                sigma[k][static_cast<size_t>(i)] =
                    sc[static_cast<size_t>(sb[static_cast<size_t>(i)] - 1)];
        }
    }

    IndexReduction out;
    out.coset = sigma[static_cast<size_t>(r.start)][0];
    out.in_subgroup = out.coset == 1;
    if (!out.in_subgroup) return out;

    // discover needed (rule, coset) pairs from the start
    std::vector<std::vector<int>> needed(r.rules.size(), std::vector<int>());
    std::vector<std::vector<bool>> seen(r.rules.size(), std::vector<bool>(static_cast<size_t>(n), false));
    std::vector<std::pair<int, int>> stack{{r.start, 1}};
    seen[static_cast<size_t>(r.start)][0] = true;
    while (!stack.empty()) {
        auto [k, i] = stack.back();
        stack.pop_back();
        needed[static_cast<size_t>(k)].push_back(i);
        const auto& rule = r.rules[static_cast<size_t>(k)];
        if (!rule.terminal) {
            int mid = sigma[static_cast<size_t>(rule.a)][static_cast<size_t>(i - 1)];
            if (!seen[static_cast<size_t>(rule.a)][static_cast<size_t>(i - 1)]) {
                seen[static_cast<size_t>(rule.a)][static_cast<size_t>(i - 1)] = true;
                stack.push_back({rule.a, i});
            }
            if (!seen[static_cast<size_t>(rule.b)][static_cast<size_t>(mid - 1)]) {
                seen[static_cast<size_t>(rule.b)][static_cast<size_t>(mid - 1)] = true;
                stack.push_back({rule.b, mid});
            }
        }
    }

    // assemble the H-SLP bottom-up (rules in original order keep the
    // earlier-reference invariant; every coset instance of a rule is emitted)
    Slp h;
    IdGen ids;
    std::map<std::pair<int, int>, std::string> var;
    std::map<std::string, std::string> letter_rule;
    auto letter = [&](const std::string& l) {
        auto it = letter_rule.find(l);
        if (it != letter_rule.end()) return it->second;
        std::string id = ids.fresh("lt." + l);
        h.rules.push_back({id, TerminalRhs{l}});
        letter_rule[l] = id;
        return id;
    };
    auto word_rule = [&](const std::string& hint, const std::vector<std::string>& w) {
        std::string acc;
        if (w.empty()) {
            // the empty rewriting word: a cancelling pair over some H-letter
            if (cs.h_letters.empty())
                fail(Code::InconsistentCosetSystem,
                     "empty rewriting word but no H-letters to cancel with");
            const std::string& l = cs.h_letters.front();
            std::string id = ids.fresh(hint);
            h.rules.push_back({id, ConcatRhs{letter(l), letter(inverse_letter(l))}});
            return id;
        }
        acc = letter(w[0]);
        for (size_t t = 1; t < w.size(); ++t) {
            std::string next = ids.fresh(t + 1 == w.size() ? hint : hint + "#" + std::to_string(t));
            h.rules.push_back({next, ConcatRhs{acc, letter(w[t])}});
            acc = next;
        }
        if (w.size() == 1) {
            // promote the bare letter to a named rule via a cancelling detour;
            // simpler: reuse the letter rule directly
            return acc;
        }
        return acc;
    };

    for (size_t k = 0; k < r.rules.size(); ++k) {
        const auto& rule = r.rules[k];
        for (int i : needed[k]) {
            int j = sigma[k][static_cast<size_t>(i - 1)];
            std::string hint = "q" + std::to_string(i) + "." + g.rules[k].id;
            std::string id;
            if (rule.terminal) {
                id = word_rule(hint, detail::rewrite_word(cs, r.letters[static_cast<size_t>(rule.a)], i, j));
            } else {
                int mid = sigma[static_cast<size_t>(rule.a)][static_cast<size_t>(i - 1)];
                id = ids.fresh(hint);
                h.rules.push_back({id, ConcatRhs{var.at({rule.a, i}), var.at({rule.b, mid})}});
            }
            var[{static_cast<int>(k), i}] = id;
        }
    }
    h.start = var.at({r.start, 1});
    out.h_slp = std::move(h);
    return out;
}

}  // namespace cwp
