#include <catch2/catch_amalgamated.hpp>

#include "cwp/gen.hpp"
#include "cwp/solvers.hpp"
#include "helpers.hpp"

using namespace cwp;

namespace {

Slp commutator_identity_word() {
    // T12 T23 T12^-1 T23^-1 T13^-1 == 1 in UT_3
    Slp g;
    g.rules = {{"a", TerminalRhs{"T(1,2)"}},    {"b", TerminalRhs{"T(2,3)"}},
               {"ai", TerminalRhs{"T(1,2)^-1"}}, {"bi", TerminalRhs{"T(2,3)^-1"}},
               {"w1", ConcatRhs{"a", "b"}},     {"w2", ConcatRhs{"ai", "bi"}},
               {"w3", ConcatRhs{"w1", "w2"}},   {"c1", ConcatRhs{"b", "a"}},
               {"c2", ConcatRhs{"bi", "ai"}},   {"t13inv", ConcatRhs{"c2", "c1"}},
               {"S", ConcatRhs{"w3", "t13inv"}}};
    g.start = "S";
    return g;
}

}  // namespace

TEST_CASE("solve_ut_exact on the commutator identity word") {
    CHECK(solve_ut_exact(commutator_identity_word(), 3).identity);
}

TEST_CASE("solve_ut_exact reports a witness for big powers") {
    Slp p = power_slp("T(1,2)", Int(1) << 40);
    UtVerdict v = solve_ut_exact(p, 2);
    CHECK(!v.identity);
    REQUIRE(v.witness);
    CHECK(v.witness->i == 1);
    CHECK(v.witness->j == 2);
    CHECK(v.witness->value == Int(1) << 40);
}

TEST_CASE("solve_ut_exact accepts the empty-word sentinel") {
    CHECK(solve_ut_exact(power_slp("T(1,2)", 0), 2).identity);
}

TEST_CASE("solve_ut_exact rejects foreign letters") {
    Slp g;
    g.rules = {{"S", TerminalRhs{"u"}}};
    g.start = "S";
    CHECK_THROWS_AS(solve_ut_exact(g, 3), Error);
}

TEST_CASE("the addition-circuit solver agrees with the exact one") {
    Slp t12;
    t12.rules = {{"S", TerminalRhs{"T(1,2)"}}};
    t12.start = "S";
    UtVerdict v = solve_ut_via_addition_circuits(t12, 2);
    CHECK(!v.identity);

    CHECK(solve_ut_via_addition_circuits(commutator_identity_word(), 3).identity);

    for (int s = 0; s < 120; ++s) {
        int d = 2 + s % 3;
        Slp g = gen_slp_ut(d, 4 + s % 14, 10000 + static_cast<unsigned>(s));
        CHECK(solve_ut_exact(g, d).identity == solve_ut_via_addition_circuits(g, d).identity);
    }
}

TEST_CASE("the two addition circuits of a non-identity instance differ by the witness") {
    Slp t12;
    t12.rules = {{"S", TerminalRhs{"T(1,2)"}}};
    t12.start = "S";
    PartitionedCircuit pc = slp_to_circuit(t12, 2);
    auto [p1, p2] = eliminate_subtraction_partitioned(pc);
    CHECK(eval_int(to_addition_circuit(p1)) == 1);
    CHECK(eval_int(to_addition_circuit(p2)) == 0);
}

TEST_CASE("modular solver params are validated") {
    ModularSolverParams bad;
    bad.prime_bits = 4;
    Slp g = power_slp("T(1,2)", 3);
    CHECK_THROWS_AS(solve_linear_modular(g, make_ut_alphabet(2), bad, 2), Error);
    bad.prime_bits = 31;
    bad.trials = 0;
    CHECK_THROWS_AS(solve_linear_modular(g, make_ut_alphabet(2), bad, 2), Error);
}

TEST_CASE("modular solver always accepts identity instances") {
    ModularSolverParams params{31, 6, 5, 1};
    CHECK(solve_linear_modular(commutator_identity_word(), make_ut_alphabet(3), params, 3).accepts);
    for (int s = 0; s < 20; ++s) {
        Slp g = gen_slp_ut(3, 5 + s % 8, 11000 + static_cast<unsigned>(s));
        Slp idw = slp_concat(g, slp_inverse(g));
        ModularSolverParams p{31, 4, 77 + static_cast<std::uint64_t>(s), 1};
        CHECK(solve_linear_modular(idw, make_ut_alphabet(3), p, 3).accepts);
    }
}

TEST_CASE("modular solver rejects 2^40 with 61-bit primes") {
    ModularSolverParams params{61, 5, 42, 1};
    Slp p = power_slp("T(1,2)", Int(1) << 40);
    ModularVerdict v = solve_linear_modular(p, make_ut_alphabet(2), params, 2);
    CHECK(!v.accepts);
    CHECK(v.rejecting_trial == 0);  // no 61-bit prime divides a power of two
    CHECK(bit_length(v.rejecting_prime) == 61);
    CHECK(v.error_note.rfind("residual", 0) == 0);
}

TEST_CASE("modular solver is deterministic and job-count independent") {
    Slp g = gen_slp_ut(3, 12, 4711);
    ModularSolverParams one{31, 8, 9, 1};
    ModularSolverParams four{31, 8, 9, 4};
    ModularVerdict a = solve_linear_modular(g, make_ut_alphabet(3), one, 3);
    ModularVerdict b = solve_linear_modular(g, make_ut_alphabet(3), four, 3);
    CHECK(a.accepts == b.accepts);
    CHECK(a.rejecting_trial == b.rejecting_trial);
    CHECK(a.rejecting_prime == b.rejecting_prime);
}

TEST_CASE("modular solver over the Ga groups") {
    // x1 - x1 encodes to an identity; accepted in every trial
    Circuit c;
    c.gates = {{"x", VarRhs{"x1"}},
               {"m1", ConstRhs{-1}},
               {"x2", VarRhs{"x1"}},
               {"mx", MulRhs{"m1", "x2"}},
               {"S", AddRhs{"x", "mx"}}};
    c.output = "S";
    size_t n = c.gates.size();
    auto enc = skew_to_group_slp(c, ExponentSchedule::paper(1, static_cast<long long>(n)));
    ModularSolverParams params{31, 4, 123, 1};
    CHECK(solve_linear_modular(enc.slp, make_ga_int_alphabet(2), params).accepts);
    CHECK(solve_linear_modular(enc.slp, make_ga_sqrt2_alphabet(), params).accepts);

    // x1 + 1 is nowhere zero on the schedule; rejected with near certainty
    Circuit nz;
    nz.gates = {{"x", VarRhs{"x1"}}, {"one", ConstRhs{1}}, {"S", AddRhs{"x", "one"}}};
    nz.output = "S";
    auto encnz = skew_to_group_slp(nz, ExponentSchedule::test({3}));
    ModularVerdict v = solve_linear_modular(encnz.slp, make_ga_int_alphabet(2), params);
    CHECK(!v.accepts);
}

TEST_CASE("prime sampling produces primes of the requested size") {
    Rng rng(55);
    for (int s = 0; s < 10; ++s) {
        Int p = sample_prime(rng, 31);
        CHECK(bit_length(p) == 31);
        Rng check(1);
        CHECK(is_probable_prime(p, check));
    }
}
