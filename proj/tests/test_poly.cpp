#include <catch2/catch_amalgamated.hpp>

#include "cwp/kronecker.hpp"
#include "cwp/tripoly.hpp"
#include "helpers.hpp"

using namespace cwp;

namespace {

MultiPoly from_terms(int nvars, std::vector<std::pair<std::vector<std::uint32_t>, long long>> ts,
                     RingTag ring = ring_z(), bool has_y = false) {
    MultiPoly p = mp_zero(nvars, ring, has_y);
    for (auto& [e, c] : ts) p.insert_term(e, c);
    return p;
}

}  // namespace

TEST_CASE("kronecker_map encodes exponent digits") {
    // x1 + x2^2 with base 3: z + z^6
    MultiPoly p = from_terms(2, {{{1, 0}, 1}, {{0, 2}, 1}});
    UniPoly u = kronecker_map(p, 3);
    CHECK(u.terms.size() == 2);
    CHECK(u.terms.at(1) == 1);
    CHECK(u.terms.at(6) == 1);

    CHECK(kronecker_map(mp_zero(2), 3).is_zero());

    MultiPoly c5 = from_terms(2, {{{0, 0}, 5}});
    UniPoly u5 = kronecker_map(c5, 3);
    CHECK(u5.terms.at(0) == 5);

    CHECK_THROWS_AS(kronecker_map(from_terms(1, {{{4}, 1}}), 3), Error);  // exponent 4 >= base 3
}

TEST_CASE("kronecker_unmap inverts the map") {
    MultiPoly p = from_terms(2, {{{1, 0}, 1}, {{0, 2}, 1}});
    CHECK(kronecker_unmap(kronecker_map(p, 3), 3, 2) == p);
    CHECK(kronecker_unmap(up_zero(), 3, 4).is_zero());

    Rng rng(41);
    for (int s = 0; s < 100; ++s) {
        MultiPoly q = testing::random_poly(rng, 3, 4, 6, 9);
        CHECK(kronecker_unmap(kronecker_map(q, 5), 5, 3) == q);
    }
}

TEST_CASE("kronecker substitution is a ring homomorphism within the degree box") {
    Rng rng(43);
    for (int s = 0; s < 50; ++s) {
        MultiPoly a = testing::random_poly(rng, 2, 3, 4, 9);
        MultiPoly b = testing::random_poly(rng, 2, 3, 4, 9);
        Int d = 16;  // big enough for the product of two degree-3 polys
        CHECK(kronecker_map(mp_add(a, b), d) == up_add(kronecker_map(a, d), kronecker_map(b, d)));
        CHECK(kronecker_map(mp_mul(a, b), d) == up_mul(kronecker_map(a, d), kronecker_map(b, d)));
    }
}

TEST_CASE("uni backend") {
    UniPoly a = up_zero();
    a.insert_term(1, 1);
    a.insert_term(0, 1);  // z + 1
    UniPoly sq = uni_mul_many({a, a});
    CHECK(sq.terms.at(2) == 1);
    CHECK(sq.terms.at(1) == 2);
    CHECK(sq.terms.at(0) == 1);

    CHECK(uni_mul_many({a}) == a);

    UniPoly z3 = up_zero();
    z3.insert_term(3, 1);
    UniPoly zm1 = up_zero();
    zm1.insert_term(1, 1);
    zm1.insert_term(0, -1);  // z - 1
    auto [q, r] = uni_divrem(z3, zm1);
    CHECK(q.terms.at(2) == 1);
    CHECK(q.terms.at(1) == 1);
    CHECK(q.terms.at(0) == 1);
    CHECK(r.terms.at(0) == 1);
    CHECK(r.terms.size() == 1);

    UniPoly notmonic = up_zero();
    notmonic.insert_term(1, 2);
    CHECK_THROWS_AS(uni_divrem(z3, notmonic), Error);
    CHECK_THROWS_AS(uni_divrem(z3, up_zero()), Error);
}

TEST_CASE("iterated_multiply follows the naive product") {
    // (x1+1)(x1-1) = x1^2 - 1
    MultiPoly xp1 = from_terms(1, {{{1}, 1}, {{0}, 1}});
    MultiPoly xm1 = from_terms(1, {{{1}, 1}, {{0}, -1}});
    MultiPoly prod = iterated_multiply({xp1, xm1});
    CHECK(prod == from_terms(1, {{{2}, 1}, {{0}, -1}}));

    Rng rng7(7);
    MultiPoly single = testing::random_poly(rng7, 2, 3, 4, 5);
    CHECK(iterated_multiply({single}) == single);

    // x1 * x2 * x1 x2 = x1^2 x2^2
    MultiPoly x1 = from_terms(2, {{{1, 0}, 1}});
    MultiPoly x2 = from_terms(2, {{{0, 1}, 1}});
    MultiPoly x1x2 = from_terms(2, {{{1, 1}, 1}});
    CHECK(iterated_multiply({x1, x2, x1x2}) == from_terms(2, {{{2, 2}, 1}}));
}

TEST_CASE("iterated_multiply matches the naive oracle on random inputs") {
    Rng rng(47);
    for (int s = 0; s < 60; ++s) {
        int k = 1 + static_cast<int>(rng.below(4));
        int factors = 2 + static_cast<int>(rng.below(5));
        std::vector<MultiPoly> ps;
        for (int f = 0; f < factors; ++f) ps.push_back(testing::random_poly(rng, k, 6, 4, 9));
        CHECK(iterated_multiply(ps) == testing::naive_product(ps));
    }
    // and over F_7
    for (int s = 0; s < 20; ++s) {
        std::vector<MultiPoly> ps;
        for (int f = 0; f < 3; ++f) ps.push_back(testing::random_poly(rng, 2, 5, 4, 9, ring_fp(7)));
        CHECK(iterated_multiply(ps) == testing::naive_product(ps));
    }
}

TEST_CASE("ring tags must match") {
    Rng r1(1), r2(2);
    MultiPoly a = testing::random_poly(r1, 2, 2, 3, 5, ring_z());
    MultiPoly b = testing::random_poly(r2, 2, 2, 3, 5, ring_fp(7));
    CHECK_THROWS_AS(mp_mul(a, b), Error);
    CHECK_THROWS_AS(iterated_multiply({a, b}), Error);
}

TEST_CASE("divrem_multivar frozen example") {
    // s = y^2, t = y - x1  ->  q = y + x1, r = x1^2
    MultiPoly s = from_terms(2, {{{0, 2}, 1}}, ring_z(), true);
    MultiPoly t = from_terms(2, {{{0, 1}, 1}, {{1, 0}, -1}}, ring_z(), true);
    auto [q, r] = divrem_multivar(s, t);
    CHECK(q == from_terms(2, {{{0, 1}, 1}, {{1, 0}, 1}}, ring_z(), true));
    CHECK(r == from_terms(2, {{{2, 0}, 1}}, ring_z(), true));
    CHECK(mp_add(mp_mul(q, t), r) == s);
}

TEST_CASE("divrem_multivar of a polynomial by itself") {
    MultiPoly t = from_terms(2, {{{0, 2}, 1}, {{1, 0}, 3}, {{0, 0}, -2}}, ring_z(), true);
    auto [q, r] = divrem_multivar(t, t);
    CHECK(q == from_terms(2, {{{0, 0}, 1}}, ring_z(), true));
    CHECK(r.is_zero());
}

TEST_CASE("divrem_multivar rejects non-monic divisors") {
    MultiPoly s = from_terms(2, {{{0, 2}, 1}}, ring_z(), true);
    MultiPoly t = from_terms(2, {{{1, 1}, 1}, {{0, 0}, 1}}, ring_z(), true);  // x1 y + 1
    CHECK_THROWS_AS(divrem_multivar(s, t), Error);
    CHECK_THROWS_AS(divrem_multivar(s, mp_zero(2, ring_z(), true)), Error);
}

namespace {

// random polynomial monic in y: 1*y^m plus lower y-degree noise
MultiPoly random_monic_in_y(Rng& rng, int xs, int max_deg, int terms) {
    int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_deg)));
    MultiPoly t = mp_zero(xs + 1, ring_z(), true);
    Exponents lead(static_cast<size_t>(xs + 1), 0);
    lead.back() = static_cast<std::uint32_t>(m);
    t.insert_term(lead, 1);
    for (int i = 0; i < terms; ++i) {
        Exponents e;
        for (int v = 0; v < xs; ++v)
            e.push_back(static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(max_deg) + 1)));
        e.push_back(static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(m))));
        t.insert_term(e, rng.range(-9, 9));
    }
    return t;
}

}  // namespace

TEST_CASE("divrem recomposition on random monic instances") {
    Rng rng(53);
    for (int s = 0; s < 80; ++s) {
        int xs = 1 + static_cast<int>(rng.below(3));
        MultiPoly sp = testing::random_poly(rng, xs + 1, 5, 8, 9, ring_z(), true);
        MultiPoly t = random_monic_in_y(rng, xs, 4, 4);
        auto [q, r] = divrem_multivar(sp, t);
        CHECK(mp_add(mp_mul(q, t), r) == sp);
        if (!r.is_zero()) CHECK(r.deg_y() < t.deg_y());

        // degree-bound check from the construction: with d a strict degree
        // bound on the inputs, q and r live in the d^2 box
        Int d = 1;
        for (int j = 0; j < sp.nvars; ++j) {
            d = std::max(d, Int(sp.deg_var(j)) + 1);
            d = std::max(d, Int(t.deg_var(j)) + 1);
        }
        for (int j = 0; j < sp.nvars; ++j) {
            CHECK(Int(q.deg_var(j)) < d * d);
            CHECK(Int(r.deg_var(j)) < d * d);
        }
    }
    // F_7 variant shares the code path
    for (int s = 0; s < 20; ++s) {
        MultiPoly sp = testing::random_poly(rng, 3, 4, 7, 9, ring_fp(7), true);
        MultiPoly t = random_monic_in_y(rng, 2, 3, 3);
        MultiPoly tm = mp_zero(3, ring_fp(7), true);
        for (const auto& [e, c] : t.terms) tm.insert_term(e, c);
        auto [q, r] = divrem_multivar(sp, tm);
        CHECK(mp_add(mp_mul(q, tm), r) == sp);
    }
}

TEST_CASE("triangular_product_expansion of a single factor") {
    Rng rng(59);
    // single factor
    TriPolyMatrix m = TriPolyMatrix::zero(3, 2, ring_z());
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) m.at(i, j) = testing::random_poly(rng, 2, 1, 2, 3);
    CHECK(triangular_product_expansion({m}) == m);
}

TEST_CASE("triangular_product_expansion of diagonal matrices") {
    Rng rng(61);
    std::vector<TriPolyMatrix> ms;
    for (int t = 0; t < 4; ++t) {
        TriPolyMatrix m = TriPolyMatrix::zero(2, 1, ring_z());
        for (int i = 0; i < 2; ++i) m.at(i, i) = testing::random_poly(rng, 1, 2, 2, 4);
        ms.push_back(m);
    }
    TriPolyMatrix prod = triangular_product_expansion(ms);
    TriPolyMatrix seq = testing::sequential_tri_product(ms);
    CHECK(prod == seq);
    CHECK(prod.at(0, 1).is_zero());
}

TEST_CASE("triangular_product_expansion at n=20, d=3 with quadratic entries") {
    Rng rng(65);
    std::vector<TriPolyMatrix> ms;
    for (int t = 0; t < 20; ++t) {
        TriPolyMatrix m = TriPolyMatrix::zero(3, 2, ring_z());
        for (int i = 0; i < 3; ++i) m.at(i, i) = testing::random_poly(rng, 2, 2, 2, 2);
        if (rng.chance(0.5))
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j)
                    m.at(i, j) = testing::random_poly(rng, 2, 2, 2, 2);
        ms.push_back(m);
    }
    CHECK(triangular_product_expansion(ms) == testing::sequential_tri_product(ms));
}

TEST_CASE("triangular_product_expansion equals the sequential product") {
    Rng rng(67);
    for (int s = 0; s < 12; ++s) {
        int n = 3 + static_cast<int>(rng.below(18));
        int d = 2 + static_cast<int>(rng.below(3));
        RingTag ring = s % 2 ? ring_fp(7) : ring_z();
        std::vector<TriPolyMatrix> ms;
        for (int t = 0; t < n; ++t) {
            TriPolyMatrix m = TriPolyMatrix::zero(d, 2, ring);
            for (int i = 0; i < d; ++i) m.at(i, i) = testing::random_poly(rng, 2, 1, 2, 2, ring);
            if (rng.chance(0.5))  // diagonal-heavy mix keeps the expansion sparse
                for (int i = 0; i < d; ++i)
                    for (int j = i + 1; j < d; ++j)
                        m.at(i, j) = testing::random_poly(rng, 2, 1, 1, 2, ring);
            ms.push_back(m);
        }
        CHECK(triangular_product_expansion(ms) == testing::sequential_tri_product(ms));
    }
}

TEST_CASE("triangular_product_expansion reduces entries mod q") {
    Rng rng(71);
    // q = y^2 - 2 over x-free polynomials: arithmetic in Z[sqrt2] disguised
    MultiPoly q = from_terms(1, {{{2}, 1}, {{0}, -2}}, ring_z(), true);
    std::vector<TriPolyMatrix> ms;
    for (int t = 0; t < 5; ++t) {
        TriPolyMatrix m = TriPolyMatrix::zero(2, 1, ring_z());
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j) {
                MultiPoly p = testing::random_poly(rng, 1, 1, 2, 3);
                p.has_y = true;
                m.at(i, j) = p;
            }
        ms.push_back(m);
    }
    TriPolyMatrix red = triangular_product_expansion(ms, q);
    TriPolyMatrix seq = testing::sequential_tri_product(ms);
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) {
            MultiPoly want = seq.at(i, j).is_zero() ? seq.at(i, j)
                                                    : divrem_multivar(seq.at(i, j), q).second;
            CHECK(red.at(i, j) == want);
        }
}

TEST_CASE("non-triangular inputs are rejected") {
    TriPolyMatrix m = TriPolyMatrix::zero(2, 1, ring_z());
    m.at(1, 0) = from_terms(1, {{{0}, 1}});
    CHECK_THROWS_AS(triangular_product_expansion({m}), Error);
}
