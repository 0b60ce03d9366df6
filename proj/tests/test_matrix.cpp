#include <catch2/catch_amalgamated.hpp>

#include "cwp/matrix.hpp"
#include "cwp/rng.hpp"
#include "helpers.hpp"

using namespace cwp;

TEST_CASE("ut_generator") {
    UTMatrix t = ut_generator(2, 1, 1);
    CHECK(t.at(0, 0) == 1);
    CHECK(t.at(0, 1) == 1);
    CHECK(t.at(1, 1) == 1);

    UTMatrix ti = ut_generator(3, 2, -1);
    CHECK(ti.at(1, 2) == -1);
    CHECK(ti.at(0, 1) == 0);

    CHECK_THROWS_AS(ut_generator(2, 2, 1), Error);
    CHECK_THROWS_AS(ut_generator(2, 0, 1), Error);
}

TEST_CASE("ut_mul and ut_inv") {
    CHECK(ut_mul(ut_generator(2, 1, 1), ut_generator(2, 1, -1)).is_identity());

    // closed form for the 3x3 inverse, checked by recomposition
    Rng rng(17);
    for (int s = 0; s < 50; ++s) {
        UTMatrix m(3);
        m.at(0, 1) = rng.range(-50, 50);
        m.at(1, 2) = rng.range(-50, 50);
        m.at(0, 2) = rng.range(-50, 50);
        UTMatrix inv = ut_inv(m);
        CHECK(ut_mul(m, inv).is_identity());
        CHECK(ut_mul(inv, m).is_identity());
        CHECK(inv.at(0, 1) == -m.at(0, 1));
        CHECK(inv.at(1, 2) == -m.at(1, 2));
        CHECK(inv.at(0, 2) == m.at(0, 1) * m.at(1, 2) - m.at(0, 2));
    }

    CHECK_THROWS_AS(ut_mul(UTMatrix(2), UTMatrix(3)), Error);
}

TEST_CASE("ut_inv on random dimensions") {
    Rng rng(19);
    for (int s = 0; s < 30; ++s) {
        int d = 1 + static_cast<int>(rng.below(6));
        UTMatrix m(d);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) m.at(i, j) = rng.range(-9, 9);
        CHECK((m * m.inverse()).is_identity());
        CHECK((m.inverse() * m).is_identity());
    }
}

TEST_CASE("commutator basics") {
    UTMatrix id3 = UTMatrix::identity(3);
    UTMatrix m = ut_transvection(3, 1, 2, 4);
    CHECK(commutator(id3, m).is_identity());

    CHECK(commutator(ut_generator(3, 1, 1), ut_generator(3, 2, 1)) == ut_transvection(3, 1, 3, 1));

    UTMatrix a = ut_pow(ut_generator(3, 1, 1), 2);
    UTMatrix b = ut_pow(ut_generator(3, 2, 1), 3);
    CHECK(commutator(a, b) == ut_transvection(3, 1, 3, 6));
}

TEST_CASE("commutator law exhaustive small sweep") {
    for (int d = 3; d <= 4; ++d)
        for (int i = 1; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                for (int k = j + 1; k <= d; ++k)
                    for (int a = -4; a <= 4; ++a)
                        for (int b = -4; b <= 4; ++b) {
                            UTMatrix x = ut_transvection(d, i, j, a);
                            UTMatrix y = ut_transvection(d, j, k, b);
                            CHECK(commutator(x, y) == ut_transvection(d, i, k, Int(a) * b));
                        }
}

TEST_CASE("quad arithmetic") {
    QuadInt one_plus{1, 1};
    QuadInt conj{-1, 1};
    CHECK(one_plus * conj == QuadInt{1, 0});
    CHECK(one_plus.inv() == conj);
    CHECK(one_plus.norm() == -1);
    CHECK((QuadInt{1, 1} * QuadInt{1, 1}) == QuadInt{3, 2});
    CHECK(QuadInt{2, 3}.conj() == QuadInt{2, -3});
    CHECK_THROWS_AS(QuadInt(2).inv(), Error);
    CHECK(QuadInt{5, -2}.str() == "5+-2*sqrt2");
}

TEST_CASE("ga alphabets") {
    auto gi = make_ga_int_alphabet(2);
    CHECK(gi.value_of("g") == RatMatrix::of(2, 0, 0, 1));
    CHECK(gi.value_of("h") == RatMatrix::of(1, 1, 0, 1));
    CHECK(gi.value_of("g^-1") == RatMatrix::of(Rat(1, 2), 0, 0, 1));
    CHECK_THROWS_AS(make_ga_int_alphabet(1), Error);

    auto gs = make_ga_sqrt2_alphabet();
    CHECK(gs.value_of("g").a == QuadInt{1, 1});
    CHECK(gs.value_of("g^-1").a == QuadInt{-1, 1});
    CHECK((gs.value_of("g") * gs.value_of("g^-1")).is_identity());
}

TEST_CASE("quad matrix inverse requires a unit determinant") {
    QuadMatrix m = QuadMatrix::of(QuadInt{1, 1}, QuadInt{4, 2}, QuadInt{0, 0}, QuadInt{1, 0});
    CHECK((m * m.inverse()).is_identity());
    QuadMatrix bad = QuadMatrix::of(QuadInt{2, 0}, QuadInt{0, 0}, QuadInt{0, 0}, QuadInt{1, 0});
    CHECK_THROWS_AS(bad.inverse(), Error);
}

TEST_CASE("M_{s,t} closed form and generators u, v") {
    QuadMatrix u = QuadMatrix::of(QuadInt{1, 0}, QuadInt::sqrt2(), QuadInt{0, 0}, QuadInt{1, 0});
    QuadMatrix v = QuadMatrix::of(QuadInt{1, 0}, QuadInt{2, 0}, QuadInt{0, 0}, QuadInt{1, 0});

    CHECK(testing::m_st(1, 1) == u);
    CHECK(testing::m_st(2, 1) * mat2_pow(testing::m_st(1, 1), -2) == v);

    for (int s = -6; s <= 6; ++s)
        for (int t = -6; t <= 6; ++t) {
            QuadMatrix m = testing::m_st(s, t);
            // top-right entry must be t((1+sqrt2)^s - 1)
            QuadInt expect = (quad_pow(QuadInt{1, 1}, s) - QuadInt::one()) * QuadInt(t);
            CHECK(m.a == QuadInt::one());
            CHECK(m.d == QuadInt::one());
            CHECK(m.c == QuadInt::zero());
            CHECK(m.b == expect);

            // and decompose as v^c1 u^c2 with the proof's exponents
            auto [c1, c2] = testing::proof_c1_c2(s, t);
            CHECK(mat2_pow(v, c1) * mat2_pow(u, c2) == m);
            // equivalently 2 c1 + sqrt2 c2 matches the entry
            CHECK(expect == QuadInt{2 * c1, c2});
        }
}

TEST_CASE("commutator of g and h lands in the u,v lattice") {
    auto gs = make_ga_sqrt2_alphabet();
    QuadMatrix c = commutator(gs.value_of("g"), gs.value_of("h"));
    // [g,h] = g^-1 h^-1 g h = M_{-1,-1}
    CHECK(c == testing::m_st(-1, -1));
    CHECK(c.b == QuadInt{2, -1});  // 2 - sqrt2
}
