#include <catch2/catch_amalgamated.hpp>

#include "cwp/gen.hpp"
#include "cwp/json_io.hpp"
#include "helpers.hpp"

using namespace cwp;

TEST_CASE("circuit json round-trips") {
    for (int s = 0; s < 25; ++s) {
        Circuit c = gen_circuit(4 + s % 12, 2, 13000 + static_cast<unsigned>(s));
        Circuit back = circuit_from_json(circuit_to_json(c));
        CHECK(back == c);
    }
}

TEST_CASE("slp json round-trips") {
    for (int s = 0; s < 25; ++s) {
        Slp g = gen_slp_ut(3, 4 + s % 12, 14000 + static_cast<unsigned>(s));
        Slp back = slp_from_json(slp_to_json(g));
        CHECK(back == g);
    }
}

TEST_CASE("circuit json accepts the documented shapes") {
    Json j = Json::parse(R"json({
      "gates": [
        {"id": "A", "rhs": {"const": 1}},
        {"id": "B", "rhs": {"var": "x1"}},
        {"id": "S", "rhs": {"add": ["A", "B"]}}
      ],
      "output": "S"
    })json");
    Circuit c = circuit_from_json(j);
    CHECK(c.gates.size() == 3);
    CHECK(eval_int(c, {{"x1", 4}}) == 5);
}

TEST_CASE("extended right-hand sides desugar into fresh gates") {
    Json j = Json::parse(R"json({
      "gates": [
        {"id": "B", "rhs": {"const": 1}},
        {"id": "C", "rhs": {"const": 1}},
        {"id": "D", "rhs": {"const": 1}},
        {"id": "E", "rhs": {"const": 1}},
        {"id": "A", "rhs": {"mul": [{"add": ["B", "C"]}, {"add": ["D", "E"]}]}},
        {"id": "S", "rhs": {"add": ["A", "A", "A"]}}
      ],
      "output": "S"
    })json");
    Circuit c = circuit_from_json(j);
    CHECK(!validate(c));
    CHECK(eval_int(c) == 12);  // (1+1)(1+1) summed three times
    // only binary adds and muls remain
    for (const auto& g : c.gates) {
        if (const auto* a = std::get_if<AddRhs>(&g.rhs)) {
            CHECK(!a->left.empty());
            CHECK(!a->right.empty());
        }
    }
}

TEST_CASE("bad circuit json is rejected") {
    CHECK_THROWS_AS(circuit_from_json(Json::parse(R"json({"gates": []})json")), Error);
    CHECK_THROWS_AS(circuit_from_json(Json::parse(
                        R"json({"gates": [{"id":"A","rhs":{"const": 2}}], "output":"A"})json")),
                    Error);
    CHECK_THROWS_AS(circuit_from_json(Json::parse(
                        R"json({"gates": [{"id":"A","rhs":{"mystery": 1}}], "output":"A"})json")),
                    Error);
}

TEST_CASE("slp json with word rules") {
    Json j = Json::parse(R"json({
      "rules": [
        {"id": "A", "terminal": "T(1,2)"},
        {"id": "W", "word": [{"var": "A"}, {"letter": "T(2,3)"}, {"var": "A"}]}
      ],
      "start": "W"
    })json");
    Slp g = slp_from_json(j);
    Expanded e = expand(g, 10);
    REQUIRE(e.word);
    CHECK(*e.word == std::vector<std::string>{"T(1,2)", "T(2,3)", "T(1,2)"});
}

TEST_CASE("powerful circuits round-trip") {
    for (int s = 0; s < 15; ++s) {
        PowerfulSkewCircuit c = gen_powerful(4 + s % 8, 2, 15000 + static_cast<unsigned>(s));
        PowerfulSkewCircuit back = powerful_from_json(powerful_to_json(c));
        CHECK(back == c);
    }
}

TEST_CASE("polynomials round-trip and stay sorted") {
    Rng rng(97);
    for (int s = 0; s < 15; ++s) {
        MultiPoly p = testing::random_poly(rng, 3, 5, 6, 99);
        Json j = poly_to_json(p);
        MultiPoly back = poly_from_json(j);
        CHECK(back == p);
        // terms come out sorted lexicographically by exponent vector
        for (size_t i = 1; i < j.size(); ++i) {
            std::vector<std::uint32_t> prev, cur;
            for (size_t t = 1; t < j[i - 1].size(); ++t) prev.push_back(j[i - 1][t].get<std::uint32_t>());
            for (size_t t = 1; t < j[i].size(); ++t) cur.push_back(j[i][t].get<std::uint32_t>());
            CHECK(prev < cur);
        }
    }
}

TEST_CASE("big integers serialize as strings") {
    Int big = Int(1) << 100;
    Json j = int_to_json(big);
    CHECK(j.is_string());
    CHECK(int_from_json(j) == big);
    CHECK(int_from_json(int_to_json(Int(-42))) == -42);
}

TEST_CASE("partitioned circuits round-trip") {
    Slp g = gen_slp_ut(3, 8, 616);
    PartitionedCircuit pc = slp_to_circuit(g, 3);
    PartitionedCircuit back = partitioned_from_json(partitioned_to_json(pc));
    CHECK(back.circuit == pc.circuit);
    CHECK(back.classes == pc.classes);
}

TEST_CASE("dot emission mentions every gate") {
    Circuit c = gen_circuit(6, 1, 777);
    std::string dot = circuit_to_dot(c);
    for (const auto& g : c.gates) CHECK(dot.find('"' + g.id + '"') != std::string::npos);
    Slp g = gen_slp_ut(3, 5, 778);
    std::string sdot = slp_to_dot(g);
    for (const auto& r : g.rules) CHECK(sdot.find('"' + r.id + '"') != std::string::npos);
}

TEST_CASE("annotated circuits round-trip") {
    Circuit c1 = gen_circuit(6, 0, 881);
    Circuit c2 = gen_circuit(7, 0, 882);
    if (metrics(c1).is_positive && metrics(c2).is_positive) {
        auto [a1, a2] = degree_normalize(c1, c2);
        DegreeAnnotatedCircuit back = annotated_from_json(annotated_to_json(a1));
        CHECK(back.circuit == a1.circuit);
        CHECK(back.degree == a1.degree);
        CHECK(back.pad_gates == a1.pad_gates);
    }
}
