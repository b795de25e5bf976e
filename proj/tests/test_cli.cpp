#include <doctest.h>

#include "nambu/checks.hpp"
#include "nambu/report.hpp"
#include "nambu/specfile.hpp"

using namespace nambu;

TEST_CASE("structure spec parsing") {
    const std::string text = R"({
        "version": 1,
        "structure": {
            "n": 3, "r": 3,
            "tensor": { "1,2,3": "x1^2 + 1/2" },
            "box": { "lo": [-1, -1, -1], "hi": [1, 1, 1] }
        }
    })";
    SpecFile spec = parse_spec_text(text);
    REQUIRE(spec.structure.has_value());
    CHECK(spec.structure->n() == 3);
    CHECK(spec.structure->order() == 3);
    CHECK(spec.structure->tensor().coeff(MultiIndex({1, 2, 3})).poly() ==
          parse_poly("x1^2 + 1/2", 3));
    CHECK(spec.structure->box().lo[0] == -1.0);
}

TEST_CASE("spec parsing rejects bad input with positions or paths") {
    CHECK_THROWS_AS(parse_spec_text("{ not json"), ParseError);

    // repeated multi-index
    const std::string repeated = R"({"version":1,"structure":{"n":3,"r":3,"tensor":{"1,1,3":"1"}}})";
    try {
        parse_spec_text(repeated);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("repeated index") != std::string::npos);
    }

    // unknown keys are rejected
    const std::string unknown = R"({"version":1,"structure":{"n":3,"r":3,"tensor":{"1,2,3":"1"},"extra":5}})";
    try {
        parse_spec_text(unknown);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
        CHECK(std::string(e.what()).find("/structure/extra") != std::string::npos);
    }

    // index out of range
    const std::string range = R"({"version":1,"structure":{"n":3,"r":3,"tensor":{"1,2,4":"1"}}})";
    CHECK_THROWS_AS(parse_spec_text(range), ParseError);

    // version mismatch
    const std::string version = R"({"version":2,"structure":{"n":3,"r":3,"tensor":{"1,2,3":"1"}}})";
    CHECK_THROWS_AS(parse_spec_text(version), ParseError);

    // polynomial syntax error inside a coefficient
    const std::string badpoly = R"({"version":1,"structure":{"n":3,"r":3,"tensor":{"1,2,3":"x1 + * 2"}}})";
    CHECK_THROWS_AS(parse_spec_text(badpoly), ParseError);
}

TEST_CASE("gallery references with parameters") {
    SpecFile sc = parse_spec_text(R"({"version":1,"gallery":{"name":"scaled","n":3,"r":3,"h":"x1"}})");
    REQUIRE(sc.structure.has_value());
    CHECK(sc.gallery_name == "scaled");
    CHECK(sc.structure->tensor().coeff(MultiIndex({1, 2, 3})).poly() == parse_poly("x1", 3));

    SpecFile l1 = parse_spec_text(R"({"version":1,"gallery":{"name":"l1","N":4,"I":[1,2,3]}})");
    REQUIRE(l1.structure.has_value());
    CHECK(l1.structure->restriction_rank() == 3);

    SpecFile census = parse_spec_text(R"({"version":1,"gallery":{"name":"heisenberg-full"}})");
    REQUIRE(census.structure.has_value());

    CHECK_THROWS_AS(parse_spec_text(R"({"version":1,"gallery":{"name":"nope"}})"), ParseError);
}

TEST_CASE("tower spec parsing and link counting") {
    SpecFile spec = parse_spec(std::string(NAMBU_SPEC_DIR) + "/tower-projective.json");
    REQUIRE(spec.tower.has_value());
    CHECK(spec.tower->depth() == 3);
    CHECK(spec.tower->kind() == TowerKind::Projective);
    CHECK(check_projective_compat(*spec.tower).passed());
}

TEST_CASE("expectations parse and restrict to pass/fail") {
    SpecFile spec = parse_spec_text(
        R"({"version":1,"gallery":{"name":"l1","N":6,"I":[1,2,3,4,5,6]},"expect":{"filippov":"fail"}})");
    CHECK(spec.expectations.at("filippov") == "fail");
    CHECK_THROWS_AS(
        parse_spec_text(
            R"({"version":1,"gallery":{"name":"canonical","n":3,"r":3},"expect":{"x":"maybe"}})"),
        ParseError);
}

TEST_CASE("canonical emission round-trips") {
    SpecFile spec = parse_spec(std::string(NAMBU_SPEC_DIR) + "/canonical-3.json");
    std::string emitted = spec.emit();
    SpecFile again = parse_spec_text(emitted);
    CHECK(again.emit() == emitted);
    REQUIRE(again.structure.has_value());
    CHECK((again.structure->tensor() - spec.structure->tensor()).is_zero());

    // a partial structure keeps its restriction through the round trip
    SpecFile l1 = parse_spec_text(R"({"version":1,"gallery":{"name":"l1","N":4,"I":[1,2,3]}})");
    SpecFile l1rt = parse_spec_text(l1.emit());
    CHECK(l1rt.structure->restriction_rank() == 3);
    CHECK(l1rt.emit() == l1.emit());

    // towers round-trip too
    SpecFile tower = parse_spec(std::string(NAMBU_SPEC_DIR) + "/tower-direct.json");
    SpecFile towerrt = parse_spec_text(tower.emit());
    CHECK(towerrt.emit() == tower.emit());
    CHECK(check_direct_compat(*towerrt.tower).passed());
}

TEST_CASE("report lines are deterministic and carry witnesses") {
    CheckReport rep;
    rep.name = "demo.check";
    rep.property = "demonstration";
    rep.verdict = Verdict::Fail;
    rep.mode = "exact";
    rep.cases = 3;
    rep.residual = "x1^2";
    rep.seed = 42;
    rep.witness = Witness{"f=(x1) g=(x2)", {0.5, -0.25}, "demo"};
    rep.elapsed_ms = 123.0;
    std::string line = rep.to_line();
    CHECK(line.find("demo.check") != std::string::npos);
    CHECK(line.find("witness=") != std::string::npos);
    CHECK(line.find("ms=") == std::string::npos);  // timing only when requested
    CHECK(rep.to_line(true).find("ms=") != std::string::npos);
    CHECK(rep.to_line() == rep.to_line());
}
