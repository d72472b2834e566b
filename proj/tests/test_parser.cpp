#include "doctest.h"

#include "engine.hpp"
#include "parser.hpp"

using namespace ultrext;

TEST_CASE("parses a relation definition") {
    auto script = parse_script("R := {x,y : x <= y}\n");
    REQUIRE(script.size() == 1);
    CHECK(script[0].kind == ast::Statement::Kind::DefineSet);
    CHECK(script[0].name == "R");
    CHECK(script[0].set.kind == ast::SetExpr::Kind::Compr);
    CHECK(script[0].set.compr.vars == std::vector<std::string>{"x", "y"});
}

TEST_CASE("parses query statements") {
    auto script = parse_script("ext~ R (pt(3), lim(inf))");
    REQUIRE(script.size() == 1);
    CHECK(script[0].kind == ast::Statement::Kind::RunQuery);
    CHECK(script[0].query.kind == ast::Query::Kind::ExtTilde);
    CHECK(script[0].query.args.size() == 2);
}

TEST_CASE("rejects residues at or above the modulus") {
    CHECK_THROWS_AS(parse_script("u := lim(3 mod 2)"), ParseError);
    try {
        parse_script("u := lim(3 mod 2)");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() > 1);
    }
}

TEST_CASE("reports positions with expectations") {
    try {
        parse_script("R := {x,y x <= y}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(!e.expected().empty());
    }
}

TEST_CASE("statements split on newlines and semicolons") {
    auto script = parse_script("A := {x : x >= 1}; B := {x : x >= 2}\nC := A & B");
    CHECK(script.size() == 3);
}

TEST_CASE("models and genmodels parse") {
    auto script = parse_script(
        "M := model { F := op(x, y) -> x + y; R := {x,y : x <= y} }\n"
        "G := genmodel { F := family m -> (x + m) at lim(inf); R := principal {x,y : x <= y} }\n");
    REQUIRE(script.size() == 2);
    CHECK(script[0].model.size() == 2);
    CHECK(script[1].genmodel.size() == 2);
    CHECK(script[1].genmodel[0].kind == ast::GenEntry::Kind::FamilyOp);
    CHECK(script[1].genmodel[0].param == "m");
}

TEST_CASE("sat queries with bindings and witnesses") {
    auto script = parse_script(
        "sat G |= R(x, y) & !(F(x) = y) [x := pt(3), y := lim(inf)] witnesses (pt(0), pt(1))");
    REQUIRE(script.size() == 1);
    const auto& q = script[0].query;
    CHECK(q.kind == ast::Query::Kind::Sat);
    CHECK(q.bindings.size() == 2);
    REQUIRE(q.witnesses.has_value());
    CHECK(q.witnesses->size() == 2);
}

TEST_CASE("asserts parse with every expectation shape") {
    auto script = parse_script(
        "assert ext~ R (pt(1), pt(2)) == true\n"
        "assert ext* R (lim(inf), pt(2)) == false\n"
        "assert extmap F (pt(2)) == pt(5)\n"
        "assert ext~ R (lim(0 mod 2), lim(0 mod 2)) == error(4)\n");
    REQUIRE(script.size() == 4);
    CHECK(script[0].expected.kind == ast::Expected::Kind::True);
    CHECK(script[1].expected.kind == ast::Expected::Kind::False);
    CHECK(script[2].expected.kind == ast::Expected::Kind::Point);
    CHECK(script[3].expected.kind == ast::Expected::Kind::Error);
    REQUIRE(script[3].expected.error_modulus.has_value());
    CHECK(*script[3].expected.error_modulus == 4);
}

TEST_CASE("quantifier prefix queries parse") {
    auto script = parse_script("forall x in lim(inf) . forall y in pt(3) . (x <= y)");
    REQUIRE(script.size() == 1);
    CHECK(script[0].query.kind == ast::Query::Kind::Quant);
    CHECK(script[0].query.binders.size() == 2);
}

TEST_CASE("comments and blank lines are ignored") {
    auto script = parse_script("# heading\n\nR := {x : true}  # trailing\n\n");
    CHECK(script.size() == 1);
}

TEST_CASE("print and reparse is a fixed point on handwritten statements") {
    const char* text =
        "universe {a, b, c}\n"
        "R := {x,y : 2*x - y + 3 >= 0, x + y = 1 mod 4}\n"
        "S := ~R | {x,y : x < y} & {x,y : true}\n"
        "F := op(x, m) -> if x >= m then x - m else 0\n"
        "u := lim(1 mod 4)\n"
        "M := model { F := op(x, y) -> x + y; R := {x,y : x <= y} }\n"
        "G := genmodel { F := family m -> (if x >= m then x - m else 0) at lim(inf); R := "
        "principal {x,y : x <= y} }\n"
        "ext~ R (pt(3), lim(inf))\n"
        "assert pseudo? G.F == true\n"
        "homcheck h : M -> M mode=tilde\n"
        "check modal-via-ext R\n"
        "core G.R\n"
        "lim i G.R (pt(7))\n"
        "sat G |= R(x, x) [x := pt(2)]\n"
        ":precision 4\n";
    auto once = print_script(parse_script(text));
    auto twice = print_script(parse_script(once));
    CHECK(once == twice);
}

TEST_CASE("round trip holds on 500 generated scripts") {
    for (int t = 0; t < 500; ++t) {
        auto script = generate_random_script(9000 + static_cast<std::uint64_t>(t), 4);
        std::string once = print_script(script);
        ast::Script reparsed;
        try {
            reparsed = parse_script(once);
        } catch (const ParseError& e) {
            CAPTURE(once);
            FAIL_CHECK("printed script failed to parse: ", e.what());
            continue;
        }
        std::string twice = print_script(reparsed);
        CHECK(once == twice);
    }
}

TEST_CASE("finite enumerations parse") {
    auto script = parse_script("universe {a, b}\nR := {(a,b), (b,a)}");
    REQUIRE(script.size() == 2);
    CHECK(script[1].set.kind == ast::SetExpr::Kind::FiniteEnum);
    CHECK(script[1].set.tuples.size() == 2);
}
