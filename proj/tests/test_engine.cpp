#include "doctest.h"

#include "engine.hpp"

using namespace ultrext;

namespace {

std::vector<ResultRecord> run(const std::string& text, EngineConfig config = {}) {
    Session session(std::move(config));
    return session.run_text(text);
}

std::string field(const ResultRecord& record, const std::string& key) {
    for (const auto& [k, v] : record.fields)
        if (k == key) return v;
    return "";
}

}  // namespace

TEST_CASE("definitions then extension queries") {
    auto records = run(
        "R := {x,y : x <= y}\n"
        "ext~ R (pt(3), lim(inf))\n"
        "ext~ R (lim(inf), pt(3))\n"
        "ext* R (lim(inf), pt(3))\n");
    REQUIRE(records.size() == 4);
    CHECK(field(records[0], "kind") == "definition");
    CHECK(field(records[1], "verdict") == "true");
    CHECK(field(records[2], "verdict") == "false");
    CHECK(field(records[3], "verdict") == "false");
}

TEST_CASE("the equality relation separates the two extensions") {
    auto records = run(
        "Eq := {x,y : x = y}\n"
        "assert ext* Eq (lim(inf), lim(inf)) == true\n"
        "assert ext~ Eq (lim(inf), lim(inf)) == false\n");
    CHECK(field(records[1], "status") == "ok");
    CHECK(field(records[2], "status") == "ok");
}

TEST_CASE("extended map query yields points") {
    auto records = run(
        "plus := op(x, y) -> x + y\n"
        "extmap plus (pt(2), pt(3))\n"
        "extmap plus (lim(1 mod 4), lim(2 mod 4))\n");
    CHECK(field(records[1], "value") == "pt(5)");
    CHECK(field(records[2], "value") == "lim(3 mod 4)");
}

TEST_CASE("precision failures are first-class records") {
    auto records = run(
        "A := {x : x = 0 mod 4}\n"
        "ext~ A (lim(0 mod 2))\n"
        "assert ext~ A (lim(0 mod 2)) == error(4)\n");
    CHECK(field(records[1], "error") == "precision");
    CHECK(field(records[1], "required_modulus") == "4");
    CHECK(field(records[2], "status") == "ok");
}

TEST_CASE("point definitions, refinement sugar and precision directive") {
    auto records = run(
        ":precision 2\n"
        "u := lim(inf)\n"
        "A := {x : x = 0 mod 2}\n"
        "assert ext~ A (u) == true\n");
    CHECK(field(records[3], "status") == "ok");
}

TEST_CASE("generalized model queries") {
    auto records = run(
        "G := genmodel { F := family m -> (if x >= m then x - m else 0) at lim(inf); R := family "
        "m -> {x : x <= m} at lim(inf) }\n"
        "assert pseudo? G.F == true\n"
        "core G.R\n"
        "assert e G.R (pt(7)) == true\n"
        "assert E G.R (pt(7)) == true\n"
        "assert lim i G.R (pt(7)) == true\n"
        "assert lim I G.R (pt(7)) == true\n"
        "sat G |= R(x) [x := pt(7)]\n"
        "sat G |= F(x) = y [x := pt(5), y := pt(0)]\n");
    CHECK(field(records[1], "status") == "ok");
    CHECK(field(records[2], "value") == "{x : true}");
    for (std::size_t i = 3; i <= 6; ++i) CHECK(field(records[i], "status") == "ok");
    CHECK(field(records[7], "verdict") == "true");
    CHECK(field(records[8], "verdict") == "true");
}

TEST_CASE("shift family is not pseudo-principal") {
    auto records = run(
        "G := genmodel { F := family m -> (x + m) at lim(inf) }\n"
        "assert pseudo? G.F == false\n"
        "extmap F (pt(0))\n");
    CHECK(field(records[1], "status") == "ok");
    CHECK(field(records[2], "kind") == "error");  // F is inside G, not a top-level op
}

TEST_CASE("homcheck records carry the sampling label") {
    auto records = run(
        "M := model { R := {x,y : x <= y} }\n"
        "h := op(x) -> x + 1\n"
        "homcheck h : M -> M mode=tilde\n");
    CHECK(field(records[2], "verdict") == "pass");
    CHECK(field(records[2], "precision") == "consistent-with-sample");
}

TEST_CASE("finite backend scripts") {
    auto records = run(
        "universe {a, b}\n"
        "R := {(a,a), (b,b)}\n"
        "assert ext~ R (pt(a), pt(a)) == true\n"
        "assert ext~ R (pt(a), pt(b)) == false\n"
        "assert check modal-via-ext R == true\n");
    for (std::size_t i = 2; i <= 4; ++i) CHECK(field(records[i], "status") == "ok");
}

TEST_CASE("quantifier prefix queries evaluate with the display order") {
    auto records = run(
        "assert forall x in pt(3) . forall y in lim(inf) . (x <= y) == true\n"
        "assert forall x in lim(inf) . forall y in lim(inf) . (x <= y) == true\n"
        "assert forall y in lim(inf) . forall x in lim(inf) . (x <= y) == false\n");
    for (const auto& record : records) CHECK(field(record, "status") == "ok");
}

TEST_CASE("failed asserts flag the session") {
    EngineConfig config;
    Session session(config);
    auto records = session.run_text(
        "R := {x,y : x <= y}\n"
        "assert ext~ R (pt(3), lim(inf)) == false\n");
    CHECK(records[1].is_failure);
    CHECK(session.failure_count() == 1);
}

TEST_CASE("evaluation errors do not abort the session") {
    auto records = run(
        "ext~ Missing (pt(1))\n"
        "R := {x : true}\n"
        "assert ext~ R (pt(1)) == true\n");
    CHECK(field(records[0], "kind") == "error");
    CHECK(field(records[2], "status") == "ok");
}

TEST_CASE("empty script gives no records") { CHECK(run("").empty()); }

TEST_CASE("json rendering is stable and single-line") {
    EngineConfig config;
    config.json = true;
    Session session(config);
    auto records = session.run_text("R := {x,y : x <= y}\next~ R (pt(1), pt(2))\n");
    std::string line = session.render(records[1]);
    CHECK(line ==
          "{\"kind\":\"query\",\"query\":\"ext~ R (pt(1), pt(2))\",\"verdict\":true,"
          "\"precision\":\"exact\"}");
}

TEST_CASE("parallel mode freezes the environment after definitions") {
    EngineConfig config;
    config.parallel = true;
    Session session(config);
    auto records = session.run_text(
        "R := {x,y : x <= y}\n"
        "ext~ R (pt(1), pt(2))\n"
        "S := {x : true}\n");
    CHECK(field(records[1], "verdict") == "true");
    CHECK(field(records[2], "kind") == "error");
}

TEST_CASE("text rendering quotes only fields with spaces") {
    EngineConfig config;
    Session session(config);
    auto records = session.run_text("R := {x,y : x <= y}\next~ R (pt(1), pt(2))\n");
    CHECK(session.render(records[1]) ==
          "kind=query query=\"ext~ R (pt(1), pt(2))\" verdict=true precision=exact");
}
