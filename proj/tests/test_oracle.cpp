#include "doctest.h"

#include "oracle.hpp"

using namespace ultrext;

namespace {

Cell cell_of(std::size_t arity, std::vector<LinearAtom> ineqs, std::vector<CongruenceAtom> congs) {
    Cell c;
    c.arity = arity;
    c.inequalities = std::move(ineqs);
    c.congruences = std::move(congs);
    return c;
}

}  // namespace

TEST_CASE("truncation oracle basics") {
    auto tail = DefinableSet::symbolic(1, {cell_of(1, {{{1}, -3}}, {})});
    CHECK(oracle_forall_u(UPoint::limit(0, 1), tail) == TriState::True);
    auto evens = DefinableSet::symbolic(1, {cell_of(1, {}, {{{1}, 0, 2}})});
    CHECK(oracle_forall_u(UPoint::limit(1, 2), evens) == TriState::False);
    auto mult4 = DefinableSet::symbolic(1, {cell_of(1, {}, {{{1}, 0, 4}})});
    CHECK(oracle_forall_u(UPoint::limit(0, 2), mult4) == TriState::Unstable);
}

TEST_CASE("finite extension oracle matches the engine on a handcrafted model") {
    auto u = std::make_shared<FiniteUniverse>(std::vector<std::string>{"a", "b", "c"});
    Model model(u);
    std::vector<Int> succ = {1, 2, 0};
    model.add_function("s", DefOp::finite(u, 1, succ));
    std::vector<bool> le(9, false);
    for (int x = 0; x < 3; ++x)
        for (int y = x; y < 3; ++y) le[static_cast<std::size_t>(x * 3 + y)] = true;
    model.add_relation("le", DefinableSet::finite(u, 2, le));
    for (ExtMode mode : {ExtMode::Tilde, ExtMode::Star}) {
        auto tables = oracle_finite_extension(model, mode);
        CHECK(tables.functions.at("s") == succ);
        CHECK(tables.relations.at("le") == le);
    }
}

TEST_CASE("finite hom oracle sees the obvious endomorphism") {
    auto u = std::make_shared<FiniteUniverse>(std::vector<std::string>{"a", "b"});
    Model m(u);
    std::vector<Int> flip = {1, 0};
    m.add_function("f", DefOp::finite(u, 1, flip));
    auto id = DefOp::finite(u, 1, std::vector<Int>{0, 1});
    CHECK(oracle_finite_hom(id, m, m));
    // The constant map is not a homomorphism for the flip operation.
    auto const0 = DefOp::finite(u, 1, std::vector<Int>{0, 0});
    CHECK_FALSE(oracle_finite_hom(const0, m, m));
}

TEST_CASE("star witness box finds progression witnesses") {
    auto le = DefinableSet::symbolic(2, {cell_of(2, {{{-1, 1}, 0}}, {})});
    std::vector<UPoint> args = {UPoint::limit(0, 1), UPoint::limit(0, 1)};
    CHECK(oracle_star_witness(le, args, 0));
    CHECK(oracle_star_witness(le, args, 25));
    std::vector<UPoint> pinned = {UPoint::limit(0, 1), UPoint::principal(3)};
    CHECK_FALSE(oracle_star_witness(le, pinned, 10));
}

TEST_CASE("set serialization is canonical and readable") {
    auto s = DefinableSet::symbolic(
        2, {cell_of(2, {{{2, -1}, 3}}, {{{1, 1}, 1, 4}})});
    CHECK(set_to_string(s) == "{x,y : 2*x - y + 3 >= 0, x + y = 1 mod 4}");
    CHECK(set_to_string(DefinableSet::symbolic_empty(1)) == "{x : false}");
    CHECK(set_to_string(DefinableSet::symbolic_full(1)) == "{x : true}");
}

TEST_CASE("shrinking keeps the failure") {
    auto s = DefinableSet::symbolic(
        1, {cell_of(1, {{{3}, -7}, {{1}, 2}}, {}), cell_of(1, {{{2}, -5}}, {})});
    // "Failure": the set is nonempty.
    auto fails = [](const DefinableSet& x) { return !is_empty(x); };
    auto shrunk = shrink_set(s, fails);
    CHECK(!is_empty(shrunk));
    CHECK(shrunk.cells().size() == 1);
}

TEST_CASE("every registered suite passes at smoke scale") {
    for (const auto& name : suite_names()) {
        auto report = run_suite(name, 25, 12345);
        INFO(name);
        for (const auto& f : report.failures) {
            INFO(f);
        }
        CHECK(report.passed());
    }
}
