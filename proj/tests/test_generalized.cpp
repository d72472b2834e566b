#include "doctest.h"

#include "generalized.hpp"

using namespace ultrext;

namespace {

Cell cell_of(std::size_t arity, std::vector<LinearAtom> ineqs, std::vector<CongruenceAtom> congs) {
    Cell c;
    c.arity = arity;
    c.inequalities = std::move(ineqs);
    c.congruences = std::move(congs);
    return c;
}

DefinableSet le_set() { return DefinableSet::symbolic(2, {cell_of(2, {{{-1, 1}, 0}}, {})}); }

// {(x, m) : x <= m}
DefinableSet below_family() { return DefinableSet::symbolic(2, {cell_of(2, {{{-1, 1}, 0}}, {})}); }
// {(x, m) : x >= m}
DefinableSet above_family() { return DefinableSet::symbolic(2, {cell_of(2, {{{1, -1}, 0}}, {})}); }

GenFunction monus_family() { return GenFunction::family(monus_op(), UPoint::limit(0, 1)); }
GenFunction shift_family() { return GenFunction::family(affine_op({1, 1}, 0), UPoint::limit(0, 1)); }

bool member1(const DefinableSet& s, const Int& x) {
    Int pt[1] = {x};
    return membership(std::span<const Int>(pt, 1), s);
}

}  // namespace

TEST_CASE("application through a constant-in-parameter family is the identity") {
    // f_m(x) = x for every m
    auto fam = GenFunction::family(
        DefOp::symbolic(2, {AffineBranch{Cell::full(2), {1, 0}, 0}}), UPoint::limit(0, 1));
    for (const auto& u : {UPoint::principal(4), UPoint::limit(1, 3)}) {
        CHECK(app_tilde(std::vector<UPoint>{u}, fam) == u);
    }
}

TEST_CASE("shift family escapes to a limit point") {
    auto image = app_tilde(std::vector<UPoint>{UPoint::principal(5)}, shift_family());
    CHECK(image == UPoint::limit(0, 1));
}

TEST_CASE("monus family saturates at principal points") {
    auto image = app_tilde(std::vector<UPoint>{UPoint::principal(5)}, monus_family());
    CHECK(image == UPoint::principal(0));
}

TEST_CASE("membership through parameter families") {
    auto below = GenRelation::family(below_family(), UPoint::limit(0, 1));
    CHECK(in_tilde(std::vector<UPoint>{UPoint::principal(7)}, below));
    auto above = GenRelation::family(above_family(), UPoint::limit(0, 1));
    CHECK_FALSE(in_tilde(std::vector<UPoint>{UPoint::principal(7)}, above));
}

TEST_CASE("principal interpretation reduces to the tilde extension") {
    auto r = GenRelation::principal(le_set());
    std::vector<UPoint> args = {UPoint::principal(3), UPoint::limit(0, 1)};
    CHECK(in_tilde(args, r) == ext_rel_tilde(le_set(), args));
}

TEST_CASE("core relations of the families") {
    auto below = GenRelation::family(below_family(), UPoint::limit(0, 1));
    auto core_below = core_relation(below);
    for (Int x = 0; x <= 30; ++x) CHECK(member1(core_below, x));  // eventually x <= m

    auto above = GenRelation::family(above_family(), UPoint::limit(0, 1));
    auto core_above = core_relation(above);
    CHECK(is_empty(core_above));

    auto principal = GenRelation::principal(le_set());
    CHECK(sets_equal(core_relation(principal), le_set()));
}

TEST_CASE("satisfaction with principal everything is ordinary model checking") {
    GenModel model;
    model.functions.emplace("plus", GenFunction::principal(affine_op({1, 1}, 0)));
    model.relations.emplace("le", GenRelation::principal(le_set()));
    // le(x, plus(x, y))
    Formula phi = Formula::atom(
        "le", {Term::variable("x"),
               Term::apply("plus", {Term::variable("x"), Term::variable("y")})});
    Valuation v;
    v.emplace("x", UPoint::principal(3));
    v.emplace("y", UPoint::principal(4));
    CHECK(satisfies(model, phi, v));
}

TEST_CASE("satisfaction via families matches the membership examples") {
    GenModel model;
    model.relations.emplace("R", GenRelation::family(below_family(), UPoint::limit(0, 1)));
    Formula phi = Formula::atom("R", {Term::variable("x")});
    Valuation v;
    v.emplace("x", UPoint::principal(7));
    CHECK(satisfies(model, phi, v));

    GenModel fmodel;
    fmodel.functions.emplace("F", GenFunction::family(monus_op(), UPoint::limit(0, 1)));
    Formula eq = Formula::equal(Term::apply("F", {Term::variable("x")}), Term::variable("y"));
    Valuation fv;
    fv.emplace("x", UPoint::principal(5));
    fv.emplace("y", UPoint::principal(0));
    CHECK(satisfies(fmodel, eq, fv));
}

TEST_CASE("classical quantifiers need the finite backend or witnesses") {
    GenModel model;
    model.relations.emplace("R", GenRelation::principal(le_set()));
    Formula phi = Formula::forall("x", Formula::atom("R", {Term::variable("x"), Term::variable("x")}));
    CHECK_THROWS_AS(satisfies(model, phi, {}), UnsupportedQuantifier);
    std::vector<UPoint> witnesses = {UPoint::principal(0), UPoint::principal(1), UPoint::limit(0, 1)};
    CHECK(satisfies(model, phi, {}, witnesses));
}

TEST_CASE("finite backend quantifiers range over the universe") {
    auto u = std::make_shared<FiniteUniverse>(std::vector<std::string>{"a", "b"});
    GenModel model;
    model.universe = u;
    std::vector<bool> table = {true, false, false, true};  // diagonal
    model.relations.emplace("D", GenRelation::principal(DefinableSet::finite(u, 2, table)));
    Formula all_diag =
        Formula::forall("x", Formula::atom("D", {Term::variable("x"), Term::variable("x")}));
    CHECK(satisfies(model, all_diag, {}));
    Formula all_pairs = Formula::forall(
        "x", Formula::forall("y", Formula::atom("D", {Term::variable("x"), Term::variable("y")})));
    CHECK_FALSE(satisfies(model, all_pairs, {}));
}

TEST_CASE("pseudo-principality verdicts") {
    CHECK(is_pseudo_principal(GenFunction::principal(affine_op({1, 1}, 0))));
    CHECK(is_pseudo_principal(monus_family()));
    CHECK_FALSE(is_pseudo_principal(shift_family()));
}

TEST_CASE("monus family cross-validated at small principal arguments") {
    // For every principal a, the family value monus(a, m) is eventually 0.
    for (Int a = 0; a <= 20; ++a) {
        auto image = app_tilde(std::vector<UPoint>{UPoint::principal(a)}, monus_family());
        CHECK(image == UPoint::principal(0));
    }
}

TEST_CASE("collapse of an already principal model is unchanged extensionally") {
    GenModel model;
    model.functions.emplace("plus", GenFunction::principal(affine_op({1, 1}, 0)));
    model.relations.emplace("le", GenRelation::principal(le_set()));
    GenModel collapsed = collapse_principal(model);
    std::vector<UPoint> args = {UPoint::principal(2), UPoint::limit(1, 2)};
    CHECK(app_tilde(args, collapsed.functions.at("plus")) == app_tilde(args, model.functions.at("plus")));
    CHECK(in_tilde(args, collapsed.relations.at("le")) == in_tilde(args, model.relations.at("le")));
}

TEST_CASE("collapse of the monus family is the constant zero operation") {
    GenModel model;
    model.functions.emplace("F", monus_family());
    GenModel collapsed = collapse_principal(model);
    const auto& f = collapsed.functions.at("F");
    REQUIRE(f.is_principal());
    for (Int a = 0; a <= 10; ++a) {
        Int pt[1] = {a};
        CHECK(f.op().apply(std::span<const Int>(pt, 1)) == 0);
    }
}

TEST_CASE("collapse rejects the shift family") {
    GenModel model;
    model.functions.emplace("F", shift_family());
    CHECK_THROWS_AS(collapse_principal(model), NotPseudoPrincipal);
}

TEST_CASE("e and E collapse operators on relations") {
    auto below = GenRelation::family(below_family(), UPoint::limit(0, 1));
    auto e_oracle = e_of(below);
    auto big_e_oracle = E_of(below);
    std::vector<UPoint> args = {UPoint::limit(0, 1)};
    // core is the full set: both extensions hold at the tail point
    CHECK(e_oracle(args));
    CHECK(big_e_oracle(args));
    auto above = GenRelation::family(above_family(), UPoint::limit(0, 1));
    CHECK_FALSE(e_of(above)(args));
    CHECK_FALSE(E_of(above)(args));
}

TEST_CASE("equality translate through app works at comparable precision") {
    GenModel model;
    model.functions.emplace("F", shift_family());
    Formula eq = Formula::equal(Term::apply("F", {Term::variable("x")}), Term::variable("y"));
    Valuation v;
    v.emplace("x", UPoint::principal(5));
    v.emplace("y", UPoint::limit(0, 1));
    CHECK(satisfies(model, eq, v));  // both sides are the coarse tail point
}
