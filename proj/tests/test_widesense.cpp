#include "doctest.h"

#include "widesense.hpp"

using namespace ultrext;

namespace {

UniversePtr universe2() {
    return std::make_shared<FiniteUniverse>(std::vector<std::string>{"a", "b"});
}

UniversePtr universe3() {
    return std::make_shared<FiniteUniverse>(std::vector<std::string>{"a", "b", "c"});
}

}  // namespace

TEST_CASE("carriers enumerate and round-trip indices") {
    auto u = universe2();
    FunctionCarrier funcs(u, 2);
    CHECK(funcs.size() == 16);
    for (std::size_t i = 0; i < funcs.size(); ++i) CHECK(funcs.index_of(funcs.element(i)) == i);
    RelationCarrier rels(u, 2);
    CHECK(rels.size() == 16);
    for (std::size_t i = 0; i < rels.size(); ++i) CHECK(rels.index_of(rels.element(i)) == i);
    RelationCarrier rels3(universe3(), 2);
    CHECK(rels3.size() == 512);
    CHECK_THROWS_AS(FunctionCarrier(universe3(), 2), std::invalid_argument);
}

TEST_CASE("lift then project is the identity") {
    std::vector<std::size_t> injection = {1, 3, 4};  // S of size 3 inside T of size 6
    for (std::size_t e = 0; e < 3; ++e) {
        FiniteUltrafilter u{3, e};
        LiftedUF lifted = lift(u, injection, 6);
        CHECK(lifted.element == injection[e]);
        CHECK(lifted.concentrated_on(lifted.concentration));
        FiniteUltrafilter back = project(lifted, injection);
        CHECK(back.element == e);
        CHECK(back.carrier_size == 3);
    }
}

TEST_CASE("project requires concentration") {
    std::vector<std::size_t> injection = {0, 2};
    LiftedUF outside{5, 3, {0, 2}};
    CHECK_THROWS_AS(project(outside, injection), std::invalid_argument);
}

TEST_CASE("project of a lift equals the original for every subset of a small carrier") {
    for (std::size_t t_size = 1; t_size <= 6; ++t_size) {
        for (std::size_t mask = 1; mask < (std::size_t(1) << t_size); ++mask) {
            std::vector<std::size_t> injection;
            for (std::size_t e = 0; e < t_size; ++e)
                if (mask & (std::size_t(1) << e)) injection.push_back(e);
            for (std::size_t s = 0; s < injection.size(); ++s) {
                FiniteUltrafilter u{injection.size(), s};
                auto back = project(lift(u, injection, t_size), injection);
                CHECK(back.element == s);
            }
        }
    }
}

TEST_CASE("i of a principal function point is principal at the extension") {
    auto u = universe2();
    FunctionCarrier carrier(u, 1);
    for (std::size_t f = 0; f < carrier.size(); ++f) {
        FiniteUltrafilter point{carrier.size(), f};
        LiftedUF image = i_map(point, carrier);
        // On a finite universe the extension of a map is the map itself.
        CHECK(image.element == f);
        CHECK(image.concentrated_on(image.concentration));
        CHECK(limit_of(image, carrier).table() == carrier.element(f).table());
    }
}

TEST_CASE("I of a principal relation point is principal at the closure") {
    auto u = universe2();
    RelationCarrier carrier(u, 2);
    for (std::size_t r = 0; r < carrier.size(); ++r) {
        FiniteUltrafilter point{carrier.size(), r};
        LiftedUF image = I_map(point, carrier);
        CHECK(image.element == r);  // the closure of R over a finite universe is R
        CHECK(limit_of(image, carrier).table() == carrier.element(r).table());
    }
}

TEST_CASE("i is injective over the function carrier of a two-element universe") {
    auto u = universe2();
    FunctionCarrier carrier(u, 1);
    std::vector<std::size_t> images;
    for (std::size_t f = 0; f < carrier.size(); ++f)
        images.push_back(i_map(FiniteUltrafilter{carrier.size(), f}, carrier).element);
    std::sort(images.begin(), images.end());
    CHECK(std::adjacent_find(images.begin(), images.end()) == images.end());
}

TEST_CASE("limit of a principal carrier point is its generator") {
    auto u = universe2();
    FunctionCarrier carrier(u, 1);
    FiniteUltrafilter point{carrier.size(), 2};
    CHECK(limit_of(point, carrier).table() == carrier.element(2).table());
}

TEST_CASE("symbolic tags: limits evaluate through the expected oracles") {
    Cell below;
    below.arity = 2;
    below.inequalities.push_back(LinearAtom{{-1, 1}, 0});
    auto rel = GenRelation::family(DefinableSet::symbolic(2, {below}), UPoint::limit(0, 1));
    auto lim_i = limit_of(i_map(rel));
    auto lim_cap = limit_of(I_map(rel));
    std::vector<UPoint> args = {UPoint::principal(7)};
    CHECK(lim_i(args) == in_tilde(args, rel));
    CHECK(lim_cap(args) == E_of(rel)(args));
    auto fun = GenFunction::family(monus_op(), UPoint::limit(0, 1));
    auto lim_f = limit_of(i_map(fun));
    std::vector<UPoint> fargs = {UPoint::principal(5)};
    CHECK(lim_f(fargs) == UPoint::principal(0));
}

TEST_CASE("modal via ext at tiny universes") {
    auto u1 = std::make_shared<FiniteUniverse>(std::vector<std::string>{"a"});
    std::vector<bool> t1 = {true};
    CHECK(modal_via_ext_check(DefinableSet::finite(u1, 1, t1), u1));

    auto u = universe2();
    std::vector<bool> diag = {true, false, false, true};
    CHECK(modal_via_ext_check(DefinableSet::finite(u, 2, diag), u));

    auto u3 = universe3();
    RelationCarrier carrier(u3, 2);
    for (std::size_t r = 0; r < carrier.size(); r += 23) {
        CHECK(modal_via_ext_check(carrier.element(r), u3));
    }
}
