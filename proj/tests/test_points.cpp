#include "doctest.h"

#include "points.hpp"

#include <random>

using namespace ultrext;

namespace {

Cell cell_of(std::size_t arity, std::vector<LinearAtom> ineqs, std::vector<CongruenceAtom> congs) {
    Cell c;
    c.arity = arity;
    c.inequalities = std::move(ineqs);
    c.congruences = std::move(congs);
    return c;
}

DefinableSet at_least(const Int& n) { return DefinableSet::symbolic(1, {cell_of(1, {{{1}, -n}}, {})}); }

DefinableSet residue_set(const Int& r, const Int& m) {
    return DefinableSet::symbolic(1, {cell_of(1, {}, {{{1}, r, m}})});
}

DefinableSet singleton(const Int& n) {
    return DefinableSet::symbolic(1, {cell_of(1, {{{1}, -n}, {{-1}, n}}, {})});
}

std::mt19937_64 rng(424242);

Int rand_int(long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    return Int(d(rng));
}

DefinableSet random_unary_set() {
    std::uniform_int_distribution<std::size_t> ncells(1, 3);
    std::uniform_int_distribution<std::size_t> natoms(0, 2);
    const long moduli[4] = {2, 3, 4, 6};
    std::vector<Cell> cells;
    std::size_t n = ncells(rng);
    for (std::size_t i = 0; i < n; ++i) {
        Cell c;
        c.arity = 1;
        for (std::size_t j = natoms(rng); j > 0; --j)
            c.inequalities.push_back(LinearAtom{{rand_int(-5, 5)}, rand_int(-10, 10)});
        if (natoms(rng) > 0) {
            Int m(moduli[static_cast<std::size_t>(rand_int(0, 3).convert_to<long>())]);
            c.congruences.push_back(CongruenceAtom{{rand_int(-3, 3)}, mod_floor(rand_int(0, 11), m), m});
        }
        cells.push_back(std::move(c));
    }
    return DefinableSet::symbolic(1, std::move(cells));
}

// Truncation oracle: stabilized membership along the generating progression.
enum class Stability { True, False, Unstable };

Stability truncation_oracle(const DefinableSet& set, const UPoint& u, int width = 100) {
    auto profile = period_profile(set);
    Int k0 = 0;
    if (profile.threshold > u.residue())
        k0 = ceil_div(profile.threshold - u.residue(), u.modulus());
    bool first = true, value = false;
    for (Int k = k0; k <= k0 + width; ++k) {
        Int x[1] = {u.residue() + u.modulus() * k};
        bool v = membership(std::span<const Int>(x, 1), set);
        if (first) {
            value = v;
            first = false;
        } else if (v != value) {
            return Stability::Unstable;
        }
    }
    return value ? Stability::True : Stability::False;
}

}  // namespace

TEST_CASE("limit membership in a tail set") {
    CHECK(in_ultrafilter(at_least(10), UPoint::limit(0, 1)));
}

TEST_CASE("limit membership by residue") {
    CHECK(in_ultrafilter(residue_set(1, 2), UPoint::limit(1, 2)));
    CHECK_FALSE(in_ultrafilter(residue_set(0, 2), UPoint::limit(1, 2)));
}

TEST_CASE("coarse point on a finer set raises") {
    try {
        in_ultrafilter(residue_set(0, 4), UPoint::limit(0, 2));
        FAIL("expected PrecisionError");
    } catch (const PrecisionError& e) {
        CHECK(e.required_modulus() == 4);
    }
}

TEST_CASE("bounded sets never belong to a tail point") {
    CHECK_FALSE(in_ultrafilter(singleton(5), UPoint::limit(0, 1)));
}

TEST_CASE("principal membership is plain membership") {
    CHECK(in_ultrafilter(at_least(3), UPoint::principal(7)));
    CHECK_FALSE(in_ultrafilter(at_least(3), UPoint::principal(2)));
}

TEST_CASE("pushforward of shift") {
    auto h = affine_op({1}, 3);  // x + 3
    UPoint u = UPoint::limit(1, 4);
    UPoint v = pushforward(h, u);
    REQUIRE(v.is_limit());
    CHECK(v.residue() == 0);
    CHECK(v.modulus() == 4);
}

TEST_CASE("pushforward of constant collapses to principal") {
    auto h = constant_op(7);
    CHECK(pushforward(h, UPoint::limit(0, 1)) == UPoint::principal(7));
}

TEST_CASE("pushforward of principal applies the map") {
    auto h = affine_op({2}, 0);
    CHECK(pushforward(h, UPoint::principal(5)) == UPoint::principal(10));
}

TEST_CASE("pushforward through monus section saturates") {
    // m -> monus(5, m): guard m <= 5 value 5 - m, guard m >= 6 value 0
    auto family = monus_op().substituted(0, 5);
    CHECK(pushforward(family, UPoint::limit(0, 1)) == UPoint::principal(0));
}

TEST_CASE("pushforward identity and composition laws") {
    auto id = identity_op();
    auto g = affine_op({2}, 1);
    auto h = affine_op({3}, 2);
    // h after g as one affine map: 3(2x+1)+2 = 6x + 5
    auto hg = affine_op({6}, 5);
    std::vector<UPoint> points = {UPoint::principal(0), UPoint::principal(9), UPoint::limit(0, 1),
                                  UPoint::limit(1, 2), UPoint::limit(5, 6)};
    for (const auto& u : points) {
        CHECK(pushforward(id, u) == u);
        CHECK(pushforward(hg, u) == pushforward(h, pushforward(g, u)));
    }
}

TEST_CASE("refine keeps and sharpens the progression") {
    auto u = UPoint::limit(0, 2);
    CHECK(refine(u, 4, 0) == UPoint::limit(0, 4));
    CHECK(refine(u, 4, 2) == UPoint::limit(2, 4));
    CHECK_THROWS_AS(refine(u, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(refine(u, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(refine(UPoint::principal(3), 6, 3), std::invalid_argument);
}

TEST_CASE("refinement is conservative") {
    int decided = 0;
    for (int trial = 0; trial < 300 && decided < 200; ++trial) {
        auto set = random_unary_set();
        auto u = UPoint::limit(0, 2);
        bool base;
        try {
            base = in_ultrafilter(set, u);
        } catch (const PrecisionError&) {
            continue;
        }
        ++decided;
        for (Int r : {Int(0), Int(2)}) {
            CHECK(in_ultrafilter(set, refine(u, 4, r)) == base);
        }
    }
    CHECK(decided >= 200);
}

TEST_CASE("equal_points contract") {
    try {
        equal_points(UPoint::limit(1, 2), UPoint::limit(3, 4));
        FAIL("expected PrecisionError");
    } catch (const PrecisionError& e) {
        CHECK(e.required_modulus() == 4);
    }
    CHECK_FALSE(equal_points(UPoint::limit(1, 2), UPoint::limit(0, 4)));
    CHECK_FALSE(equal_points(UPoint::principal(3), UPoint::limit(1, 2)));
    CHECK(equal_points(UPoint::limit(3, 4), UPoint::limit(3, 4)));
    CHECK(equal_points(UPoint::principal(3), UPoint::principal(3)));
}

TEST_CASE("ultrafilter laws on decidable queries") {
    std::uniform_int_distribution<long> mod_pick(0, 3);
    const long moduli[4] = {1, 2, 3, 4};
    int decided = 0;
    for (int trial = 0; trial < 1500 && decided < 1000; ++trial) {
        Int m(moduli[mod_pick(rng)]);
        UPoint u = UPoint::limit(mod_floor(rand_int(0, 11), m), m);
        auto a = random_unary_set();
        auto b = random_unary_set();
        try {
            bool in_a = in_ultrafilter(a, u);
            bool in_comp = in_ultrafilter(set_complement(a), u);
            CHECK(in_a != in_comp);  // exactly one of A, ~A belongs
            bool in_b = in_ultrafilter(b, u);
            bool in_union = in_ultrafilter(set_union(a, b), u);
            CHECK(in_union == (in_a || in_b));  // upward closure along A ⊆ A∪B
            bool in_inter = in_ultrafilter(set_intersect(a, b), u);
            CHECK(in_inter == (in_a && in_b));  // closure under intersections
            ++decided;
        } catch (const PrecisionError&) {
            continue;
        }
    }
    CHECK(decided >= 1000);
}

TEST_CASE("truncation oracle agreement") {
    int decided = 0;
    for (int trial = 0; trial < 800 && decided < 400; ++trial) {
        auto set = random_unary_set();
        Int m(1 + (trial % 4));
        UPoint u = UPoint::limit(mod_floor(rand_int(0, 11), m), m);
        try {
            bool engine = in_ultrafilter(set, u);
            auto sampled = truncation_oracle(set, u);
            CHECK(sampled == (engine ? Stability::True : Stability::False));
            ++decided;
        } catch (const PrecisionError&) {
            CHECK(truncation_oracle(set, u) == Stability::Unstable);
        }
    }
    CHECK(decided >= 400);
}

TEST_CASE("finite backend points are principal and printable") {
    auto u = std::make_shared<FiniteUniverse>(std::vector<std::string>{"a", "b"});
    auto p = UPoint::principal_finite(u, 1);
    CHECK(point_to_string(p) == "pt(b)");
    CHECK(point_to_string(UPoint::limit(0, 1)) == "lim(inf)");
    CHECK(point_to_string(UPoint::limit(2, 4)) == "lim(2 mod 4)");
}
