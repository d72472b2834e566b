#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <vector>

namespace ultrext {

// All arithmetic in the workbench is arbitrary precision: substitution and
// elimination grow coefficients past any fixed word size.
using Int = boost::multiprecision::cpp_int;

using boost::multiprecision::abs;
using boost::multiprecision::gcd;
using boost::multiprecision::lcm;

// Floor division, b > 0.
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

// Ceiling division, b > 0.
inline Int ceil_div(const Int& a, const Int& b) {
    Int q = a / b;
    if (a % b != 0 && a > 0) ++q;
    return q;
}

// Representative of a mod m in [0, m), m >= 1.
inline Int mod_floor(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

inline Int dot(std::span<const Int> a, std::span<const Int> b) {
    Int acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// Solves a*x ≡ r (mod m) for x, m >= 1. Returns {residue, modulus} of the
// solution progression, or nothing when unsolvable.
struct ResidueClass {
    Int residue;
    Int modulus;
};

std::vector<Int> extended_gcd(const Int& a, const Int& b);  // {g, s, t}: g = s*a + t*b

bool solve_linear_congruence(const Int& a, const Int& r, const Int& m, ResidueClass& out);

// Intersects two residue classes (CRT). Returns false when incompatible.
bool intersect_residue_classes(const ResidueClass& a, const ResidueClass& b, ResidueClass& out);

}  // namespace ultrext
