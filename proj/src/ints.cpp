#include "ints.hpp"

namespace ultrext {

std::vector<Int> extended_gcd(const Int& a, const Int& b) {
    Int old_r = a, r = b;
    Int old_s = 1, s = 0;
    Int old_t = 0, t = 1;
    while (r != 0) {
        Int q = old_r / r;
        Int tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    return {old_r, old_s, old_t};
}

bool solve_linear_congruence(const Int& a, const Int& r, const Int& m, ResidueClass& out) {
    Int a0 = mod_floor(a, m);
    Int r0 = mod_floor(r, m);
    if (a0 == 0) {
        if (r0 != 0) return false;
        out = ResidueClass{0, 1};
        return true;
    }
    auto egcd = extended_gcd(a0, m);
    const Int& g = egcd[0];
    if (r0 % g != 0) return false;
    Int m1 = m / g;
    Int x = mod_floor(egcd[1] * (r0 / g), m1);
    out = ResidueClass{x, m1};
    return true;
}

bool intersect_residue_classes(const ResidueClass& a, const ResidueClass& b, ResidueClass& out) {
    auto egcd = extended_gcd(a.modulus, b.modulus);
    const Int& g = egcd[0];
    Int diff = b.residue - a.residue;
    if (diff % g != 0) return false;
    Int l = a.modulus / g * b.modulus;
    Int k = mod_floor(egcd[1] * (diff / g), b.modulus / g);
    out.residue = mod_floor(a.residue + k * a.modulus, l);
    out.modulus = l;
    return true;
}

}  // namespace ultrext
