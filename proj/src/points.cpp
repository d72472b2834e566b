#include "points.hpp"

namespace ultrext {

UPoint UPoint::principal(Int value) {
    if (value < 0) throw std::invalid_argument("principal point must be a natural number");
    UPoint p;
    p.value_ = std::move(value);
    return p;
}

UPoint UPoint::principal_finite(UniversePtr u, Int index) {
    if (!u) throw std::invalid_argument("finite point needs a universe");
    if (index < 0 || index >= Int(u->size())) throw std::invalid_argument("element index out of range");
    UPoint p;
    p.universe_ = std::move(u);
    p.value_ = std::move(index);
    return p;
}

UPoint UPoint::limit(Int residue, Int modulus) {
    if (modulus < 1) throw std::invalid_argument("limit point modulus must be >= 1");
    if (residue < 0 || residue >= modulus)
        throw std::invalid_argument("limit point residue must lie in [0, modulus)");
    UPoint p;
    p.is_limit_ = true;
    p.residue_ = std::move(residue);
    p.modulus_ = std::move(modulus);
    return p;
}

const Int& UPoint::value() const {
    if (is_limit_) throw std::logic_error("limit point has no principal value");
    return value_;
}

const Int& UPoint::residue() const {
    if (!is_limit_) throw std::logic_error("principal point has no residue");
    return residue_;
}

const Int& UPoint::modulus() const {
    if (!is_limit_) throw std::logic_error("principal point has no modulus");
    return modulus_;
}

bool UPoint::operator==(const UPoint& other) const {
    if (is_limit_ != other.is_limit_) return false;
    if ((universe_ == nullptr) != (other.universe_ == nullptr)) return false;
    if (is_limit_) return residue_ == other.residue_ && modulus_ == other.modulus_;
    return value_ == other.value_;
}

namespace {

void require_same_backend(const DefinableSet& set, const UPoint& point) {
    if (set.is_symbolic() != point.is_symbolic())
        throw std::invalid_argument("set and point backends differ");
}

}  // namespace

bool in_ultrafilter(const DefinableSet& set, const UPoint& point) {
    if (set.arity() != 1) throw std::invalid_argument("ultrafilter membership needs a unary set");
    require_same_backend(set, point);
    if (point.is_principal()) {
        Int pt[1] = {point.value()};
        return membership(std::span<const Int>(pt, 1), set);
    }
    PeriodProfile profile = period_profile(set);
    Int big_l = lcm(point.modulus(), profile.period);
    bool first = true;
    bool value = false;
    for (Int rho = point.residue(); rho < big_l; rho += point.modulus()) {
        bool v = profile.value_at(rho);
        if (first) {
            value = v;
            first = false;
        } else if (v != value) {
            throw PrecisionError(big_l);
        }
    }
    return value;
}

UPoint pushforward(const DefOp& op, const UPoint& point) {
    if (op.arity() != 1) throw std::invalid_argument("pushforward needs a unary operation");
    if (op.is_symbolic() != point.is_symbolic())
        throw std::invalid_argument("operation and point backends differ");
    if (point.is_principal()) {
        Int pt[1] = {point.value()};
        Int image = op.apply(std::span<const Int>(pt, 1));
        return point.is_symbolic() ? UPoint::principal(image)
                                   : UPoint::principal_finite(op.codomain(), image);
    }
    // Determine the branch that is eventually active on the progression; a
    // guard whose truth is not eventually constant there needs a finer point.
    const Int& m = point.modulus();
    const Int& r = point.residue();
    for (const auto& branch : op.branches()) {
        DefinableSet guard_set = DefinableSet::symbolic(1, {branch.guard});
        bool active = in_ultrafilter(guard_set, point);  // PrecisionError propagates
        if (!active) continue;
        const Int& slope = branch.coeffs[0];
        if (slope == 0) return UPoint::principal(branch.constant);
        // slope > 0: the image tail follows (slope·r + constant) mod m; the
        // result stays at modulus m, no automatic refinement.
        return UPoint::limit(mod_floor(slope * r + branch.constant, m), m);
    }
    throw std::logic_error("total operation has no eventually active branch");
}

UPoint refine(const UPoint& point, const Int& new_modulus, const Int& new_residue) {
    if (!point.is_limit()) throw std::invalid_argument("only limit points can be refined");
    if (new_modulus <= point.modulus() || new_modulus % point.modulus() != 0)
        throw std::invalid_argument("refinement modulus must be a proper multiple");
    if (new_residue < 0 || new_residue >= new_modulus ||
        mod_floor(new_residue, point.modulus()) != point.residue())
        throw std::invalid_argument("refinement residue must lift the original residue");
    return UPoint::limit(new_residue, new_modulus);
}

bool equal_points(const UPoint& a, const UPoint& b) {
    if (a.is_symbolic() != b.is_symbolic()) throw std::invalid_argument("point backends differ");
    if (a.is_principal() && b.is_principal()) return a.value() == b.value();
    if (a.is_principal() != b.is_principal()) return false;  // principal vs non-principal
    Int g = gcd(a.modulus(), b.modulus());
    if (mod_floor(a.residue(), g) != mod_floor(b.residue(), g)) return false;
    if (a.modulus() == b.modulus()) return a.residue() == b.residue();
    throw PrecisionError(lcm(a.modulus(), b.modulus()));
}

std::string point_to_string(const UPoint& point) {
    if (point.is_limit()) {
        if (point.modulus() == 1) return "lim(inf)";
        return "lim(" + point.residue().str() + " mod " + point.modulus().str() + ")";
    }
    if (!point.is_symbolic()) return "pt(" + point.universe()->label(static_cast<std::size_t>(point.value())) + ")";
    return "pt(" + point.value().str() + ")";
}

}  // namespace ultrext
