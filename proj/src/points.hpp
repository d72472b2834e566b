#pragma once

#include "def_op.hpp"
#include "set_algebra.hpp"

#include <stdexcept>
#include <string>

namespace ultrext {

// A query distinguished residues finer than the point's modulus. Callers may
// refine the point to the required modulus and retry; defaulting the answer
// instead would be unsound.
class PrecisionError : public std::runtime_error {
public:
    explicit PrecisionError(Int required_modulus)
        : std::runtime_error("query needs residue precision mod " + required_modulus.str()),
          required_modulus_(std::move(required_modulus)) {}

    const Int& required_modulus() const { return required_modulus_; }

private:
    Int required_modulus_;
};

// A representable ultrafilter over the base algebra: either the principal
// point of an element, or the tail-limit point of the progression
// {x : x ≡ r (mod M)} at infinity. Limit points exist on the symbolic
// backend only; over a finite universe every ultrafilter is principal.
class UPoint {
public:
    static UPoint principal(Int value);                       // symbolic
    static UPoint principal_finite(UniversePtr u, Int index); // finite
    static UPoint limit(Int residue, Int modulus);

    bool is_principal() const { return !is_limit_; }
    bool is_limit() const { return is_limit_; }
    bool is_symbolic() const { return universe_ == nullptr; }
    const UniversePtr& universe() const { return universe_; }

    const Int& value() const;    // principal only
    const Int& residue() const;  // limit only
    const Int& modulus() const;  // limit only

    bool operator==(const UPoint& other) const;

private:
    UPoint() = default;

    bool is_limit_ = false;
    UniversePtr universe_;
    Int value_;    // principal payload
    Int residue_;  // limit payload
    Int modulus_;  // limit payload
};

// Membership A ∈ u. Limit points answer through the period profile: the value
// must be uniform over every residue mod lcm(M, period) compatible with the
// point, otherwise PrecisionError names the needed modulus.
bool in_ultrafilter(const DefinableSet& set, const UPoint& point);

// Image of the point under a unary operation (the continuous extension of the
// map, evaluated at a representable point). The result keeps the input
// modulus: output precision cannot exceed input precision.
UPoint pushforward(const DefOp& op, const UPoint& point);

// Precision recovery: lifts limit(r, M) to limit(r', L) with M | L and
// r' ≡ r (mod M). The refined point decides everything the original decided,
// with the same answers.
UPoint refine(const UPoint& point, const Int& new_modulus, const Int& new_residue);

// Equality of points at comparable precision; incomparable limit points raise
// PrecisionError(lcm of the moduli).
bool equal_points(const UPoint& a, const UPoint& b);

std::string point_to_string(const UPoint& point);

}  // namespace ultrext
