#pragma once

#include "set_algebra.hpp"

#include <span>
#include <vector>

namespace ultrext {

// One guarded branch of a piecewise-affine operation: on the guard cell the
// value is coeffs·x + constant.
struct AffineBranch {
    Cell guard;
    std::vector<Int> coeffs;
    Int constant;

    Int value_at(std::span<const Int> point) const { return dot(coeffs, point) + constant; }
};

// A total piecewise-affine operation. Symbolic construction checks the
// totality certificate: guards cover the whole space, branches are
// nonnegative on their guards (both via the emptiness decision), and
// overlapping guards agree (sampled).
class DefOp {
public:
    static DefOp symbolic(std::size_t arity, std::vector<AffineBranch> branches);
    static DefOp finite(UniversePtr universe, std::size_t arity, std::vector<Int> table);
    // Map between distinct finite carriers (values index the codomain).
    static DefOp finite_map(UniversePtr domain, UniversePtr codomain, std::size_t arity,
                            std::vector<Int> table);

    std::size_t arity() const { return arity_; }
    bool is_symbolic() const { return universe_ == nullptr; }
    const UniversePtr& universe() const { return universe_; }
    const UniversePtr& codomain() const { return codomain_; }
    const std::vector<AffineBranch>& branches() const { return branches_; }
    const std::vector<Int>& table() const { return table_; }

    Int apply(std::span<const Int> point) const;

    // Substitutes one argument, producing an operation of smaller arity.
    DefOp substituted(std::size_t position, const Int& value) const;

    // The graph {(x..., y) : F(x...) = y} as a definable set.
    DefinableSet graph() const;

    // Preimage {x... : F(x...) in target} for unary-target sets.
    DefinableSet preimage(const DefinableSet& target) const;

private:
    DefOp() = default;

    std::size_t arity_ = 0;
    UniversePtr universe_;
    UniversePtr codomain_;  // finite backend; defaults to the domain universe
    std::vector<AffineBranch> branches_;  // symbolic payload
    std::vector<Int> table_;              // finite payload: result element indices
};

DefOp identity_op();
DefOp constant_op(const Int& value, std::size_t arity = 1);
DefOp affine_op(std::vector<Int> coeffs, const Int& constant);  // must be total over ℕ^n
DefOp monus_op();  // (x, m) -> x - m if x >= m else 0

}  // namespace ultrext
