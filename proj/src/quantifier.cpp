#include "quantifier.hpp"

#include <algorithm>

namespace ultrext {

namespace {

// Eliminates x_position from one cell along the progression x ≡ rho: each
// inequality atom with positive coefficient on x is eventually true for fixed
// remaining coordinates, negative kills the cell, zero descends; congruence
// atoms substitute the residue (their modulus divides the refinement, so the
// contribution is constant). Returns nothing when the cell drops out.
std::optional<Cell> eliminate_at_residue(const Cell& cell, std::size_t position, const Int& rho) {
    Cell out;
    out.arity = cell.arity - 1;
    for (const auto& atom : cell.inequalities) {
        const Int& a = atom.coeffs[position];
        if (a > 0) continue;                      // eventually true
        if (a < 0) return std::nullopt;           // eventually false: cell vanishes
        LinearAtom kept;
        kept.constant = atom.constant;
        for (std::size_t i = 0; i < cell.arity; ++i)
            if (i != position) kept.coeffs.push_back(atom.coeffs[i]);
        out.inequalities.push_back(std::move(kept));
    }
    for (const auto& atom : cell.congruences) {
        CongruenceAtom kept;
        kept.modulus = atom.modulus;
        kept.residue = mod_floor(atom.residue - atom.coeffs[position] * rho, atom.modulus);
        for (std::size_t i = 0; i < cell.arity; ++i)
            if (i != position) kept.coeffs.push_back(atom.coeffs[i]);
        out.congruences.push_back(std::move(kept));
    }
    return out;
}

// The residue refinements a limit quantifier has to agree across: the point's
// modulus joined with every congruence modulus that touches the eliminated
// coordinate.
Int refinement_modulus(const UPoint& point, const DefinableSet& set, std::size_t position) {
    Int big_l = point.modulus();
    for (const auto& cell : set.cells())
        for (const auto& atom : cell.congruences)
            if (atom.coeffs[position] != 0) big_l = lcm(big_l, atom.modulus);
    return big_l;
}

DefinableSet eliminate_limit_at(const UPoint& point, const DefinableSet& set, std::size_t position,
                                const Int& rho) {
    std::vector<Cell> cells;
    for (const auto& cell : set.cells()) {
        auto kept = eliminate_at_residue(cell, position, rho);
        if (kept) cells.push_back(std::move(*kept));
    }
    (void)point;
    return DefinableSet::symbolic(set.arity() - 1, std::move(cells));
}

struct LimitElimination {
    DefinableSet result;
    std::optional<quantifier_detail::RefinementConflict> conflict;
};

LimitElimination eliminate_limit(const UPoint& point, const DefinableSet& set, std::size_t position) {
    Int big_l = refinement_modulus(point, set, position);
    const Int& m = point.modulus();
    DefinableSet first = eliminate_limit_at(point, set, position, point.residue());
    for (Int rho = point.residue() + m; rho < big_l; rho += m) {
        DefinableSet other = eliminate_limit_at(point, set, position, rho);
        auto forward = difference_witness(first, other);
        std::optional<std::vector<Int>> backward;
        if (!forward) backward = difference_witness(other, first);
        if (forward || backward) {
            quantifier_detail::RefinementConflict conflict;
            conflict.required_modulus = big_l;
            conflict.parameter_witness = forward ? *forward : *backward;
            conflict.residue_a = point.residue();
            conflict.residue_b = rho;
            return LimitElimination{std::move(first), std::move(conflict)};
        }
    }
    return LimitElimination{std::move(first), std::nullopt};
}

}  // namespace

DefinableSet forall_u(const UPoint& point, const DefinableSet& set, std::size_t position) {
    if (set.arity() < 1) throw std::invalid_argument("quantifier needs arity >= 1");
    if (position >= set.arity()) throw std::invalid_argument("quantifier position out of range");
    if (set.is_symbolic() != point.is_symbolic())
        throw std::invalid_argument("set and point backends differ");
    if (point.is_principal()) return section(set, position, point.value());
    auto elim = eliminate_limit(point, set, position);
    if (elim.conflict) throw PrecisionError(elim.conflict->required_modulus);
    return std::move(elim.result);
}

DefinableSet exists_u(const UPoint& point, const DefinableSet& set, std::size_t position) {
    return set_complement(forall_u(point, set_complement(set), position));
}

bool truth_value(const DefinableSet& set) {
    if (set.arity() != 0) throw std::invalid_argument("truth_value needs an arity-0 set");
    if (!set.is_symbolic()) return !set.table().empty() && set.table()[0];
    return !set.cells().empty();  // normalized arity-0 cells carry no atoms
}

bool eval_prefix(const QuantPrefix& prefix, const DefinableSet& set) {
    if (prefix.size() != set.arity()) throw std::invalid_argument("prefix must cover every position");
    std::vector<bool> covered(set.arity(), false);
    for (const auto& [pos, point] : prefix) {
        if (pos >= set.arity() || covered[pos])
            throw std::invalid_argument("prefix positions must be distinct and in range");
        covered[pos] = true;
    }
    DefinableSet current = set;
    // Innermost (last) quantifier first; earlier positions shift down as
    // later coordinates are eliminated.
    for (std::size_t i = prefix.size(); i > 0; --i) {
        std::size_t pos = prefix[i - 1].first;
        std::size_t shifted = pos;
        for (std::size_t j = i; j < prefix.size(); ++j)
            if (prefix[j].first < pos) --shifted;
        current = forall_u(prefix[i - 1].second, current, shifted);
    }
    return truth_value(current);
}

namespace quantifier_detail {

std::optional<RefinementConflict> forall_u_conflict(const UPoint& point, const DefinableSet& set,
                                                    std::size_t position) {
    if (point.is_principal()) return std::nullopt;
    return eliminate_limit(point, set, position).conflict;
}

}  // namespace quantifier_detail

}  // namespace ultrext
