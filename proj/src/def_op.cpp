#include "def_op.hpp"

#include <stdexcept>

namespace ultrext {

namespace {

DefinableSet guard_union(std::size_t arity, const std::vector<AffineBranch>& branches) {
    std::vector<Cell> cells;
    for (const auto& b : branches) cells.push_back(b.guard);
    return DefinableSet::symbolic(arity, std::move(cells));
}

}  // namespace

DefOp DefOp::symbolic(std::size_t arity, std::vector<AffineBranch> branches) {
    if (branches.empty()) throw std::invalid_argument("operation needs at least one branch");
    for (const auto& b : branches) {
        if (b.guard.arity != arity || b.coeffs.size() != arity)
            throw std::invalid_argument("branch arity mismatch");
    }
    // Totality: guards cover ℕ^arity.
    if (!is_empty(set_complement(guard_union(arity, branches))))
        throw std::invalid_argument("operation guards do not cover the space");
    // Branches stay in ℕ on their guards: {guard ∧ value <= -1} must be empty.
    for (const auto& b : branches) {
        Cell negative = b.guard;
        LinearAtom atom;
        atom.coeffs = b.coeffs;
        for (auto& c : atom.coeffs) c = -c;
        atom.constant = -b.constant - 1;
        negative.inequalities.push_back(std::move(atom));
        if (!detail::cell_is_empty(negative))
            throw std::invalid_argument("operation branch leaves the naturals on its guard");
    }
    DefOp op;
    op.arity_ = arity;
    op.branches_ = std::move(branches);
    // Overlap agreement, sampled.
    TupleCursor cursor(arity, 6);
    std::vector<Int> pt;
    while (cursor.next(pt)) {
        bool seen = false;
        Int value = 0;
        for (const auto& b : op.branches_) {
            if (!b.guard.contains(pt)) continue;
            Int v = b.value_at(pt);
            if (seen && v != value)
                throw std::invalid_argument("operation branches disagree on a guard overlap");
            seen = true;
            value = v;
        }
    }
    return op;
}

DefOp DefOp::finite(UniversePtr universe, std::size_t arity, std::vector<Int> table) {
    UniversePtr codomain = universe;
    return finite_map(std::move(universe), std::move(codomain), arity, std::move(table));
}

DefOp DefOp::finite_map(UniversePtr domain, UniversePtr codomain, std::size_t arity,
                        std::vector<Int> table) {
    if (!domain || !codomain) throw std::invalid_argument("finite operation needs universes");
    if (table.size() != finite_table_size(*domain, arity))
        throw std::invalid_argument("finite operation table is not total");
    for (const auto& v : table)
        if (v < 0 || v >= Int(codomain->size()))
            throw std::invalid_argument("finite operation value out of range");
    DefOp op;
    op.arity_ = arity;
    op.universe_ = std::move(domain);
    op.codomain_ = std::move(codomain);
    op.table_ = std::move(table);
    return op;
}

Int DefOp::apply(std::span<const Int> point) const {
    if (point.size() != arity_) throw std::invalid_argument("operation arity mismatch");
    if (!is_symbolic()) return table_[finite_index(*universe_, point)];
    for (const auto& b : branches_)
        if (b.guard.contains(point)) return b.value_at(point);
    throw std::logic_error("total operation has no active branch");  // ruled out at construction
}

DefOp DefOp::substituted(std::size_t position, const Int& value) const {
    if (!is_symbolic()) throw std::invalid_argument("substituted is symbolic-only");
    std::vector<AffineBranch> branches;
    for (const auto& b : branches_) {
        AffineBranch next;
        next.guard = b.guard.substituted(position, value);
        next.constant = b.constant + b.coeffs[position] * value;
        for (std::size_t i = 0; i < arity_; ++i)
            if (i != position) next.coeffs.push_back(b.coeffs[i]);
        if (!next.guard.normalize()) continue;  // guard became unsatisfiable
        branches.push_back(std::move(next));
    }
    DefOp op;
    op.arity_ = arity_ - 1;
    op.branches_ = std::move(branches);
    return op;
}

DefinableSet DefOp::graph() const {
    if (!is_symbolic()) {
        std::size_t k = arity_ + 1;
        std::vector<bool> table(finite_table_size(*universe_, k), false);
        TupleCursor cursor(arity_, Int(universe_->size()) - 1);
        std::vector<Int> pt;
        while (cursor.next(pt)) {
            std::vector<Int> full = pt;
            full.push_back(apply(pt));
            table[finite_index(*universe_, full)] = true;
        }
        return DefinableSet::finite(universe_, k, std::move(table));
    }
    std::vector<Cell> cells;
    for (const auto& b : branches_) {
        Cell cell;
        cell.arity = arity_ + 1;
        for (const auto& atom : b.guard.inequalities) {
            LinearAtom widened{atom.coeffs, atom.constant};
            widened.coeffs.push_back(0);
            cell.inequalities.push_back(std::move(widened));
        }
        for (const auto& atom : b.guard.congruences) {
            CongruenceAtom widened{atom.coeffs, atom.residue, atom.modulus};
            widened.coeffs.push_back(0);
            cell.congruences.push_back(std::move(widened));
        }
        // y = coeffs·x + constant, two inequality atoms.
        LinearAtom ge;  // y - value >= 0
        ge.coeffs = b.coeffs;
        for (auto& c : ge.coeffs) c = -c;
        ge.coeffs.push_back(1);
        ge.constant = -b.constant;
        LinearAtom le;  // value - y >= 0
        le.coeffs = b.coeffs;
        le.coeffs.push_back(-1);
        le.constant = b.constant;
        cell.inequalities.push_back(std::move(ge));
        cell.inequalities.push_back(std::move(le));
        cells.push_back(std::move(cell));
    }
    return DefinableSet::symbolic(arity_ + 1, std::move(cells));
}

DefinableSet DefOp::preimage(const DefinableSet& target) const {
    if (target.arity() != 1) throw std::invalid_argument("preimage target must be unary");
    if (!is_symbolic()) {
        std::vector<bool> table(finite_table_size(*universe_, arity_), false);
        TupleCursor cursor(arity_, Int(universe_->size()) - 1);
        std::vector<Int> pt;
        while (cursor.next(pt)) {
            Int v[1] = {apply(pt)};
            table[finite_index(*universe_, pt)] = membership(std::span<const Int>(v, 1), target);
        }
        return DefinableSet::finite(universe_, arity_, std::move(table));
    }
    // Substitute the branch value into every atom of the target.
    std::vector<Cell> cells;
    for (const auto& b : branches_) {
        for (const auto& target_cell : target.cells()) {
            Cell cell = b.guard;
            for (const auto& atom : target_cell.inequalities) {
                const Int& a = atom.coeffs[0];
                LinearAtom next;
                next.coeffs.resize(arity_);
                for (std::size_t i = 0; i < arity_; ++i) next.coeffs[i] = a * b.coeffs[i];
                next.constant = a * b.constant + atom.constant;
                cell.inequalities.push_back(std::move(next));
            }
            for (const auto& atom : target_cell.congruences) {
                const Int& a = atom.coeffs[0];
                CongruenceAtom next;
                next.coeffs.resize(arity_);
                for (std::size_t i = 0; i < arity_; ++i) next.coeffs[i] = a * b.coeffs[i];
                next.modulus = atom.modulus;
                next.residue = mod_floor(atom.residue - a * b.constant, atom.modulus);
                cell.congruences.push_back(std::move(next));
            }
            cells.push_back(std::move(cell));
        }
    }
    return DefinableSet::symbolic(arity_, std::move(cells));
}

DefOp identity_op() { return affine_op({1}, 0); }

DefOp constant_op(const Int& value, std::size_t arity) {
    if (value < 0) throw std::invalid_argument("constant operation must be nonnegative");
    return DefOp::symbolic(arity, {AffineBranch{Cell::full(arity), std::vector<Int>(arity, 0), value}});
}

DefOp affine_op(std::vector<Int> coeffs, const Int& constant) {
    std::size_t arity = coeffs.size();
    return DefOp::symbolic(arity, {AffineBranch{Cell::full(arity), std::move(coeffs), constant}});
}

DefOp monus_op() {
    Cell ge;  // x >= m
    ge.arity = 2;
    ge.inequalities.push_back(LinearAtom{{1, -1}, 0});
    Cell lt;  // x < m
    lt.arity = 2;
    lt.inequalities.push_back(LinearAtom{{-1, 1}, -1});
    return DefOp::symbolic(2, {AffineBranch{ge, {1, -1}, 0}, AffineBranch{lt, {0, 0}, 0}});
}

}  // namespace ultrext
