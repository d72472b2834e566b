#pragma once

#include "ints.hpp"

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ultrext {

// Enumerated carrier for the finite backend. Every ultrafilter over it is
// principal, so the extension machinery restricted to it is exhaustively
// checkable.
class FiniteUniverse {
public:
    static constexpr std::size_t default_size_bound = 6;

    explicit FiniteUniverse(std::vector<std::string> labels);

    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<std::size_t> index_of(std::string_view label) const;

    bool operator==(const FiniteUniverse& other) const { return labels_ == other.labels_; }

private:
    std::vector<std::string> labels_;
};

using UniversePtr = std::shared_ptr<const FiniteUniverse>;

// coeffs·x + constant >= 0. Strict inequalities are normalized to this form
// at construction (t > 0 becomes t - 1 >= 0).
struct LinearAtom {
    std::vector<Int> coeffs;
    Int constant;

    bool operator==(const LinearAtom&) const = default;
};

// coeffs·x ≡ residue (mod modulus), modulus >= 2, residue in [0, modulus).
struct CongruenceAtom {
    std::vector<Int> coeffs;
    Int residue;
    Int modulus;

    bool operator==(const CongruenceAtom&) const = default;
};

// One conjunctive cell of the quantifier-free normal form: a conjunction of
// inequality and congruence atoms over ℕ^arity. Negation never appears; it is
// pushed into relation flips and residue complements when sets are built.
struct Cell {
    std::size_t arity = 0;
    std::vector<LinearAtom> inequalities;
    std::vector<CongruenceAtom> congruences;

    static Cell full(std::size_t arity) { return Cell{arity, {}, {}}; }

    bool contains(std::span<const Int> point) const;
    Cell substituted(std::size_t position, const Int& value) const;

    // Syntactic hygiene: gcd-reduce atoms, sort and deduplicate, CRT-merge
    // congruences with equal coefficient rows. Returns false when the cell is
    // detected unsatisfiable by these local checks alone.
    bool normalize();

    bool operator==(const Cell&) const = default;
    bool operator<(const Cell&) const;
};

// A representable subset of ℕ^arity (symbolic backend: finite union of
// cells) or of universe^arity (finite backend: explicit total table).
class DefinableSet {
public:
    static DefinableSet symbolic(std::size_t arity, std::vector<Cell> cells);
    static DefinableSet symbolic_empty(std::size_t arity);
    static DefinableSet symbolic_full(std::size_t arity);
    static DefinableSet finite(UniversePtr universe, std::size_t arity, std::vector<bool> table);
    static DefinableSet finite_empty(UniversePtr universe, std::size_t arity);
    static DefinableSet finite_full(UniversePtr universe, std::size_t arity);

    std::size_t arity() const { return arity_; }
    bool is_symbolic() const { return universe_ == nullptr; }
    const UniversePtr& universe() const { return universe_; }
    const std::vector<Cell>& cells() const { return cells_; }
    const std::vector<bool>& table() const { return table_; }

    bool same_backend(const DefinableSet& other) const;

private:
    DefinableSet() = default;

    std::size_t arity_ = 0;
    UniversePtr universe_;     // null: symbolic over ℕ^arity
    std::vector<Cell> cells_;  // symbolic payload
    std::vector<bool> table_;  // finite payload, size |U|^arity
};

// Effective description of the tail of a unary symbolic set: past threshold,
// membership depends on the residue mod period only.
struct PeriodProfile {
    Int period;     // >= 1
    Int threshold;  // >= 0
    std::vector<bool> tail;  // size = period; tail[r] = membership of large x ≡ r

    bool value_at(const Int& x) const { return tail[static_cast<std::size_t>(mod_floor(x, period))]; }
};

DefinableSet set_union(const DefinableSet& a, const DefinableSet& b);
DefinableSet set_intersect(const DefinableSet& a, const DefinableSet& b);
DefinableSet set_complement(const DefinableSet& a);
DefinableSet set_difference(const DefinableSet& a, const DefinableSet& b);

bool membership(std::span<const Int> point, const DefinableSet& set);

// Substitutes x_position := value; arity drops by one. Finite backend: value
// is an element index.
DefinableSet section(const DefinableSet& set, std::size_t position, const Int& value);

PeriodProfile period_profile(const DefinableSet& set);

bool is_empty(const DefinableSet& set);

// Extensional equality through the emptiness decision.
bool sets_equal(const DefinableSet& a, const DefinableSet& b);

// First element of set \ other (used to report refinement disagreements).
std::optional<std::vector<Int>> difference_witness(const DefinableSet& a, const DefinableSet& b);

// Satisfiability witness for a nonempty symbolic set.
std::optional<std::vector<Int>> find_witness(const DefinableSet& set);

// True when the cell's real relaxation admits a recession direction with all
// coordinates strictly positive (used by the star extension).
bool cone_has_positive_direction(const Cell& cell);

namespace detail {
// Emptiness of a single symbolic cell; exposed for tests and oracles.
bool cell_is_empty(const Cell& cell);
std::optional<std::vector<Int>> cell_witness(const Cell& cell);
// Documented witness bound: a satisfiable cell has a witness with all
// coordinates <= this value.
Int cell_witness_bound(const Cell& cell);
}  // namespace detail

// Enumerates tuples over [0, bound]^arity (symbolic sampling helper).
class TupleCursor {
public:
    TupleCursor(std::size_t arity, const Int& bound);
    bool next(std::vector<Int>& out);

private:
    std::size_t arity_;
    Int bound_;
    std::vector<Int> current_;
    bool done_ = false;
    bool started_ = false;
};

std::size_t finite_table_size(const FiniteUniverse& u, std::size_t arity);
std::size_t finite_index(const FiniteUniverse& u, std::span<const Int> point);
std::vector<Int> finite_point(const FiniteUniverse& u, std::size_t arity, std::size_t index);

}  // namespace ultrext
