#include "set_algebra.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <set>

namespace ultrext {

FiniteUniverse::FiniteUniverse(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw std::invalid_argument("finite universe needs at least one element");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw std::invalid_argument("finite universe labels must be distinct");
}

std::optional<std::size_t> FiniteUniverse::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return i;
    return std::nullopt;
}

bool Cell::contains(std::span<const Int> point) const {
    assert(point.size() == arity);
    for (const auto& atom : inequalities)
        if (dot(atom.coeffs, point) + atom.constant < 0) return false;
    for (const auto& atom : congruences)
        if (mod_floor(dot(atom.coeffs, point), atom.modulus) != atom.residue) return false;
    return true;
}

Cell Cell::substituted(std::size_t position, const Int& value) const {
    assert(position < arity);
    Cell out;
    out.arity = arity - 1;
    for (const auto& atom : inequalities) {
        LinearAtom next;
        next.constant = atom.constant + atom.coeffs[position] * value;
        for (std::size_t i = 0; i < arity; ++i)
            if (i != position) next.coeffs.push_back(atom.coeffs[i]);
        out.inequalities.push_back(std::move(next));
    }
    for (const auto& atom : congruences) {
        CongruenceAtom next;
        next.modulus = atom.modulus;
        next.residue = mod_floor(atom.residue - atom.coeffs[position] * value, atom.modulus);
        for (std::size_t i = 0; i < arity; ++i)
            if (i != position) next.coeffs.push_back(atom.coeffs[i]);
        out.congruences.push_back(std::move(next));
    }
    return out;
}

namespace {

bool atom_less(const LinearAtom& a, const LinearAtom& b) {
    if (a.coeffs != b.coeffs) return a.coeffs < b.coeffs;
    return a.constant < b.constant;
}

bool atom_less(const CongruenceAtom& a, const CongruenceAtom& b) {
    if (a.coeffs != b.coeffs) return a.coeffs < b.coeffs;
    if (a.modulus != b.modulus) return a.modulus < b.modulus;
    return a.residue < b.residue;
}

Int content(const std::vector<Int>& coeffs) {
    Int g = 0;
    for (const auto& c : coeffs) g = gcd(g, abs(c));
    return g;
}

}  // namespace

bool Cell::normalize() {
    std::vector<LinearAtom> ineqs;
    for (auto& atom : inequalities) {
        Int g = content(atom.coeffs);
        if (g == 0) {
            if (atom.constant < 0) return false;  // constant-false atom
            continue;                             // constant-true atom
        }
        LinearAtom next;
        next.coeffs = atom.coeffs;
        for (auto& c : next.coeffs) c /= g;
        next.constant = floor_div(atom.constant, g);
        ineqs.push_back(std::move(next));
    }
    std::sort(ineqs.begin(), ineqs.end(), [](const LinearAtom& a, const LinearAtom& b) { return atom_less(a, b); });
    ineqs.erase(std::unique(ineqs.begin(), ineqs.end()), ineqs.end());
    // Keep only the tightest constant per coefficient row: a·x + c >= 0 with
    // the smallest c implies the rest.
    std::vector<LinearAtom> tight;
    for (auto& atom : ineqs) {
        if (!tight.empty() && tight.back().coeffs == atom.coeffs) continue;  // sorted: smaller c first
        tight.push_back(std::move(atom));
    }
    // Opposite rows with incompatible window: a·x >= -c1 and a·x <= c2 with c2 < -c1.
    for (const auto& atom : tight) {
        std::vector<Int> neg = atom.coeffs;
        for (auto& c : neg) c = -c;
        for (const auto& other : tight) {
            if (other.coeffs == neg && atom.constant + other.constant < 0) return false;
        }
    }
    inequalities = std::move(tight);

    // Congruences: gcd-reduce, then CRT-merge equal coefficient rows.
    std::map<std::vector<Int>, ResidueClass> merged;
    for (auto& atom : congruences) {
        Int g = gcd(content(atom.coeffs), atom.modulus);
        std::vector<Int> coeffs = atom.coeffs;
        Int residue = atom.residue;
        Int modulus = atom.modulus;
        if (content(coeffs) == 0) {
            if (mod_floor(residue, modulus) != 0) return false;
            continue;
        }
        if (g > 1) {
            if (residue % g != 0) return false;  // gcd(coeffs, m) must divide r
            for (auto& c : coeffs) c /= g;
            residue /= g;
            modulus /= g;
        }
        if (modulus == 1) continue;
        // Canonical sign: first nonzero coefficient positive.
        for (const auto& c : coeffs) {
            if (c == 0) continue;
            if (c < 0) {
                for (auto& cc : coeffs) cc = -cc;
                residue = mod_floor(-residue, modulus);
            }
            break;
        }
        residue = mod_floor(residue, modulus);
        auto it = merged.find(coeffs);
        if (it == merged.end()) {
            merged.emplace(std::move(coeffs), ResidueClass{residue, modulus});
        } else {
            ResidueClass combined;
            if (!intersect_residue_classes(it->second, ResidueClass{residue, modulus}, combined)) return false;
            it->second = combined;
        }
    }
    congruences.clear();
    for (auto& [coeffs, rc] : merged) {
        if (rc.modulus == 1) continue;
        congruences.push_back(CongruenceAtom{coeffs, rc.residue, rc.modulus});
    }
    std::sort(congruences.begin(), congruences.end(),
              [](const CongruenceAtom& a, const CongruenceAtom& b) { return atom_less(a, b); });
    return true;
}

bool Cell::operator<(const Cell& other) const {
    if (arity != other.arity) return arity < other.arity;
    if (inequalities.size() != other.inequalities.size()) return inequalities.size() < other.inequalities.size();
    if (congruences.size() != other.congruences.size()) return congruences.size() < other.congruences.size();
    for (std::size_t i = 0; i < inequalities.size(); ++i) {
        if (!(inequalities[i] == other.inequalities[i]))
            return atom_less(inequalities[i], other.inequalities[i]);
    }
    for (std::size_t i = 0; i < congruences.size(); ++i) {
        if (!(congruences[i] == other.congruences[i]))
            return atom_less(congruences[i], other.congruences[i]);
    }
    return false;
}

namespace {

std::vector<Cell> normalized_cells(std::size_t arity, std::vector<Cell> cells) {
    std::vector<Cell> out;
    for (auto& cell : cells) {
        if (cell.arity != arity) throw std::invalid_argument("cell arity mismatch");
        if (cell.normalize()) out.push_back(std::move(cell));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

DefinableSet DefinableSet::symbolic(std::size_t arity, std::vector<Cell> cells) {
    DefinableSet s;
    s.arity_ = arity;
    s.cells_ = normalized_cells(arity, std::move(cells));
    return s;
}

DefinableSet DefinableSet::symbolic_empty(std::size_t arity) { return symbolic(arity, {}); }

DefinableSet DefinableSet::symbolic_full(std::size_t arity) { return symbolic(arity, {Cell::full(arity)}); }

DefinableSet DefinableSet::finite(UniversePtr universe, std::size_t arity, std::vector<bool> table) {
    if (!universe) throw std::invalid_argument("finite set needs a universe");
    if (table.size() != finite_table_size(*universe, arity))
        throw std::invalid_argument("finite set table is not total");
    DefinableSet s;
    s.arity_ = arity;
    s.universe_ = std::move(universe);
    s.table_ = std::move(table);
    return s;
}

DefinableSet DefinableSet::finite_empty(UniversePtr universe, std::size_t arity) {
    std::vector<bool> table(finite_table_size(*universe, arity), false);
    return finite(std::move(universe), arity, std::move(table));
}

DefinableSet DefinableSet::finite_full(UniversePtr universe, std::size_t arity) {
    std::vector<bool> table(finite_table_size(*universe, arity), true);
    return finite(std::move(universe), arity, std::move(table));
}

bool DefinableSet::same_backend(const DefinableSet& other) const {
    if (is_symbolic() != other.is_symbolic()) return false;
    if (is_symbolic()) return true;
    return universe_ == other.universe_ || *universe_ == *other.universe_;
}

namespace {

void require_compatible(const DefinableSet& a, const DefinableSet& b) {
    if (a.arity() != b.arity()) throw std::invalid_argument("set arity mismatch");
    if (!a.same_backend(b)) throw std::invalid_argument("set backend mismatch");
}

}  // namespace

DefinableSet set_union(const DefinableSet& a, const DefinableSet& b) {
    require_compatible(a, b);
    if (!a.is_symbolic()) {
        std::vector<bool> table = a.table();
        for (std::size_t i = 0; i < table.size(); ++i) table[i] = table[i] || b.table()[i];
        return DefinableSet::finite(a.universe(), a.arity(), std::move(table));
    }
    std::vector<Cell> cells = a.cells();
    cells.insert(cells.end(), b.cells().begin(), b.cells().end());
    return DefinableSet::symbolic(a.arity(), std::move(cells));
}

DefinableSet set_intersect(const DefinableSet& a, const DefinableSet& b) {
    require_compatible(a, b);
    if (!a.is_symbolic()) {
        std::vector<bool> table = a.table();
        for (std::size_t i = 0; i < table.size(); ++i) table[i] = table[i] && b.table()[i];
        return DefinableSet::finite(a.universe(), a.arity(), std::move(table));
    }
    std::vector<Cell> cells;
    for (const auto& ca : a.cells()) {
        for (const auto& cb : b.cells()) {
            Cell combined = ca;
            combined.inequalities.insert(combined.inequalities.end(), cb.inequalities.begin(),
                                         cb.inequalities.end());
            combined.congruences.insert(combined.congruences.end(), cb.congruences.begin(),
                                        cb.congruences.end());
            cells.push_back(std::move(combined));
        }
    }
    return DefinableSet::symbolic(a.arity(), std::move(cells));
}

namespace {

constexpr std::size_t kComplementCellCap = 200000;

// One negated atom, as the atoms of a single-atom cell.
struct NegatedAlternative {
    std::optional<LinearAtom> inequality;
    std::optional<CongruenceAtom> congruence;
};

std::vector<NegatedAlternative> negation_alternatives(const Cell& cell) {
    std::vector<NegatedAlternative> alts;
    for (const auto& atom : cell.inequalities) {
        // not(a·x + c >= 0)  <=>  -a·x - c - 1 >= 0
        LinearAtom neg;
        neg.coeffs = atom.coeffs;
        for (auto& c : neg.coeffs) c = -c;
        neg.constant = -atom.constant - 1;
        alts.push_back(NegatedAlternative{std::move(neg), std::nullopt});
    }
    for (const auto& atom : cell.congruences) {
        for (Int r = 0; r < atom.modulus; ++r) {
            if (r == atom.residue) continue;
            alts.push_back(NegatedAlternative{std::nullopt, CongruenceAtom{atom.coeffs, r, atom.modulus}});
        }
    }
    return alts;
}

}  // namespace

DefinableSet set_complement(const DefinableSet& a) {
    if (!a.is_symbolic()) {
        std::vector<bool> table = a.table();
        table.flip();
        return DefinableSet::finite(a.universe(), a.arity(), std::move(table));
    }
    std::vector<Cell> result{Cell::full(a.arity())};
    for (const auto& cell : a.cells()) {
        auto alts = negation_alternatives(cell);
        std::vector<Cell> next;
        for (const auto& base : result) {
            for (const auto& alt : alts) {
                Cell candidate = base;
                if (alt.inequality) candidate.inequalities.push_back(*alt.inequality);
                if (alt.congruence) candidate.congruences.push_back(*alt.congruence);
                if (candidate.normalize()) next.push_back(std::move(candidate));
                if (next.size() > kComplementCellCap)
                    throw std::runtime_error("complement exceeded the cell budget");
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        result = std::move(next);
        if (result.empty()) break;
    }
    return DefinableSet::symbolic(a.arity(), std::move(result));
}

DefinableSet set_difference(const DefinableSet& a, const DefinableSet& b) {
    return set_intersect(a, set_complement(b));
}

bool membership(std::span<const Int> point, const DefinableSet& set) {
    if (point.size() != set.arity()) throw std::invalid_argument("point arity mismatch");
    if (!set.is_symbolic()) return set.table()[finite_index(*set.universe(), point)];
    for (const auto& cell : set.cells())
        if (cell.contains(point)) return true;
    return false;
}

DefinableSet section(const DefinableSet& set, std::size_t position, const Int& value) {
    if (position >= set.arity()) throw std::invalid_argument("section position out of range");
    if (set.is_symbolic()) {
        std::vector<Cell> cells;
        for (const auto& cell : set.cells()) cells.push_back(cell.substituted(position, value));
        return DefinableSet::symbolic(set.arity() - 1, std::move(cells));
    }
    const auto& u = *set.universe();
    std::size_t k = set.arity();
    std::vector<bool> table(finite_table_size(u, k - 1), false);
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
        std::vector<Int> sub = finite_point(u, k - 1, idx);
        std::vector<Int> full;
        full.reserve(k);
        for (std::size_t i = 0; i < position; ++i) full.push_back(sub[i]);
        full.push_back(value);
        for (std::size_t i = position; i + 1 < k; ++i) full.push_back(sub[i]);
        table[idx] = set.table()[finite_index(u, full)];
    }
    return DefinableSet::finite(set.universe(), k - 1, std::move(table));
}

PeriodProfile period_profile(const DefinableSet& set) {
    if (!set.is_symbolic() || set.arity() != 1)
        throw std::invalid_argument("period profile needs a unary symbolic set");
    Int period = 1;
    Int threshold = 0;
    for (const auto& cell : set.cells()) {
        for (const auto& atom : cell.congruences) period = lcm(period, atom.modulus);
        for (const auto& atom : cell.inequalities) {
            const Int& a = atom.coeffs[0];
            if (a > 0) {
                threshold = std::max(threshold, ceil_div(-atom.constant, a));
            } else if (a < 0) {
                threshold = std::max(threshold, floor_div(atom.constant, -a) + 1);
            }
        }
    }
    if (threshold < 0) threshold = 0;
    PeriodProfile profile;
    profile.period = period;
    profile.threshold = threshold;
    std::size_t p = static_cast<std::size_t>(period);
    profile.tail.resize(p);
    for (std::size_t r = 0; r < p; ++r) {
        Int x = threshold + mod_floor(Int(r) - threshold, period);
        Int pt[1] = {x};
        profile.tail[r] = membership(std::span<const Int>(pt, 1), set);
    }
    return profile;
}

// ---------------------------------------------------------------------------
// Emptiness engine.
//
// A cell is a conjunction of inequalities a_j·x + c_j >= 0 and congruences
// b_l·x ≡ r_l (mod m_l) over ℕ^k. Decision method: if the cell is satisfiable
// it has a witness with every coordinate <= B (bound documented at
// cell_witness_bound), so a scan of the first k-1 coordinates below B with the
// last coordinate solved exactly (interval intersected with the CRT class of
// the congruences) is a decision procedure. The scan prunes with exact
// rational Fourier-Motzkin bounds per level. If the scan exceeds its step
// budget, a Cooper-style variable elimination decides the cell instead.
// ---------------------------------------------------------------------------

namespace detail {

namespace {

struct Row {
    std::vector<Int> coeffs;  // over the first `level` variables
    Int constant;             // coeffs·x + constant >= 0

    bool operator==(const Row&) const = default;
    bool operator<(const Row& other) const {
        if (coeffs != other.coeffs) return coeffs < other.coeffs;
        return constant < other.constant;
    }
};

void reduce_row(Row& row) {
    Int g = 0;
    for (const auto& c : row.coeffs) g = gcd(g, abs(c));
    if (g > 1) {
        for (auto& c : row.coeffs) c /= g;
        row.constant = floor_div(row.constant, g);
    }
}

constexpr std::size_t kFmRowCap = 4000;

// Eliminates the last variable of the rows. Returns false on a derived
// contradiction (0 >= positive).
bool fm_eliminate_last(const std::vector<Row>& rows, std::vector<Row>& out) {
    std::size_t var = rows.empty() ? 0 : rows.front().coeffs.size() - 1;
    std::vector<Row> zero, pos, neg;
    for (const auto& row : rows) {
        const Int& a = row.coeffs[var];
        Row trimmed;
        trimmed.coeffs.assign(row.coeffs.begin(), row.coeffs.end() - 1);
        trimmed.constant = row.constant;
        if (a == 0) {
            zero.push_back(std::move(trimmed));
        } else if (a > 0) {
            pos.push_back(row);
        } else {
            neg.push_back(row);
        }
    }
    std::set<Row> dedup(zero.begin(), zero.end());
    for (const auto& p : pos) {
        for (const auto& n : neg) {
            const Int& ap = p.coeffs[var];
            Int an = -n.coeffs[var];
            Row combined;
            combined.coeffs.resize(var);
            for (std::size_t i = 0; i < var; ++i) combined.coeffs[i] = an * p.coeffs[i] + ap * n.coeffs[i];
            combined.constant = an * p.constant + ap * n.constant;
            reduce_row(combined);
            bool all_zero = true;
            for (const auto& c : combined.coeffs)
                if (c != 0) {
                    all_zero = false;
                    break;
                }
            if (all_zero) {
                if (combined.constant < 0) return false;
                continue;
            }
            dedup.insert(std::move(combined));
            if (dedup.size() > kFmRowCap) break;  // pruning only; scan stays exact
        }
        if (dedup.size() > kFmRowCap) break;
    }
    for (const auto& row : zero) {
        bool all_zero = true;
        for (const auto& c : row.coeffs)
            if (c != 0) {
                all_zero = false;
                break;
            }
        if (all_zero && row.constant < 0) return false;
    }
    out.assign(dedup.begin(), dedup.end());
    return true;
}

struct FmCascade {
    // levels[i] = rows over the first i variables, i in [0, k].
    std::vector<std::vector<Row>> levels;
    bool infeasible = false;
};

FmCascade build_cascade(const Cell& cell) {
    FmCascade cascade;
    std::size_t k = cell.arity;
    std::vector<Row> rows;
    for (const auto& atom : cell.inequalities) {
        Row row{atom.coeffs, atom.constant};
        reduce_row(row);
        rows.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < k; ++i) {
        Row nn;
        nn.coeffs.assign(k, 0);
        nn.coeffs[i] = 1;
        nn.constant = 0;
        rows.push_back(std::move(nn));
    }
    cascade.levels.resize(k + 1);
    cascade.levels[k] = std::move(rows);
    for (std::size_t level = k; level > 0; --level) {
        if (!fm_eliminate_last(cascade.levels[level], cascade.levels[level - 1])) {
            cascade.infeasible = true;
            return cascade;
        }
    }
    return cascade;
}

struct Interval {
    Int lo;
    std::optional<Int> hi;
    bool empty = false;
};

Interval bounds_at_level(const std::vector<Row>& rows, std::span<const Int> prefix) {
    Interval iv;
    iv.lo = 0;
    std::size_t var = prefix.size();
    for (const auto& row : rows) {
        const Int& a = row.coeffs[var];
        Int partial = row.constant;
        for (std::size_t i = 0; i < var; ++i) partial += row.coeffs[i] * prefix[i];
        if (a == 0) {
            if (partial < 0) {
                iv.empty = true;
                return iv;
            }
        } else if (a > 0) {
            iv.lo = std::max(iv.lo, ceil_div(-partial, a));
        } else {
            Int hi = floor_div(partial, -a);
            if (!iv.hi || hi < *iv.hi) iv.hi = hi;
        }
    }
    if (iv.hi && *iv.hi < iv.lo) iv.empty = true;
    return iv;
}

struct ScanBudgetExceeded {};

struct Scanner {
    const Cell& cell;
    const FmCascade& cascade;
    Int cap;
    long long budget;
    std::vector<Int> prefix;
    // congruences_by_depth[d]: indices of congruence atoms whose last nonzero
    // coefficient is at position d-1 (determined once x_d is assigned).
    std::vector<std::vector<std::size_t>> congruences_by_depth;

    bool congruences_ok(std::size_t depth) const {
        for (std::size_t idx : congruences_by_depth[depth]) {
            const auto& atom = cell.congruences[idx];
            Int acc = 0;
            for (std::size_t i = 0; i < depth; ++i) acc += atom.coeffs[i] * prefix[i];
            if (mod_floor(acc, atom.modulus) != atom.residue) return false;
        }
        return true;
    }

    // Solves the final coordinate exactly within [lo, hi].
    std::optional<Int> solve_leaf(const Interval& iv) {
        std::size_t last = cell.arity - 1;
        ResidueClass cls{0, 1};
        for (const auto& atom : cell.congruences) {
            if (atom.coeffs[last] == 0) continue;  // handled by congruences_by_depth
            Int rhs = atom.residue;
            for (std::size_t i = 0; i < last; ++i) rhs -= atom.coeffs[i] * prefix[i];
            ResidueClass solved;
            if (!solve_linear_congruence(atom.coeffs[last], rhs, atom.modulus, solved)) return std::nullopt;
            ResidueClass merged;
            if (!intersect_residue_classes(cls, solved, merged)) return std::nullopt;
            cls = merged;
        }
        Int x = iv.lo + mod_floor(cls.residue - iv.lo, cls.modulus);
        if (iv.hi && x > *iv.hi) return std::nullopt;
        return x;
    }

    bool scan(std::size_t depth, std::vector<Int>* witness) {
        const auto& rows = cascade.levels[depth + 1];
        Interval iv = bounds_at_level(rows, std::span<const Int>(prefix.data(), depth));
        if (iv.empty) return false;
        if (depth + 1 == cell.arity) {
            if (--budget < 0) throw ScanBudgetExceeded{};
            auto x = solve_leaf(iv);
            if (!x) return false;
            if (witness) {
                witness->assign(prefix.begin(), prefix.begin() + depth);
                witness->push_back(*x);
            }
            return true;
        }
        Int hi = iv.hi ? std::min(*iv.hi, cap) : cap;
        for (Int v = iv.lo; v <= hi; ++v) {
            if (--budget < 0) throw ScanBudgetExceeded{};
            prefix[depth] = v;
            if (!congruences_ok(depth + 1)) continue;
            if (scan(depth + 1, witness)) return true;
        }
        return false;
    }
};

// --- Cooper-style fallback -------------------------------------------------

std::vector<Cell> cooper_eliminate_last(const Cell& cell);

bool cooper_cell_empty(const Cell& cell) {
    Cell normalized = cell;
    if (!normalized.normalize()) return true;
    if (normalized.arity == 0) return false;  // normalize() handled all constant atoms
    for (auto& next : cooper_eliminate_last(normalized)) {
        if (!cooper_cell_empty(next)) return false;
    }
    return true;
}

std::vector<Cell> cooper_eliminate_last(const Cell& cell) {
    std::size_t last = cell.arity - 1;
    bool mentions = false;
    for (const auto& atom : cell.inequalities) mentions = mentions || atom.coeffs[last] != 0;
    for (const auto& atom : cell.congruences) mentions = mentions || atom.coeffs[last] != 0;
    if (!mentions) {
        Cell dropped;
        dropped.arity = last;
        for (const auto& atom : cell.inequalities)
            dropped.inequalities.push_back(
                LinearAtom{{atom.coeffs.begin(), atom.coeffs.end() - 1}, atom.constant});
        for (const auto& atom : cell.congruences)
            dropped.congruences.push_back(
                CongruenceAtom{{atom.coeffs.begin(), atom.coeffs.end() - 1}, atom.residue, atom.modulus});
        return {dropped};
    }

    Int delta = 1;
    for (const auto& atom : cell.inequalities)
        if (atom.coeffs[last] != 0) delta = lcm(delta, abs(atom.coeffs[last]));
    for (const auto& atom : cell.congruences)
        if (atom.coeffs[last] != 0) delta = lcm(delta, abs(atom.coeffs[last]));

    // After scaling to coefficient ±1 on z = delta·x_last:
    //   lower bounds  z >= -t(y)   (stored as affine t)
    //   upper bounds  z <= t(y)
    //   congruences   z ≡ t(y) (mod m)
    struct Affine {
        std::vector<Int> coeffs;  // over the remaining variables
        Int constant;
    };
    std::vector<Affine> lowers, uppers;
    struct CongOnZ {
        Affine rhs;
        Int modulus;
    };
    std::vector<CongOnZ> congs;
    std::vector<LinearAtom> rest_ineqs;
    std::vector<CongruenceAtom> rest_congs;

    auto rest_of = [&](const std::vector<Int>& coeffs) {
        return std::vector<Int>(coeffs.begin(), coeffs.end() - 1);
    };

    for (const auto& atom : cell.inequalities) {
        const Int& a = atom.coeffs[last];
        if (a == 0) {
            rest_ineqs.push_back(LinearAtom{rest_of(atom.coeffs), atom.constant});
            continue;
        }
        Int scale = delta / abs(a);
        Affine t;
        t.coeffs = rest_of(atom.coeffs);
        for (auto& c : t.coeffs) c *= scale;
        t.constant = atom.constant * scale;
        if (a > 0) {
            lowers.push_back(std::move(t));  // z + t >= 0
        } else {
            uppers.push_back(std::move(t));  // -z + t >= 0
        }
    }
    lowers.push_back(Affine{std::vector<Int>(last, 0), 0});  // z >= 0 (x_last >= 0)

    for (const auto& atom : cell.congruences) {
        const Int& b = atom.coeffs[last];
        if (b == 0) {
            rest_congs.push_back(CongruenceAtom{rest_of(atom.coeffs), atom.residue, atom.modulus});
            continue;
        }
        Int scale = delta / abs(b);
        Int sign = b > 0 ? 1 : -1;
        // b·x + s(y) ≡ r (mod m), scaled: ±z + scale·s(y) ≡ scale·r (mod scale·m)
        // then z ≡ sign·(scale·r - scale·s(y)) (mod scale·m).
        Affine rhs;
        rhs.coeffs = rest_of(atom.coeffs);
        for (auto& c : rhs.coeffs) c *= -scale * sign;
        rhs.constant = scale * sign * atom.residue;
        congs.push_back(CongOnZ{std::move(rhs), scale * atom.modulus});
    }
    if (delta > 1) congs.push_back(CongOnZ{Affine{std::vector<Int>(last, 0), 0}, delta});  // z ≡ 0 (mod delta)

    Int period = 1;
    for (const auto& c : congs) period = lcm(period, c.modulus);

    std::vector<Cell> out;
    for (const auto& low : lowers) {
        for (Int d = 0; d < period; ++d) {
            // Substitute z := -low(y) + d.
            Cell next;
            next.arity = last;
            next.inequalities = rest_ineqs;
            next.congruences = rest_congs;
            // Lower bounds: z + t >= 0  ->  t - low + d >= 0.
            for (const auto& t : lowers) {
                LinearAtom ineq;
                ineq.coeffs.resize(last);
                for (std::size_t i = 0; i < last; ++i) ineq.coeffs[i] = t.coeffs[i] - low.coeffs[i];
                ineq.constant = t.constant - low.constant + d;
                next.inequalities.push_back(std::move(ineq));
            }
            // Upper bounds: -z + t >= 0  ->  t + low - d >= 0.
            for (const auto& t : uppers) {
                LinearAtom ineq;
                ineq.coeffs.resize(last);
                for (std::size_t i = 0; i < last; ++i) ineq.coeffs[i] = t.coeffs[i] + low.coeffs[i];
                ineq.constant = t.constant + low.constant - d;
                next.inequalities.push_back(std::move(ineq));
            }
            // Congruences: z ≡ rhs (mod m)  ->  -low + d ≡ rhs (mod m).
            for (const auto& c : congs) {
                CongruenceAtom atom;
                atom.coeffs.resize(last);
                for (std::size_t i = 0; i < last; ++i) atom.coeffs[i] = -low.coeffs[i] - c.rhs.coeffs[i];
                atom.modulus = c.modulus;
                atom.residue = mod_floor(c.rhs.constant + low.constant - d, c.modulus);
                next.congruences.push_back(std::move(atom));
            }
            out.push_back(std::move(next));
        }
    }
    return out;
}

}  // namespace

// Witness bound for a satisfiable cell.
//
//   B = L · (k+2)! · (2k+3) · Δ
//
// where k is the arity, L the lcm of the congruence moduli (1 when there are
// none), and Δ the largest absolute value of any r×r minor, r <= k+1, of the
// inequality matrix [A | c] (at least 1). Rationale: the integer points of the
// real relaxation decompose into base points of minor-bounded size plus the
// monoid generated by the recession cone's Hilbert basis, whose members are
// also minor-bounded; replacing each generator multiple by its value mod L
// preserves all congruences and every inequality, so some witness survives
// within the stated multiple of Δ and L. The factorial and linear factors
// absorb the Hilbert-basis and Carathéodory constants for small k.
Int cell_witness_bound(const Cell& cell) {
    std::size_t k = cell.arity;
    std::size_t m = cell.inequalities.size();
    Int delta = 1;

    // Exact minors of [A | c], all orders up to min(m, k+1).
    std::size_t cols = k + 1;
    std::size_t max_order = std::min(m, cols);
    std::vector<std::vector<Int>> matrix(m, std::vector<Int>(cols));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) matrix[i][j] = cell.inequalities[i].coeffs[j];
        matrix[i][k] = cell.inequalities[i].constant;
    }
    std::function<Int(const std::vector<std::size_t>&, const std::vector<std::size_t>&)> det =
        [&](const std::vector<std::size_t>& rows, const std::vector<std::size_t>& colsel) -> Int {
        if (rows.size() == 1) return matrix[rows[0]][colsel[0]];
        Int acc = 0;
        Int sign = 1;
        for (std::size_t j = 0; j < colsel.size(); ++j) {
            std::vector<std::size_t> subrows(rows.begin() + 1, rows.end());
            std::vector<std::size_t> subcols;
            for (std::size_t jj = 0; jj < colsel.size(); ++jj)
                if (jj != j) subcols.push_back(colsel[jj]);
            acc += sign * matrix[rows[0]][colsel[j]] * det(subrows, subcols);
            sign = -sign;
        }
        return acc;
    };
    std::vector<std::size_t> rowsel, colsel;
    std::function<void(std::size_t, std::size_t, std::size_t)> enumerate_cols =
        [&](std::size_t order, std::size_t start, std::size_t chosen) {
            if (chosen == order) {
                Int d = abs(det(rowsel, colsel));
                if (d > delta) delta = d;
                return;
            }
            for (std::size_t j = start; j < cols; ++j) {
                colsel.push_back(j);
                enumerate_cols(order, j + 1, chosen + 1);
                colsel.pop_back();
            }
        };
    std::function<void(std::size_t, std::size_t, std::size_t)> enumerate_rows =
        [&](std::size_t order, std::size_t start, std::size_t chosen) {
            if (chosen == order) {
                enumerate_cols(order, 0, 0);
                return;
            }
            for (std::size_t i = start; i < m; ++i) {
                rowsel.push_back(i);
                enumerate_rows(order, i + 1, chosen + 1);
                rowsel.pop_back();
            }
        };
    for (std::size_t order = 1; order <= max_order; ++order) enumerate_rows(order, 0, 0);

    Int big_l = 1;
    for (const auto& atom : cell.congruences) big_l = lcm(big_l, atom.modulus);

    Int fact = 1;
    for (std::size_t i = 2; i <= k + 2; ++i) fact *= Int(i);
    return big_l * fact * Int(2 * k + 3) * delta;
}

std::optional<std::vector<Int>> cell_witness(const Cell& cell) {
    Cell normalized = cell;
    if (!normalized.normalize()) return std::nullopt;
    if (normalized.arity == 0) return std::vector<Int>{};

    FmCascade cascade = build_cascade(normalized);
    if (cascade.infeasible) return std::nullopt;
    if (!cascade.levels[0].empty()) {
        for (const auto& row : cascade.levels[0])
            if (row.constant < 0) return std::nullopt;
    }

    Scanner scanner{normalized, cascade, cell_witness_bound(normalized), 4'000'000, {}, {}};
    scanner.prefix.assign(normalized.arity, 0);
    scanner.congruences_by_depth.assign(normalized.arity + 1, {});
    for (std::size_t idx = 0; idx < normalized.congruences.size(); ++idx) {
        const auto& atom = normalized.congruences[idx];
        std::size_t lastnz = 0;
        bool any = false;
        for (std::size_t i = 0; i < normalized.arity; ++i)
            if (atom.coeffs[i] != 0) {
                lastnz = i;
                any = true;
            }
        if (!any) continue;                    // constant congruence: normalize handled it
        if (lastnz + 1 == normalized.arity) continue;  // solved exactly at the leaf
        scanner.congruences_by_depth[lastnz + 1].push_back(idx);
    }
    std::vector<Int> witness;
    try {
        if (scanner.scan(0, &witness)) return witness;
        return std::nullopt;
    } catch (const ScanBudgetExceeded&) {
        // Exact fallback; the budget guards the scan against degenerate cells.
        if (cooper_cell_empty(normalized)) return std::nullopt;
        // A witness is still wanted by some callers; retry the scan with the
        // knowledge that one exists, growing the budget geometrically.
        for (long long budget = 16'000'000;; budget *= 4) {
            Scanner retry = scanner;
            retry.budget = budget;
            retry.prefix.assign(normalized.arity, 0);
            try {
                std::vector<Int> w;
                if (retry.scan(0, &w)) return w;
                return std::nullopt;
            } catch (const ScanBudgetExceeded&) {
                continue;
            }
        }
    }
}

bool cell_is_empty(const Cell& cell) {
    Cell normalized = cell;
    if (!normalized.normalize()) return true;
    if (normalized.arity == 0) return false;
    FmCascade cascade = build_cascade(normalized);
    if (cascade.infeasible) return true;
    return !cell_witness(normalized).has_value();
}

}  // namespace detail

bool is_empty(const DefinableSet& set) {
    if (!set.is_symbolic()) {
        for (bool b : set.table())
            if (b) return false;
        return true;
    }
    for (const auto& cell : set.cells())
        if (!detail::cell_is_empty(cell)) return false;
    return true;
}

std::optional<std::vector<Int>> find_witness(const DefinableSet& set) {
    if (!set.is_symbolic()) throw std::invalid_argument("find_witness is symbolic-only");
    for (const auto& cell : set.cells()) {
        auto w = detail::cell_witness(cell);
        if (w) return w;
    }
    return std::nullopt;
}

bool sets_equal(const DefinableSet& a, const DefinableSet& b) {
    require_compatible(a, b);
    if (!a.is_symbolic()) return a.table() == b.table();
    return is_empty(set_difference(a, b)) && is_empty(set_difference(b, a));
}

std::optional<std::vector<Int>> difference_witness(const DefinableSet& a, const DefinableSet& b) {
    return find_witness(set_difference(a, b));
}

bool cone_has_positive_direction(const Cell& cell) {
    std::size_t k = cell.arity;
    if (k == 0) return true;
    std::vector<std::vector<Int>> rows;
    for (const auto& atom : cell.inequalities) {
        rows.push_back(atom.coeffs);  // a·d >= 0
    }
    // d_i >= 1 encoded as d_i - 1 >= 0.
    // Run plain rational FM over the combined system.
    struct R {
        std::vector<Int> coeffs;
        Int constant;
    };
    std::vector<R> sys;
    for (auto& coeffs : rows) sys.push_back(R{coeffs, 0});
    for (std::size_t i = 0; i < k; ++i) {
        R r;
        r.coeffs.assign(k, 0);
        r.coeffs[i] = 1;
        r.constant = -1;
        sys.push_back(std::move(r));
    }
    for (std::size_t var = k; var > 0; --var) {
        std::size_t v = var - 1;
        std::vector<R> zero, pos, neg;
        for (auto& r : sys) {
            if (r.coeffs[v] == 0)
                zero.push_back(r);
            else if (r.coeffs[v] > 0)
                pos.push_back(r);
            else
                neg.push_back(r);
        }
        std::vector<R> next = zero;
        for (const auto& p : pos)
            for (const auto& n : neg) {
                Int ap = p.coeffs[v];
                Int an = -n.coeffs[v];
                R combined;
                combined.coeffs.assign(k, 0);
                for (std::size_t i = 0; i < k; ++i) combined.coeffs[i] = an * p.coeffs[i] + ap * n.coeffs[i];
                combined.constant = an * p.constant + ap * n.constant;
                next.push_back(std::move(combined));
            }
        for (auto& r : next) r.coeffs[v] = 0;
        sys = std::move(next);
    }
    for (const auto& r : sys) {
        bool all_zero = true;
        for (const auto& c : r.coeffs)
            if (c != 0) all_zero = false;
        if (all_zero && r.constant < 0) return false;
    }
    return true;
}

TupleCursor::TupleCursor(std::size_t arity, const Int& bound) : arity_(arity), bound_(bound) {
    current_.assign(arity, 0);
}

bool TupleCursor::next(std::vector<Int>& out) {
    if (done_) return false;
    if (!started_) {
        started_ = true;
        out = current_;
        return true;
    }
    for (std::size_t i = arity_; i > 0; --i) {
        std::size_t idx = i - 1;
        if (current_[idx] < bound_) {
            ++current_[idx];
            for (std::size_t j = idx + 1; j < arity_; ++j) current_[j] = 0;
            out = current_;
            return true;
        }
    }
    done_ = true;
    return false;
}

std::size_t finite_table_size(const FiniteUniverse& u, std::size_t arity) {
    std::size_t size = 1;
    for (std::size_t i = 0; i < arity; ++i) size *= u.size();
    return size;
}

std::size_t finite_index(const FiniteUniverse& u, std::span<const Int> point) {
    std::size_t idx = 0;
    for (const auto& coord : point) {
        if (coord < 0 || coord >= Int(u.size())) throw std::out_of_range("element index out of range");
        idx = idx * u.size() + static_cast<std::size_t>(coord);
    }
    return idx;
}

std::vector<Int> finite_point(const FiniteUniverse& u, std::size_t arity, std::size_t index) {
    std::vector<Int> point(arity, 0);
    for (std::size_t i = arity; i > 0; --i) {
        point[i - 1] = Int(index % u.size());
        index /= u.size();
    }
    return point;
}

}  // namespace ultrext
