#include "extension.hpp"

#include <algorithm>

namespace ultrext {

void Model::add_function(const std::string& name, DefOp op) {
    if (op.is_symbolic() != is_symbolic()) throw std::invalid_argument("operation backend mismatch");
    if (!is_symbolic() && !(*op.universe() == *universe_))
        throw std::invalid_argument("operation universe mismatch");
    functions_.insert_or_assign(name, std::move(op));
}

void Model::add_relation(const std::string& name, DefinableSet set) {
    if (set.is_symbolic() != is_symbolic()) throw std::invalid_argument("relation backend mismatch");
    if (!is_symbolic() && !(*set.universe() == *universe_))
        throw std::invalid_argument("relation universe mismatch");
    relations_.insert_or_assign(name, std::move(set));
}

const DefOp& Model::function(const std::string& name) const {
    auto it = functions_.find(name);
    if (it == functions_.end()) throw std::invalid_argument("unknown function symbol: " + name);
    return it->second;
}

const DefinableSet& Model::relation(const std::string& name) const {
    auto it = relations_.find(name);
    if (it == relations_.end()) throw std::invalid_argument("unknown relation symbol: " + name);
    return it->second;
}

Signature Model::signature() const {
    Signature sig;
    for (const auto& [name, op] : functions_) sig.functions.push_back({name, op.arity()});
    for (const auto& [name, set] : relations_) sig.relations.push_back({name, set.arity()});
    return sig;
}

namespace {

void require_args(std::size_t arity, std::span<const UPoint> args, bool symbolic) {
    if (args.size() != arity) throw std::invalid_argument("argument count mismatch");
    for (const auto& p : args)
        if (p.is_symbolic() != symbolic) throw std::invalid_argument("argument backend mismatch");
}

}  // namespace

UPoint ext_map(const DefOp& op, std::span<const UPoint> args) {
    require_args(op.arity(), args, op.is_symbolic());
    if (!op.is_symbolic()) {
        std::vector<Int> values;
        for (const auto& p : args) values.push_back(p.value());
        return UPoint::principal_finite(op.codomain(), op.apply(values));
    }
    // Substitute principal arguments, highest position first.
    DefOp current = op;
    std::vector<UPoint> limits;
    for (const auto& p : args)
        if (p.is_limit()) limits.push_back(p);
    for (std::size_t i = args.size(); i > 0; --i) {
        if (args[i - 1].is_principal()) current = current.substituted(i - 1, args[i - 1].value());
    }
    if (limits.empty()) return UPoint::principal(current.apply(std::span<const Int>{}));

    QuantPrefix prefix;
    for (std::size_t i = 0; i < limits.size(); ++i) prefix.emplace_back(i, limits[i]);
    for (const auto& branch : current.branches()) {
        bool active = eval_prefix(prefix, DefinableSet::symbolic(limits.size(), {branch.guard}));
        if (!active) continue;
        bool constant = true;
        for (const auto& c : branch.coeffs)
            if (c != 0) constant = false;
        if (constant) return UPoint::principal(branch.constant);
        // Coarsest precision among the active limit arguments.
        Int modulus = 0;
        for (std::size_t i = 0; i < limits.size(); ++i)
            if (branch.coeffs[i] != 0) modulus = gcd(modulus, limits[i].modulus());
        Int value = branch.constant;
        for (std::size_t i = 0; i < limits.size(); ++i) value += branch.coeffs[i] * limits[i].residue();
        return UPoint::limit(mod_floor(value, modulus), modulus);
    }
    throw std::logic_error("total operation has no eventually active branch");
}

bool ext_rel_tilde(const DefinableSet& relation, std::span<const UPoint> args) {
    require_args(relation.arity(), args, relation.is_symbolic());
    QuantPrefix prefix;
    for (std::size_t i = 0; i < args.size(); ++i) prefix.emplace_back(i, args[i]);
    return eval_prefix(prefix, relation);
}

namespace {

// One residue combination of the star decision: substitute x_i = rho_i +
// L_i·y_i; congruences become constant checks, inequalities stay linear in y.
std::optional<Cell> star_cell_at_combo(const Cell& cell, const std::vector<Int>& rho,
                                       const std::vector<Int>& big_l) {
    std::size_t d = cell.arity;
    Cell out;
    out.arity = d;
    for (const auto& atom : cell.congruences) {
        Int acc = 0;
        for (std::size_t i = 0; i < d; ++i) acc += atom.coeffs[i] * rho[i];
        if (mod_floor(acc, atom.modulus) != atom.residue) return std::nullopt;
    }
    for (const auto& atom : cell.inequalities) {
        LinearAtom next;
        next.coeffs.resize(d);
        next.constant = atom.constant;
        for (std::size_t i = 0; i < d; ++i) {
            next.coeffs[i] = atom.coeffs[i] * big_l[i];
            next.constant += atom.coeffs[i] * rho[i];
        }
        out.inequalities.push_back(std::move(next));
    }
    return out;
}

bool star_verdict_at_combo(const DefinableSet& constrained, const std::vector<Int>& rho,
                           const std::vector<Int>& big_l) {
    for (const auto& cell : constrained.cells()) {
        auto combo_cell = star_cell_at_combo(cell, rho, big_l);
        if (!combo_cell) continue;
        if (detail::cell_is_empty(*combo_cell)) continue;
        if (cone_has_positive_direction(*combo_cell)) return true;
    }
    return false;
}

}  // namespace

bool ext_rel_star(const DefinableSet& relation, std::span<const UPoint> args) {
    require_args(relation.arity(), args, relation.is_symbolic());
    if (!relation.is_symbolic()) {
        std::vector<Int> values;
        for (const auto& p : args) values.push_back(p.value());
        return membership(values, relation);
    }
    // Pin principal coordinates; the star condition concerns the tail
    // behavior of the remaining limit coordinates only.
    DefinableSet current = relation;
    std::vector<UPoint> limits;
    for (const auto& p : args)
        if (p.is_limit()) limits.push_back(p);
    for (std::size_t i = args.size(); i > 0; --i)
        if (args[i - 1].is_principal()) current = section(current, i - 1, args[i - 1].value());
    std::size_t d = limits.size();
    if (d == 0) return truth_value(current);

    // Intersect with the generating progressions.
    Cell progression = Cell::full(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (limits[i].modulus() == 1) continue;
        CongruenceAtom atom;
        atom.coeffs.assign(d, 0);
        atom.coeffs[i] = 1;
        atom.residue = limits[i].residue();
        atom.modulus = limits[i].modulus();
        progression.congruences.push_back(std::move(atom));
    }
    DefinableSet constrained =
        set_intersect(current, DefinableSet::symbolic(d, {progression}));

    // Residue refinements that could distinguish finer congruences of the
    // relation. All refinements must agree, else the verdict is undetermined
    // at the arguments' precision.
    std::vector<Int> big_l(d);
    for (std::size_t i = 0; i < d; ++i) {
        big_l[i] = limits[i].modulus();
        for (const auto& cell : constrained.cells())
            for (const auto& atom : cell.congruences)
                if (atom.coeffs[i] != 0) big_l[i] = lcm(big_l[i], atom.modulus);
    }

    std::vector<Int> rho(d);
    std::optional<bool> agreed;
    std::vector<Int> counter(d, 0);
    bool more = true;
    while (more) {
        for (std::size_t i = 0; i < d; ++i)
            rho[i] = limits[i].residue() + counter[i] * limits[i].modulus();
        bool verdict = star_verdict_at_combo(constrained, rho, big_l);
        if (!agreed) {
            agreed = verdict;
        } else if (*agreed != verdict) {
            Int needed = 1;
            for (std::size_t i = 0; i < d; ++i) needed = lcm(needed, big_l[i]);
            throw PrecisionError(needed);
        }
        // Advance the mixed-radix counter over the refinement classes.
        more = false;
        for (std::size_t i = d; i > 0; --i) {
            std::size_t idx = i - 1;
            Int radix = big_l[idx] / limits[idx].modulus();
            if (counter[idx] + 1 < radix) {
                ++counter[idx];
                for (std::size_t j = idx + 1; j < d; ++j) counter[j] = 0;
                more = true;
                break;
            }
        }
    }
    return *agreed;
}

UPoint ExtendedModel::apply(const std::string& function_name, std::span<const UPoint> args) const {
    return ext_map(base_.function(function_name), args);
}

bool ExtendedModel::holds(const std::string& relation_name, std::span<const UPoint> args) const {
    const DefinableSet& rel = base_.relation(relation_name);
    return mode_ == ExtMode::Tilde ? ext_rel_tilde(rel, args) : ext_rel_star(rel, args);
}

ExtendedModel extend_model(Model base, ExtMode mode) { return ExtendedModel(std::move(base), mode); }

UPoint ext_hom(const DefOp& unary_map, const UPoint& point) { return pushforward(unary_map, point); }

std::vector<UPoint> sample_points(bool symbolic, const UniversePtr& universe,
                                  const Int& principal_bound, const Int& modulus_bound) {
    std::vector<UPoint> points;
    if (!symbolic) {
        for (Int i = 0; i < Int(universe->size()); ++i)
            points.push_back(UPoint::principal_finite(universe, i));
        return points;
    }
    for (Int n = 0; n <= principal_bound; ++n) points.push_back(UPoint::principal(n));
    for (Int m = 1; m <= modulus_bound; ++m)
        for (Int r = 0; r < m; ++r) points.push_back(UPoint::limit(r, m));
    return points;
}

namespace {

std::string tuple_to_string(std::span<const UPoint> args) {
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += point_to_string(args[i]);
    }
    out += ")";
    return out;
}

bool next_tuple_index(std::vector<std::size_t>& idx, std::size_t radix) {
    for (std::size_t i = idx.size(); i > 0; --i) {
        if (++idx[i - 1] < radix) {
            for (std::size_t j = i; j < idx.size(); ++j) idx[j] = 0;
            return true;
        }
        idx[i - 1] = 0;
    }
    return false;
}

}  // namespace

ClopenVerdict is_right_clopen(const RelationOracle& oracle, std::size_t arity,
                              const DefinableSet& candidate, const Int& bound) {
    auto pool = sample_points(candidate.is_symbolic(), candidate.universe(), bound, bound);
    std::vector<std::size_t> idx(arity, 0);
    std::vector<UPoint> args;
    do {
        args.clear();
        for (std::size_t i : idx) args.push_back(pool[i]);
        try {
            bool lhs = oracle(args);
            bool rhs = ext_rel_tilde(candidate, args);
            if (lhs != rhs) return ClopenVerdict{true, tuple_to_string(args)};
        } catch (const PrecisionError&) {
            // not decidable at this precision on either side: no claim
        }
    } while (next_tuple_index(idx, pool.size()));
    return ClopenVerdict{};
}

HomVerdict check_hom(const DefOp& h, const Model& source, const Model& target, ExtMode mode,
                     const HomSampleConfig& config) {
    if (h.arity() != 1) throw std::invalid_argument("homomorphism map must be unary");
    HomVerdict verdict;
    verdict.exhaustive = !source.is_symbolic();
    auto pool = sample_points(source.is_symbolic(), source.universe(), config.principal_bound,
                              config.modulus_bound);
    ExtendedModel ext_a = extend_model(source, mode);
    ExtendedModel ext_b = extend_model(target, mode);

    auto sig = source.signature();
    for (const auto& symbol : sig.functions) {
        if (!target.has_function(symbol.name))
            throw std::invalid_argument("target model misses function symbol: " + symbol.name);
        std::vector<std::size_t> idx(symbol.arity, 0);
        std::vector<UPoint> args, mapped;
        do {
            args.clear();
            mapped.clear();
            for (std::size_t i : idx) args.push_back(pool[i]);
            try {
                for (const auto& p : args) mapped.push_back(pushforward(h, p));
                UPoint lhs = pushforward(h, ext_a.apply(symbol.name, args));
                UPoint rhs = ext_b.apply(symbol.name, mapped);
                if (!equal_points(lhs, rhs)) {
                    verdict.passed = false;
                    verdict.counterexample = symbol.name + tuple_to_string(args);
                    return verdict;
                }
            } catch (const PrecisionError& e) {
                verdict.precision_notes.push_back(symbol.name + tuple_to_string(args) +
                                                  ": needs mod " + e.required_modulus().str());
            }
        } while (next_tuple_index(idx, pool.size()));
    }
    for (const auto& symbol : sig.relations) {
        if (!target.has_relation(symbol.name))
            throw std::invalid_argument("target model misses relation symbol: " + symbol.name);
        std::vector<std::size_t> idx(symbol.arity, 0);
        std::vector<UPoint> args, mapped;
        do {
            args.clear();
            mapped.clear();
            for (std::size_t i : idx) args.push_back(pool[i]);
            try {
                for (const auto& p : args) mapped.push_back(pushforward(h, p));
                if (ext_a.holds(symbol.name, args) && !ext_b.holds(symbol.name, mapped)) {
                    verdict.passed = false;
                    verdict.counterexample = symbol.name + tuple_to_string(args);
                    return verdict;
                }
            } catch (const PrecisionError& e) {
                verdict.precision_notes.push_back(symbol.name + tuple_to_string(args) +
                                                  ": needs mod " + e.required_modulus().str());
            }
        } while (next_tuple_index(idx, pool.size()));
    }
    return verdict;
}

}  // namespace ultrext
