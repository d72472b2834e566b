#include "oracle.hpp"

#include "engine.hpp"

#include <algorithm>
#include <mutex>
#include <thread>

namespace ultrext {

TriState oracle_in_ultrafilter(const DefinableSet& unary_set, const UPoint& point,
                               const TruncationConfig& config) {
    if (point.is_principal()) {
        Int pt[1] = {point.value()};
        return membership(std::span<const Int>(pt, 1), unary_set) ? TriState::True : TriState::False;
    }
    PeriodProfile profile = period_profile(unary_set);
    Int k0 = 0;
    if (profile.threshold > point.residue())
        k0 = ceil_div(profile.threshold - point.residue(), point.modulus());
    bool first = true;
    bool value = false;
    for (Int k = k0; k <= k0 + config.width; ++k) {
        Int x[1] = {point.residue() + point.modulus() * k};
        bool v = membership(std::span<const Int>(x, 1), unary_set);
        if (first) {
            value = v;
            first = false;
        } else if (v != value) {
            return TriState::Unstable;
        }
    }
    return value ? TriState::True : TriState::False;
}

TriState oracle_forall_u(const UPoint& point, const DefinableSet& unary_set,
                         const TruncationConfig& config) {
    return oracle_in_ultrafilter(unary_set, point, config);
}

bool oracle_star_witness(const DefinableSet& relation, std::span<const UPoint> args,
                         const Int& threshold) {
    std::vector<std::vector<Int>> coords(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i].is_principal()) {
            coords[i] = {args[i].value()};
            continue;
        }
        const Int& m = args[i].modulus();
        Int start = args[i].residue();
        if (start < threshold) start += m * ceil_div(threshold - start, m);
        for (Int x = start; x <= 9 * threshold + 90; x += m) coords[i].push_back(x);
        if (coords[i].empty()) return false;
    }
    std::vector<std::size_t> idx(args.size(), 0);
    std::vector<Int> pt(args.size());
    while (true) {
        for (std::size_t i = 0; i < args.size(); ++i) pt[i] = coords[i][idx[i]];
        if (membership(pt, relation)) return true;
        std::size_t i = args.size();
        for (; i > 0; --i) {
            if (++idx[i - 1] < coords[i - 1].size()) break;
            idx[i - 1] = 0;
        }
        if (i == 0) return false;
    }
}

namespace {

// Enumerates members of the principal ultrafilter at `element`: all subsets
// of the universe containing it, encoded as bitmasks.
std::vector<std::size_t> principal_members(std::size_t element, std::size_t universe_size) {
    std::vector<std::size_t> members;
    for (std::size_t mask = 0; mask < (std::size_t(1) << universe_size); ++mask)
        if (mask & (std::size_t(1) << element)) members.push_back(mask);
    return members;
}

// Substitutes every coordinate except `position` with the parameter tuple,
// highest coordinate first so earlier indices stay valid.
DefinableSet section_at(const DefinableSet& set, std::size_t position, const std::vector<Int>& y) {
    DefinableSet sec = set;
    for (std::size_t i = set.arity(); i-- > 0;) {
        if (i == position) continue;
        std::size_t yi = i > position ? i - 1 : i;
        sec = section(sec, i, y[yi]);
    }
    return sec;
}

}  // namespace

FiniteExtensionTables oracle_finite_extension(const Model& model, ExtMode mode) {
    if (model.is_symbolic()) throw std::invalid_argument("finite extension oracle is finite-only");
    const auto& u = *model.universe();
    FiniteExtensionTables tables;
    for (const auto& [name, op] : model.functions()) {
        std::size_t n = finite_table_size(u, op.arity());
        std::vector<Int> table(n);
        for (std::size_t idx = 0; idx < n; ++idx) {
            auto tuple = finite_point(u, op.arity(), idx);
            // Literal reading of the extension at principal points: the image
            // is the unique y whose singleton passes the nested quantifiers,
            // and each principal quantifier is substitution.
            Int image = -1;
            for (Int y = 0; y < Int(u.size()); ++y) {
                if (op.apply(tuple) == y) {
                    image = y;
                    break;
                }
            }
            table[idx] = image;
        }
        tables.functions.emplace(name, std::move(table));
    }
    for (const auto& [name, rel] : model.relations()) {
        std::size_t n = finite_table_size(u, rel.arity());
        std::vector<bool> table(n);
        for (std::size_t idx = 0; idx < n; ++idx) {
            auto tuple = finite_point(u, rel.arity(), idx);
            if (mode == ExtMode::Tilde) {
                // Nested ultrafilter quantifiers at principal points reduce to
                // substitution.
                table[idx] = membership(tuple, rel);
            } else {
                // Full member/witness expansion of the star prefix:
                // (forall A_i in u_i)(exists x_i in A_i) R(x...).
                std::vector<std::vector<std::size_t>> member_sets;
                for (const auto& c : tuple)
                    member_sets.push_back(
                        principal_members(static_cast<std::size_t>(c.convert_to<long>()), u.size()));
                std::vector<std::size_t> choice(tuple.size(), 0);
                bool every_choice_witnessed = true;
                while (true) {
                    std::vector<Int> candidate(tuple.size());
                    std::function<bool(std::size_t)> search = [&](std::size_t depth) {
                        if (depth == tuple.size()) return membership(candidate, rel);
                        std::size_t mask = member_sets[depth][choice[depth]];
                        for (std::size_t e = 0; e < u.size(); ++e) {
                            if (!(mask & (std::size_t(1) << e))) continue;
                            candidate[depth] = Int(e);
                            if (search(depth + 1)) return true;
                        }
                        return false;
                    };
                    if (!search(0)) {
                        every_choice_witnessed = false;
                        break;
                    }
                    std::size_t i = tuple.size();
                    for (; i > 0; --i) {
                        if (++choice[i - 1] < member_sets[i - 1].size()) break;
                        choice[i - 1] = 0;
                    }
                    if (i == 0) break;
                }
                table[idx] = every_choice_witnessed;
            }
        }
        tables.relations.emplace(name, std::move(table));
    }
    return tables;
}

bool oracle_finite_hom(const DefOp& h, const Model& source, const Model& target) {
    const auto& u = *source.universe();
    for (const auto& [name, op] : source.functions()) {
        const DefOp& op_b = target.function(name);
        TupleCursor cursor(op.arity(), Int(u.size()) - 1);
        std::vector<Int> tuple;
        while (cursor.next(tuple)) {
            std::vector<Int> mapped(tuple.size());
            for (std::size_t i = 0; i < tuple.size(); ++i) {
                Int pt[1] = {tuple[i]};
                mapped[i] = h.apply(std::span<const Int>(pt, 1));
            }
            Int lhs_arg[1] = {op.apply(tuple)};
            if (h.apply(std::span<const Int>(lhs_arg, 1)) != op_b.apply(mapped)) return false;
        }
    }
    for (const auto& [name, rel] : source.relations()) {
        const DefinableSet& rel_b = target.relation(name);
        TupleCursor cursor(rel.arity(), Int(u.size()) - 1);
        std::vector<Int> tuple;
        while (cursor.next(tuple)) {
            if (!membership(tuple, rel)) continue;
            std::vector<Int> mapped(tuple.size());
            for (std::size_t i = 0; i < tuple.size(); ++i) {
                Int pt[1] = {tuple[i]};
                mapped[i] = h.apply(std::span<const Int>(pt, 1));
            }
            if (!membership(mapped, rel_b)) return false;
        }
    }
    return true;
}

// --- Generators ---------------------------------------------------------------

std::uint64_t CaseGenerator::next() {
    state_ ^= state_ << 13;
    state_ ^= state_ >> 7;
    state_ ^= state_ << 17;
    return state_;
}

Int CaseGenerator::int_in(long lo, long hi) {
    return Int(lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1)));
}

DefinableSet CaseGenerator::random_set(std::size_t arity, std::size_t max_cells, long coeff_bound,
                                       long const_bound) {
    const long moduli[4] = {2, 3, 4, 6};
    std::size_t ncells = 1 + static_cast<std::size_t>(next() % max_cells);
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < ncells; ++i) {
        Cell c;
        c.arity = arity;
        std::size_t nineq = next() % 3;
        for (std::size_t j = 0; j < nineq; ++j) {
            LinearAtom atom;
            for (std::size_t v = 0; v < arity; ++v)
                atom.coeffs.push_back(int_in(-coeff_bound, coeff_bound));
            atom.constant = int_in(-const_bound, const_bound);
            c.inequalities.push_back(std::move(atom));
        }
        if (next() % 2 == 0) {
            CongruenceAtom atom;
            for (std::size_t v = 0; v < arity; ++v) atom.coeffs.push_back(int_in(-3, 3));
            atom.modulus = Int(moduli[next() % 4]);
            atom.residue = mod_floor(int_in(0, 11), atom.modulus);
            c.congruences.push_back(std::move(atom));
        }
        cells.push_back(std::move(c));
    }
    return DefinableSet::symbolic(arity, std::move(cells));
}

DefinableSet CaseGenerator::small_set(std::size_t arity) {
    return random_set(arity, 2, 2, 6);
}

UPoint CaseGenerator::random_point(bool allow_principal, long max_modulus) {
    if (allow_principal && next() % 3 == 0) return UPoint::principal(int_in(0, 8));
    Int m = int_in(1, max_modulus);
    return UPoint::limit(mod_floor(int_in(0, 11), m), m);
}

Model CaseGenerator::random_finite_model(const UniversePtr& universe, int max_symbols,
                                         std::size_t max_arity) {
    Model model(universe);
    int symbols = 1 + static_cast<int>(next() % static_cast<std::uint64_t>(max_symbols));
    for (int s = 0; s < symbols; ++s) {
        std::size_t arity = 1 + next() % max_arity;
        std::string name = (s == 0 ? "P" : "Q");
        if (next() % 2 == 0) {
            std::size_t n = finite_table_size(*universe, arity);
            std::vector<Int> table(n);
            for (auto& v : table) v = int_in(0, static_cast<long>(universe->size()) - 1);
            model.add_function(name, DefOp::finite(universe, arity, std::move(table)));
        } else {
            std::size_t n = finite_table_size(*universe, arity);
            std::vector<bool> table(n);
            for (std::size_t i = 0; i < n; ++i) table[i] = next() % 2 == 0;
            model.add_relation(name, DefinableSet::finite(universe, arity, std::move(table)));
        }
    }
    return model;
}

Formula CaseGenerator::random_quantifier_free(const std::vector<Signature::Symbol>& relations,
                                              const std::vector<Signature::Symbol>& functions,
                                              const std::vector<std::string>& variables, int depth) {
    auto random_term = [&](auto&& self, int term_depth) -> Term {
        if (term_depth <= 0 || functions.empty() || next() % 2 == 0)
            return Term::variable(variables[next() % variables.size()]);
        const auto& f = functions[next() % functions.size()];
        std::vector<Term> args;
        for (std::size_t i = 0; i < f.arity; ++i) args.push_back(self(self, term_depth - 1));
        return Term::apply(f.name, std::move(args));
    };
    if (depth <= 0 || next() % 3 == 0) {
        if (!relations.empty() && next() % 3 != 0) {
            const auto& r = relations[next() % relations.size()];
            std::vector<Term> terms;
            for (std::size_t i = 0; i < r.arity; ++i) terms.push_back(random_term(random_term, 1));
            return Formula::atom(r.name, std::move(terms));
        }
        return Formula::equal(random_term(random_term, 1), random_term(random_term, 1));
    }
    switch (next() % 4) {
        case 0:
            return Formula::negation(random_quantifier_free(relations, functions, variables, depth - 1));
        case 1:
            return Formula::conjunction(
                random_quantifier_free(relations, functions, variables, depth - 1),
                random_quantifier_free(relations, functions, variables, depth - 1));
        case 2:
            return Formula::disjunction(
                random_quantifier_free(relations, functions, variables, depth - 1),
                random_quantifier_free(relations, functions, variables, depth - 1));
        default:
            return Formula::implication(
                random_quantifier_free(relations, functions, variables, depth - 1),
                random_quantifier_free(relations, functions, variables, depth - 1));
    }
}

DefinableSet shrink_set(const DefinableSet& set,
                        const std::function<bool(const DefinableSet&)>& fails) {
    DefinableSet current = set;
    bool progressed = true;
    while (progressed) {
        progressed = false;
        auto cells = current.cells();
        // Drop whole cells first, then zero out coefficients and constants.
        for (std::size_t i = 0; i < cells.size() && cells.size() > 1; ++i) {
            auto reduced = cells;
            reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(i));
            DefinableSet candidate = DefinableSet::symbolic(current.arity(), reduced);
            if (fails(candidate)) {
                current = candidate;
                progressed = true;
                break;
            }
        }
        if (progressed) continue;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            Cell cell = cells[i];
            for (auto* atoms = &cell.inequalities; atoms; atoms = nullptr) {
                for (std::size_t a = 0; a < atoms->size(); ++a) {
                    for (std::size_t v = 0; v <= current.arity(); ++v) {
                        Cell trial_cell = cells[i];
                        Int& slot = v < current.arity() ? trial_cell.inequalities[a].coeffs[v]
                                                        : trial_cell.inequalities[a].constant;
                        if (slot == 0) continue;
                        slot = 0;
                        auto trial_cells = cells;
                        trial_cells[i] = trial_cell;
                        DefinableSet candidate = DefinableSet::symbolic(current.arity(), trial_cells);
                        if (fails(candidate)) {
                            current = candidate;
                            progressed = true;
                            break;
                        }
                    }
                    if (progressed) break;
                }
            }
            if (progressed) break;
        }
    }
    return current;
}

// --- Canonical serialization ---------------------------------------------------

namespace {

std::string variable_name(std::size_t index, std::size_t arity) {
    static const char* names[4] = {"x", "y", "z", "w"};
    if (arity <= 4) return names[index];
    return "v" + std::to_string(index);
}

std::string linear_sum(const std::vector<Int>& coeffs, const Int& constant, std::size_t arity) {
    std::string out;
    bool first = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0) continue;
        Int a = coeffs[i];
        if (first) {
            if (a < 0) out += "-";
        } else {
            out += a < 0 ? " - " : " + ";
        }
        Int mag = abs(a);
        if (mag != 1) out += mag.str() + "*";
        out += variable_name(i, arity);
        first = false;
    }
    if (constant != 0 || first) {
        if (first) {
            out += constant.str();
        } else {
            out += constant < 0 ? " - " : " + ";
            out += Int(abs(constant)).str();
        }
    }
    return out;
}

}  // namespace

std::string set_to_string(const DefinableSet& set) {
    std::string vars;
    for (std::size_t i = 0; i < set.arity(); ++i) {
        if (i) vars += ",";
        vars += variable_name(i, set.arity());
    }
    if (!set.is_symbolic()) {
        std::string out = "{";
        bool first = true;
        for (std::size_t idx = 0; idx < set.table().size(); ++idx) {
            if (!set.table()[idx]) continue;
            if (!first) out += ", ";
            first = false;
            auto point = finite_point(*set.universe(), set.arity(), idx);
            out += "(";
            for (std::size_t j = 0; j < point.size(); ++j) {
                if (j) out += ",";
                out += set.universe()->label(static_cast<std::size_t>(point[j].convert_to<long>()));
            }
            out += ")";
        }
        return out + "}";
    }
    if (set.cells().empty()) return "{" + vars + " : false}";
    std::string out;
    for (std::size_t c = 0; c < set.cells().size(); ++c) {
        const Cell& cell = set.cells()[c];
        if (c) out += " | ";
        out += "{" + vars + " : ";
        bool first = true;
        for (const auto& atom : cell.inequalities) {
            if (!first) out += ", ";
            first = false;
            out += linear_sum(atom.coeffs, atom.constant, set.arity()) + " >= 0";
        }
        for (const auto& atom : cell.congruences) {
            if (!first) out += ", ";
            first = false;
            out += linear_sum(atom.coeffs, 0, set.arity()) + " = " + atom.residue.str() + " mod " +
                   atom.modulus.str();
        }
        if (first) out += "true";
        out += "}";
    }
    return out;
}

// --- Suite registry -------------------------------------------------------------

namespace {

std::map<std::string, SuiteFn>& mutable_registry() {
    static std::map<std::string, SuiteFn> registry;
    return registry;
}

void add_failure(Report& report, std::string description) {
    if (report.failures.size() < 10) report.failures.push_back(std::move(description));
}

// -- individual suites --

Report suite_boolean_laws(int trials, std::uint64_t seed) {
    Report report{"boolean-laws"};
    CaseGenerator gen(seed);
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        std::size_t arity = 1 + t % 2;
        auto a = gen.random_set(arity);
        auto b = gen.random_set(arity);
        auto dm = set_complement(set_union(a, b));
        auto dm_rhs = set_intersect(set_complement(a), set_complement(b));
        auto dc = set_complement(set_complement(a));
        Int bound = arity == 1 ? 50 : 12;
        TupleCursor cursor(arity, bound);
        std::vector<Int> pt;
        bool ok = true;
        while (cursor.next(pt) && ok) {
            bool ma = membership(pt, a), mb = membership(pt, b);
            ok = membership(pt, set_union(a, b)) == (ma || mb) &&
                 membership(pt, set_intersect(a, b)) == (ma && mb) &&
                 membership(pt, dm) == !(ma || mb) && membership(pt, dm_rhs) == !(ma || mb) &&
                 membership(pt, dc) == ma;
        }
        ++report.resolved;
        if (!ok) add_failure(report, "law violated for " + set_to_string(a) + " and " + set_to_string(b));
    }
    return report;
}

Report suite_is_empty(int trials, std::uint64_t seed) {
    Report report{"is-empty"};
    CaseGenerator gen(seed);
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        auto a = gen.random_set(1, 2);
        Int bound = 0;
        for (const auto& cell : a.cells()) bound = std::max(bound, detail::cell_witness_bound(cell));
        if (bound > 200000) continue;
        bool engine = is_empty(a);
        bool found = false;
        for (Int x = 0; x <= bound && !found; ++x) {
            Int pt[1] = {x};
            found = membership(std::span<const Int>(pt, 1), a);
        }
        ++report.resolved;
        if (engine == found) {
            auto fails = [&](const DefinableSet& s) {
                bool e = is_empty(s);
                bool f = false;
                for (Int x = 0; x <= bound && !f; ++x) {
                    Int pt[1] = {x};
                    f = membership(std::span<const Int>(pt, 1), s);
                }
                return e == f;
            };
            add_failure(report, "emptiness mismatch, shrunk: " + set_to_string(shrink_set(a, fails)));
        }
    }
    return report;
}

Report suite_period_profile(int trials, std::uint64_t seed) {
    Report report{"period-profile"};
    CaseGenerator gen(seed);
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        auto a = gen.random_set(1);
        auto profile = period_profile(a);
        ++report.resolved;
        for (Int x = profile.threshold; x <= profile.threshold + 10 * profile.period; ++x) {
            Int pt[1] = {x};
            if (membership(std::span<const Int>(pt, 1), a) != profile.value_at(x)) {
                add_failure(report, "profile disagrees at x=" + x.str() + " for " + set_to_string(a));
                break;
            }
        }
    }
    return report;
}

Report suite_ultrafilter_laws(int trials, std::uint64_t seed) {
    Report report{"ultrafilter-laws"};
    CaseGenerator gen(seed);
    report.trials = trials;
    int attempts = 0;
    while (report.resolved < trials && attempts < trials * 4) {
        ++attempts;
        auto a = gen.random_set(1);
        auto b = gen.random_set(1);
        auto u = gen.random_point(false);
        try {
            bool in_a = in_ultrafilter(a, u);
            bool in_na = in_ultrafilter(set_complement(a), u);
            bool in_b = in_ultrafilter(b, u);
            bool in_u = in_ultrafilter(set_union(a, b), u);
            bool in_i = in_ultrafilter(set_intersect(a, b), u);
            ++report.resolved;
            if (in_a == in_na) add_failure(report, "complement law failed for " + set_to_string(a));
            if (in_u != (in_a || in_b)) add_failure(report, "union law failed");
            if (in_i != (in_a && in_b)) add_failure(report, "intersection law failed");
        } catch (const PrecisionError&) {
            continue;
        }
    }
    return report;
}

Report suite_truncation_agreement(int trials, std::uint64_t seed) {
    Report report{"truncation-agreement"};
    CaseGenerator gen(seed);
    report.trials = trials;
    int attempts = 0;
    while (report.resolved < trials && attempts < trials * 4) {
        ++attempts;
        auto a = gen.random_set(1);
        auto u = gen.random_point(false);
        try {
            bool engine = in_ultrafilter(a, u);
            ++report.resolved;
            auto sampled = oracle_in_ultrafilter(a, u);
            if (sampled != (engine ? TriState::True : TriState::False))
                add_failure(report, "truncation oracle disagrees on " + set_to_string(a) + " at " +
                                        point_to_string(u));
        } catch (const PrecisionError&) {
            if (oracle_in_ultrafilter(a, u) != TriState::Unstable)
                add_failure(report, "precision error without instability on " + set_to_string(a) +
                                        " at " + point_to_string(u));
            ++report.resolved;
        }
    }
    return report;
}

Report suite_pushforward_laws(int trials, std::uint64_t seed) {
    Report report{"pushforward-laws"};
    CaseGenerator gen(seed);
    report.trials = trials;
    auto id = identity_op();
    for (int t = 0; t < trials; ++t) {
        Int a1 = gen.int_in(0, 4), b1 = gen.int_in(0, 6);
        Int a2 = gen.int_in(0, 4), b2 = gen.int_in(0, 6);
        auto g = affine_op({a1}, b1);
        auto h = affine_op({a2}, b2);
        auto hg = affine_op({a2 * a1}, a2 * b1 + b2);
        auto u = gen.random_point();
        ++report.resolved;
        if (!(pushforward(id, u) == u)) add_failure(report, "identity law failed");
        if (!(pushforward(hg, u) == pushforward(h, pushforward(g, u))))
            add_failure(report, "composition law failed at " + point_to_string(u));
    }
    return report;
}

Report suite_quantifier_correctness(int trials, std::uint64_t seed) {
    Report report{"quantifier-correctness"};
    CaseGenerator gen(seed);
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        std::size_t arity = 1 + static_cast<std::size_t>(gen.int_in(0, 2).convert_to<long>());
        auto set = gen.random_set(arity);
        auto point = gen.random_point(true);
        std::size_t position = static_cast<std::size_t>(
            gen.int_in(0, static_cast<long>(arity) - 1).convert_to<long>());
        bool errored = false;
        DefinableSet out = DefinableSet::symbolic_empty(1);
        try {
            out = forall_u(point, set, position);
        } catch (const PrecisionError&) {
            errored = true;
        }
        ++report.resolved;
        if (errored) {
            // The elimination claims a refinement disagreement; the conflict
            // carries a parameter tuple on which sampling must oscillate.
            auto conflict = quantifier_detail::forall_u_conflict(point, set, position);
            if (!conflict) {
                add_failure(report, "precision error without a conflict witness");
                continue;
            }
            DefinableSet sec = section_at(set, position, conflict->parameter_witness);
            if (oracle_forall_u(point, sec) != TriState::Unstable)
                add_failure(report,
                            "claimed precision failure is stable for " + set_to_string(set));
            continue;
        }
        // Sampled parameter tuples: engine output vs per-section oracle.
        for (int s = 0; s < 20; ++s) {
            std::vector<Int> y;
            for (std::size_t i = 0; i + 1 < arity; ++i) y.push_back(gen.int_in(0, 50));
            DefinableSet sec = section_at(set, position, y);
            auto sampled = oracle_forall_u(point, sec);
            bool out_member = membership(y, out);
            if (sampled == TriState::Unstable) {
                add_failure(report, "engine resolved an unstable section of " + set_to_string(set));
                break;
            }
            if ((sampled == TriState::True) != out_member) {
                add_failure(report, "quantifier mismatch on " + set_to_string(set) + " at " +
                                        point_to_string(point));
                break;
            }
        }
    }
    return report;
}

Report suite_self_duality(int trials, std::uint64_t seed) {
    Report report{"self-duality"};
    CaseGenerator gen(seed);
    report.trials = trials;
    int attempts = 0;
    while (report.resolved < trials && attempts < trials * 4) {
        ++attempts;
        auto set = gen.random_set(2);
        auto point = gen.random_point();
        std::size_t position = static_cast<std::size_t>(gen.int_in(0, 1).convert_to<long>());
        try {
            auto fa = forall_u(point, set, position);
            auto ex = exists_u(point, set, position);
            ++report.resolved;
            for (Int y = 0; y <= 25; ++y) {
                Int pt[1] = {y};
                if (membership(std::span<const Int>(pt, 1), fa) !=
                    membership(std::span<const Int>(pt, 1), ex)) {
                    add_failure(report, "duality failed for " + set_to_string(set));
                    break;
                }
            }
        } catch (const PrecisionError&) {
            continue;
        }
    }
    return report;
}

Report suite_principal_reduction(int trials, std::uint64_t seed) {
    Report report{"principal-reduction"};
    CaseGenerator gen(seed);
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        auto set = gen.random_set(2);
        Int n = gen.int_in(0, 10);
        std::size_t position = static_cast<std::size_t>(gen.int_in(0, 1).convert_to<long>());
        auto fa = forall_u(UPoint::principal(n), set, position);
        auto sec = section(set, position, n);
        ++report.resolved;
        for (Int y = 0; y <= 20; ++y) {
            Int pt[1] = {y};
            if (membership(std::span<const Int>(pt, 1), fa) !=
                membership(std::span<const Int>(pt, 1), sec)) {
                add_failure(report, "principal reduction failed for " + set_to_string(set));
                break;
            }
        }
    }
    return report;
}

DefinableSet make_le_set() {
    Cell cell;
    cell.arity = 2;
    cell.inequalities.push_back(LinearAtom{{-1, 1}, 0});
    return DefinableSet::symbolic(2, {cell});
}

DefinableSet make_eq_set() {
    Cell cell;
    cell.arity = 2;
    cell.inequalities.push_back(LinearAtom{{1, -1}, 0});
    cell.inequalities.push_back(LinearAtom{{-1, 1}, 0});
    return DefinableSet::symbolic(2, {cell});
}

Report suite_non_commutation(int trials, std::uint64_t seed) {
    (void)seed;
    Report report{"non-commutation"};
    report.trials = trials;
    auto le = make_le_set();
    UPoint u = UPoint::limit(0, 1), v = UPoint::limit(0, 1);
    ++report.resolved;
    if (eval_prefix({{0, u}, {1, v}}, le) != true)
        add_failure(report, "x-outer prefix should hold on the order");
    if (eval_prefix({{1, v}, {0, u}}, le) != false)
        add_failure(report, "y-outer prefix should fail on the order");
    return report;
}

Report suite_tilde_subset_star(int trials, std::uint64_t seed) {
    Report report{"tilde-subset-star"};
    CaseGenerator gen(seed);
    report.trials = trials;
    auto eq = make_eq_set();
    std::vector<UPoint> inf_pair = {UPoint::limit(0, 1), UPoint::limit(0, 1)};
    if (!ext_rel_star(eq, inf_pair) || ext_rel_tilde(eq, inf_pair))
        add_failure(report, "fixed strict witness failed on the equality relation");
    int attempts = 0;
    while (report.resolved < trials && attempts < trials * 4) {
        ++attempts;
        auto r = gen.random_set(2);
        std::vector<UPoint> args = {gen.random_point(), gen.random_point()};
        try {
            bool tilde = ext_rel_tilde(r, args);
            bool star = ext_rel_star(r, args);
            ++report.resolved;
            if (tilde && !star)
                add_failure(report, "inclusion failed for " + set_to_string(r) + " at (" +
                                        point_to_string(args[0]) + ", " + point_to_string(args[1]) +
                                        ")");
        } catch (const PrecisionError&) {
            continue;
        }
    }
    return report;
}

Report suite_star_truncation(int trials, std::uint64_t seed) {
    Report report{"star-truncation"};
    CaseGenerator gen(seed);
    report.trials = trials;
    int attempts = 0;
    while (report.resolved < trials && attempts < trials * 6) {
        ++attempts;
        auto r = gen.small_set(2);
        std::vector<UPoint> args = {gen.random_point(true, 3), gen.random_point(true, 3)};
        if (args[0].is_principal() && args[1].is_principal()) continue;
        bool star;
        try {
            star = ext_rel_star(r, args);
        } catch (const PrecisionError&) {
            continue;
        }
        ++report.resolved;
        bool all_witnessed = true;
        for (Int t : {Int(0), Int(6), Int(14), Int(48)})
            if (!oracle_star_witness(r, args, t)) all_witnessed = false;
        if (star != all_witnessed)
            add_failure(report, "star vs truncation mismatch on " + set_to_string(r));
    }
    return report;
}

Report suite_functional_star(int trials, std::uint64_t seed) {
    Report report{"functional-star"};
    CaseGenerator gen(seed);
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        auto f = affine_op({gen.int_in(0, 3)}, gen.int_in(0, 5));
        auto graph = f.graph();
        auto u = gen.random_point();
        auto v = gen.random_point();
        try {
            UPoint image = ext_map(f, std::vector<UPoint>{u});
            bool equal = equal_points(image, v);
            std::vector<UPoint> args = {u, v};
            bool star = ext_rel_star(graph, args);
            ++report.resolved;
            if (star != equal)
                add_failure(report, "graph star disagrees with the extended map at " +
                                        point_to_string(u) + ", " + point_to_string(v));
        } catch (const PrecisionError&) {
            continue;
        }
    }
    return report;
}

Report suite_extension_base(int trials, std::uint64_t seed) {
    Report report{"extension-base"};
    CaseGenerator gen(seed);
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        auto r = gen.random_set(2);
        auto f = affine_op({gen.int_in(0, 3), gen.int_in(0, 3)}, gen.int_in(0, 5));
        Int a = gen.int_in(0, 9), b = gen.int_in(0, 9);
        std::vector<UPoint> args = {UPoint::principal(a), UPoint::principal(b)};
        std::vector<Int> pt = {a, b};
        ++report.resolved;
        if (!(ext_map(f, args) == UPoint::principal(f.apply(pt))))
            add_failure(report, "extension does not restrict to the base operation");
        if (ext_rel_tilde(r, args) != membership(pt, r) || ext_rel_star(r, args) != membership(pt, r))
            add_failure(report, "extension does not restrict to the base relation");
    }
    return report;
}

Report suite_finite_oracle_equivalence(int trials, std::uint64_t seed) {
    Report report{"finite-oracle-equivalence"};
    CaseGenerator gen(seed);
    report.trials = trials;
    std::vector<std::vector<std::string>> universes = {
        {"a"}, {"a", "b"}, {"a", "b", "c"}};
    for (int t = 0; t < trials; ++t) {
        auto u = std::make_shared<FiniteUniverse>(universes[static_cast<std::size_t>(t) % 3]);
        Model model = gen.random_finite_model(u);
        ++report.resolved;
        for (ExtMode mode : {ExtMode::Tilde, ExtMode::Star}) {
            auto oracle = oracle_finite_extension(model, mode);
            auto ext = extend_model(model, mode);
            for (const auto& [name, table] : oracle.functions) {
                std::size_t arity = model.function(name).arity();
                for (std::size_t idx = 0; idx < table.size(); ++idx) {
                    auto tuple = finite_point(*u, arity, idx);
                    std::vector<UPoint> args;
                    for (const auto& c : tuple) args.push_back(UPoint::principal_finite(u, c));
                    if (!(ext.apply(name, args) == UPoint::principal_finite(u, table[idx])))
                        add_failure(report, "function table mismatch for " + name);
                }
            }
            for (const auto& [name, table] : oracle.relations) {
                std::size_t arity = model.relation(name).arity();
                for (std::size_t idx = 0; idx < table.size(); ++idx) {
                    auto tuple = finite_point(*u, arity, idx);
                    std::vector<UPoint> args;
                    for (const auto& c : tuple) args.push_back(UPoint::principal_finite(u, c));
                    if (ext.holds(name, args) != table[idx])
                        add_failure(report, "relation table mismatch for " + name);
                }
            }
        }
    }
    return report;
}

Report suite_finite_hom_check(int trials, std::uint64_t seed) {
    Report report{"finite-hom-check"};
    CaseGenerator gen(seed);
    report.trials = trials;
    std::vector<std::vector<std::string>> universes = {
        {"a"}, {"a", "b"}, {"a", "b", "c"}};
    for (int t = 0; t < trials; ++t) {
        auto ua = std::make_shared<FiniteUniverse>(universes[static_cast<std::size_t>(t) % 3]);
        auto ub = std::make_shared<FiniteUniverse>(universes[static_cast<std::size_t>(t / 3) % 3]);
        Model a = gen.random_finite_model(ua, 1);
        // Mirror the signature over the target universe.
        Model b(ub);
        for (const auto& [name, op] : a.functions()) {
            std::size_t n = finite_table_size(*ub, op.arity());
            std::vector<Int> table(n);
            for (auto& v : table) v = gen.int_in(0, static_cast<long>(ub->size()) - 1);
            b.add_function(name, DefOp::finite(ub, op.arity(), std::move(table)));
        }
        for (const auto& [name, rel] : a.relations()) {
            std::size_t n = finite_table_size(*ub, rel.arity());
            std::vector<bool> table(n);
            for (std::size_t i = 0; i < n; ++i) table[i] = gen.int_in(0, 1) == 1;
            b.add_relation(name, DefinableSet::finite(ub, rel.arity(), std::move(table)));
        }
        // Every map h between the universes.
        std::size_t maps = finite_table_size(*ua, 1);
        std::size_t count = 1;
        for (std::size_t i = 0; i < maps; ++i) count *= ub->size();
        for (std::size_t code = 0; code < count; ++code) {
            std::vector<Int> table(maps);
            std::size_t rest = code;
            for (std::size_t i = 0; i < maps; ++i) {
                table[i] = Int(rest % ub->size());
                rest /= ub->size();
            }
            auto h = DefOp::finite_map(ua, ub, 1, table);
            bool brute = oracle_finite_hom(h, a, b);
            ++report.resolved;
            for (ExtMode mode : {ExtMode::Tilde, ExtMode::Star}) {
                auto verdict = check_hom(h, a, b, mode);
                if (verdict.passed != brute)
                    add_failure(report, "hom verdict mismatch on a finite model pair");
            }
        }
    }
    return report;
}

struct FamilyModels {
    GenModel principal_model;
    GenModel monus_model;
    GenModel shift_model;  // x + m family: not pseudo-principal
};

FamilyModels make_family_models() {
    FamilyModels out;
    auto le = make_le_set();
    // principal: F = x + y, R = le
    out.principal_model.functions.emplace("F", GenFunction::principal(affine_op({1, 1}, 0)));
    out.principal_model.relations.emplace("R", GenRelation::principal(le));
    // monus family: F_m(x) = monus(x, m) at lim(inf); R_m = {x : x <= m}
    out.monus_model.functions.emplace(
        "F", GenFunction::family(monus_op(), UPoint::limit(0, 1)));
    Cell below;
    below.arity = 2;
    below.inequalities.push_back(LinearAtom{{-1, 1}, 0});  // x <= m
    out.monus_model.relations.emplace(
        "R", GenRelation::family(DefinableSet::symbolic(2, {below}), UPoint::limit(0, 1)));
    // shift family: F_m(x) = x + m at lim(inf); R_m = {x : x >= m}
    out.shift_model.functions.emplace(
        "F", GenFunction::family(affine_op({1, 1}, 0), UPoint::limit(0, 1)));
    Cell above;
    above.arity = 2;
    above.inequalities.push_back(LinearAtom{{1, -1}, 0});  // x >= m
    out.shift_model.relations.emplace(
        "R", GenRelation::family(DefinableSet::symbolic(2, {above}), UPoint::limit(0, 1)));
    return out;
}

Report suite_e_preserves_formulas(int trials, std::uint64_t seed) {
    Report report{"e-preserves-formulas"};
    CaseGenerator gen(seed);
    report.trials = trials;
    auto families = make_family_models();
    std::vector<GenModel*> models = {&families.principal_model, &families.monus_model};
    std::vector<Signature::Symbol> rels = {{"R", 1}};
    std::vector<Signature::Symbol> funcs = {{"F", 1}};
    // Unary views: the monus/shift families interpret unary symbols; the
    // principal model's binary symbols get their own shapes.
    int attempts = 0;
    while (report.resolved < trials && attempts < trials * 6) {
        ++attempts;
        std::size_t pick = static_cast<std::size_t>(gen.int_in(0, 1).convert_to<long>());
        GenModel& model = *models[pick];
        bool binary = pick == 0;
        std::vector<Signature::Symbol> use_rels = {{"R", binary ? std::size_t(2) : std::size_t(1)}};
        std::vector<Signature::Symbol> use_funcs = {{"F", binary ? std::size_t(2) : std::size_t(1)}};
        Formula phi = gen.random_quantifier_free(use_rels, use_funcs, {"x", "y"}, 2);
        Valuation v;
        v.emplace("x", gen.random_point());
        v.emplace("y", gen.random_point());
        try {
            bool direct = satisfies(model, phi, v);
            GenModel collapsed = collapse_principal(model);
            bool via_collapse = satisfies(collapsed, phi, v);
            ++report.resolved;
            if (direct != via_collapse)
                add_failure(report, "collapse changed satisfaction of " + formula_to_string(phi));
        } catch (const PrecisionError&) {
            continue;
        }
    }
    return report;
}

Report suite_homo_e_to_E(int trials, std::uint64_t seed) {
    Report report{"homo-e-to-E"};
    CaseGenerator gen(seed);
    report.trials = trials;
    auto families = make_family_models();
    std::vector<const GenRelation*> rels = {&families.principal_model.relations.at("R"),
                                            &families.monus_model.relations.at("R"),
                                            &families.shift_model.relations.at("R")};
    int attempts = 0;
    while (report.resolved < trials && attempts < trials * 4) {
        ++attempts;
        const GenRelation& rel = *rels[static_cast<std::size_t>(gen.int_in(0, 2).convert_to<long>())];
        std::vector<UPoint> args;
        for (std::size_t i = 0; i < rel.arity(); ++i) args.push_back(gen.random_point());
        try {
            bool e_holds = e_of(rel)(args);
            bool big_e_holds = E_of(rel)(args);
            ++report.resolved;
            if (e_holds && !big_e_holds)
                add_failure(report, "identity is not a homomorphism from e to E");
        } catch (const PrecisionError&) {
            continue;
        }
    }
    return report;
}

Report suite_ultraextension_equivalence(int trials, std::uint64_t seed) {
    (void)trials;
    (void)seed;
    Report report{"ultraextension-equivalence"};
    auto families = make_family_models();
    report.trials = 3;

    // Pseudo-principality verdicts for the three constructed families.
    if (!is_pseudo_principal(families.principal_model.functions.at("F")))
        add_failure(report, "principal interpretation should be pseudo-principal");
    if (!is_pseudo_principal(families.monus_model.functions.at("F")))
        add_failure(report, "monus family should be pseudo-principal");
    if (is_pseudo_principal(families.shift_model.functions.at("F")))
        add_failure(report, "shift family should not be pseudo-principal");
    report.resolved = 3;

    // Pseudo-principal models: the collapses are the two canonical extensions
    // of the principal submodel, checked at sample points.
    for (GenModel* model : {&families.principal_model, &families.monus_model}) {
        Model base = principal_submodel(*model);
        auto tilde = extend_model(base, ExtMode::Tilde);
        auto star = extend_model(base, ExtMode::Star);
        auto points = sample_points(true, nullptr, 3, 3);
        const auto& rel = model->relations.at("R");
        const auto& fun = model->functions.at("F");
        for (const auto& p : points) {
            std::vector<UPoint> args(rel.arity(), p);
            try {
                if (e_of(rel)(args) != tilde.holds("R", args))
                    add_failure(report, "e-collapse differs from the tilde extension");
                if (E_of(rel)(args) != star.holds("R", args))
                    add_failure(report, "E-collapse differs from the star extension");
            } catch (const PrecisionError&) {
            }
            std::vector<UPoint> fargs(fun.arity(), p);
            try {
                if (!(e_of(fun)(fargs) == tilde.apply("F", fargs)))
                    add_failure(report, "function collapse differs from the extension");
            } catch (const PrecisionError&) {
            }
        }
    }

    // The shift family escapes: some principal tuple maps to a limit point.
    auto image = app_tilde(std::vector<UPoint>{UPoint::principal(0)},
                           families.shift_model.functions.at("F"));
    if (!image.is_limit())
        add_failure(report, "shift family should send a principal point to a limit point");
    return report;
}

Report suite_e_E_topology(int trials, std::uint64_t seed) {
    (void)trials;
    (void)seed;
    Report report{"e-E-topology"};
    auto families = make_family_models();
    report.trials = 3;
    std::vector<const GenRelation*> rels = {&families.principal_model.relations.at("R"),
                                            &families.monus_model.relations.at("R"),
                                            &families.shift_model.relations.at("R")};
    for (const auto* rel : rels) {
        ++report.resolved;
        DefinableSet core = core_relation(*rel);
        auto verdict = is_right_clopen(e_of(*rel), rel->arity(), core, 3);
        if (verdict.refuted)
            add_failure(report, "e-collapse is not right clopen against its core: " +
                                    verdict.counterexample);
        auto star_oracle = E_of(*rel);
        auto points = sample_points(true, nullptr, 3, 3);
        for (const auto& p : points) {
            std::vector<UPoint> args(rel->arity(), p);
            try {
                if (star_oracle(args) != ext_rel_star(core, args))
                    add_failure(report, "E-collapse differs from the star of the core");
            } catch (const PrecisionError&) {
            }
        }
    }
    return report;
}

Report suite_lift_project(int trials, std::uint64_t seed) {
    (void)trials;
    (void)seed;
    Report report{"lift-project"};
    // Exhaustive over all carriers T with |T| <= 6 and all subsets S.
    for (std::size_t t_size = 1; t_size <= 6; ++t_size) {
        for (std::size_t mask = 1; mask < (std::size_t(1) << t_size); ++mask) {
            std::vector<std::size_t> injection;
            for (std::size_t e = 0; e < t_size; ++e)
                if (mask & (std::size_t(1) << e)) injection.push_back(e);
            for (std::size_t s = 0; s < injection.size(); ++s) {
                ++report.resolved;
                FiniteUltrafilter u{injection.size(), s};
                LiftedUF lifted = lift(u, injection, t_size);
                if (!lifted.concentrated_on(lifted.concentration))
                    add_failure(report, "concentration set left the lifted point");
                FiniteUltrafilter back = project(lifted, injection);
                if (back.element != u.element || back.carrier_size != u.carrier_size)
                    add_failure(report, "project(lift(u)) is not u");
            }
            // and (v_S)^T = v for points concentrated on S
            for (std::size_t e = 0; e < t_size; ++e) {
                if (!(mask & (std::size_t(1) << e))) continue;
                LiftedUF v{t_size, e, injection};
                FiniteUltrafilter down = project(v, injection);
                LiftedUF up = lift(down, injection, t_size);
                ++report.resolved;
                if (up.element != v.element) add_failure(report, "lift(project(v)) is not v");
            }
        }
    }
    report.trials = report.resolved;
    return report;
}

Report suite_lim_i_e(int trials, std::uint64_t seed) {
    Report report{"lim-i-e"};
    CaseGenerator gen(seed);
    // Finite part: exhaustive over function carriers for |X| <= 2 and
    // relation carriers for |X| <= 3.
    for (std::size_t size = 1; size <= 2; ++size) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < size; ++i) labels.push_back(std::string(1, char('a' + i)));
        auto u = std::make_shared<FiniteUniverse>(labels);
        for (std::size_t arity = 1; arity <= 2; ++arity) {
            FunctionCarrier carrier(u, arity);
            std::vector<std::size_t> images(carrier.size());
            for (std::size_t f = 0; f < carrier.size(); ++f) {
                ++report.resolved;
                FiniteUltrafilter point{carrier.size(), f};
                LiftedUF lifted = i_map(point, carrier);
                images[f] = lifted.element;
                if (!lifted.concentrated_on(lifted.concentration))
                    add_failure(report, "i-image is not concentrated on the extension image");
                DefOp via_lim = limit_of(lifted, carrier);
                DefOp base = carrier.element(f);
                bool ok = via_lim.table().size() == base.table().size();
                for (std::size_t idx = 0; ok && idx < base.table().size(); ++idx) {
                    auto tuple = finite_point(*u, arity, idx);
                    std::vector<UPoint> args;
                    for (const auto& c : tuple) args.push_back(UPoint::principal_finite(u, c));
                    ok = ext_map(base, args) == UPoint::principal_finite(u, via_lim.table()[idx]);
                }
                if (!ok) add_failure(report, "lim of i differs from e on a finite function carrier");
            }
            std::sort(images.begin(), images.end());
            if (std::adjacent_find(images.begin(), images.end()) != images.end())
                add_failure(report, "i is not injective on a finite function carrier");
        }
    }
    for (std::size_t size = 1; size <= 3; ++size) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < size; ++i) labels.push_back(std::string(1, char('a' + i)));
        auto u = std::make_shared<FiniteUniverse>(labels);
        for (std::size_t arity = 1; arity <= 2; ++arity) {
            RelationCarrier carrier(u, arity);
            // The tilde-closure relabeling, computed once per carrier.
            std::vector<std::size_t> images(carrier.size());
            for (std::size_t r = 0; r < carrier.size(); ++r) {
                DefinableSet base = carrier.element(r);
                std::vector<bool> table(base.table().size());
                for (std::size_t idx = 0; idx < table.size(); ++idx) {
                    auto tuple = finite_point(*u, arity, idx);
                    std::vector<UPoint> args;
                    for (const auto& c : tuple) args.push_back(UPoint::principal_finite(u, c));
                    table[idx] = ext_rel_tilde(base, args);
                }
                images[r] = carrier.index_of(DefinableSet::finite(u, arity, table));
            }
            for (std::size_t r = 0; r < carrier.size(); ++r) {
                ++report.resolved;
                if (!(carrier.element(images[r]).table() == carrier.element(r).table()))
                    add_failure(report, "lim of i differs from e on a finite relation carrier");
            }
            auto sorted = images;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                add_failure(report, "i is not injective on a finite relation carrier");
        }
    }
    // Symbolic part: oracle agreement at sample points for the families.
    auto families = make_family_models();
    for (GenModel* model : {&families.monus_model, &families.shift_model}) {
        const auto& rel = model->relations.at("R");
        auto lim_oracle = limit_of(i_map(rel));
        auto e_oracle = e_of(rel);
        int checked = 0;
        int attempts = 0;
        while (checked < 50 && attempts < 300) {
            ++attempts;
            std::vector<UPoint> args = {gen.random_point()};
            try {
                bool lhs = lim_oracle(args);
                bool rhs = e_oracle(args);
                ++checked;
                ++report.resolved;
                if (lhs != rhs)
                    add_failure(report, "lim of i differs from e on a symbolic family");
            } catch (const PrecisionError&) {
                continue;
            }
        }
    }
    report.trials = report.resolved;
    (void)trials;
    return report;
}

Report suite_lim_I_E(int trials, std::uint64_t seed) {
    Report report{"lim-I-E"};
    CaseGenerator gen(seed);
    for (std::size_t size = 1; size <= 3; ++size) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < size; ++i) labels.push_back(std::string(1, char('a' + i)));
        auto u = std::make_shared<FiniteUniverse>(labels);
        for (std::size_t arity = 1; arity <= 2; ++arity) {
            RelationCarrier carrier(u, arity);
            for (std::size_t r = 0; r < carrier.size(); ++r) {
                ++report.resolved;
                DefinableSet base = carrier.element(r);
                std::vector<bool> star_table(base.table().size());
                for (std::size_t idx = 0; idx < star_table.size(); ++idx) {
                    auto tuple = finite_point(*u, arity, idx);
                    std::vector<UPoint> args;
                    for (const auto& c : tuple) args.push_back(UPoint::principal_finite(u, c));
                    star_table[idx] = ext_rel_star(base, args);
                }
                if (!(star_table == base.table()))
                    add_failure(report, "lim of I differs from E on a finite relation carrier");
            }
        }
    }
    auto families = make_family_models();
    for (GenModel* model : {&families.monus_model, &families.shift_model}) {
        const auto& rel = model->relations.at("R");
        auto lim_oracle = limit_of(I_map(rel));
        auto big_e_oracle = E_of(rel);
        int checked = 0;
        int attempts = 0;
        while (checked < 50 && attempts < 300) {
            ++attempts;
            std::vector<UPoint> args = {gen.random_point()};
            try {
                bool lhs = lim_oracle(args);
                bool rhs = big_e_oracle(args);
                ++checked;
                ++report.resolved;
                if (lhs != rhs) add_failure(report, "lim of I differs from E on a symbolic family");
            } catch (const PrecisionError&) {
                continue;
            }
        }
    }
    report.trials = report.resolved;
    (void)trials;
    return report;
}

Report suite_ordinary_as_wide(int trials, std::uint64_t seed) {
    Report report{"ordinary-as-wide"};
    CaseGenerator gen(seed);
    report.trials = trials;
    std::vector<std::vector<std::string>> universes = {{"a"}, {"a", "b"}};
    for (int t = 0; t < trials; ++t) {
        auto u = std::make_shared<FiniteUniverse>(universes[static_cast<std::size_t>(t) % 2]);
        Model model = gen.random_finite_model(u, 1);
        ++report.resolved;
        for (const auto& [name, rel] : model.relations()) {
            RelationCarrier carrier(u, rel.arity());
            FiniteUltrafilter principal{carrier.size(), carrier.index_of(rel)};
            if (!(limit_of(principal, carrier).table() == rel.table()))
                add_failure(report, "wrapping and taking the limit changed the relation");
        }
        for (const auto& [name, op] : model.functions()) {
            FunctionCarrier carrier(u, op.arity());
            FiniteUltrafilter principal{carrier.size(), carrier.index_of(op)};
            if (!(limit_of(principal, carrier).table() == op.table()))
                add_failure(report, "wrapping and taking the limit changed the operation");
        }
    }
    return report;
}

Report suite_modal_via_ext(int trials, std::uint64_t seed) {
    Report report{"modal-via-ext"};
    CaseGenerator gen(seed);
    report.trials = trials;
    std::vector<std::vector<std::string>> universes = {{"a"}, {"a", "b"}, {"a", "b", "c"}};
    for (int t = 0; t < trials; ++t) {
        auto u = std::make_shared<FiniteUniverse>(universes[static_cast<std::size_t>(t) % 3]);
        std::size_t arity = 1 + static_cast<std::size_t>(t) % 2;
        std::size_t n = finite_table_size(*u, arity);
        std::vector<bool> table(n);
        for (std::size_t i = 0; i < n; ++i) table[i] = gen.int_in(0, 1) == 1;
        auto rel = DefinableSet::finite(u, arity, table);
        ++report.resolved;
        if (!modal_via_ext_check(rel, u))
            add_failure(report, "self-applied extension image differs from the star extension");
    }
    return report;
}

Report suite_cli_roundtrip(int trials, std::uint64_t seed) {
    Report report{"cli-roundtrip"};
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        ast::Script script = generate_random_script(seed + static_cast<std::uint64_t>(t), 4);
        std::string once = print_script(script);
        try {
            ast::Script reparsed = parse_script(once);
            std::string twice = print_script(reparsed);
            ++report.resolved;
            if (once != twice && report.failures.size() < 5)
                report.failures.push_back("round-trip changed the script:\n" + once);
        } catch (const ParseError& e) {
            if (report.failures.size() < 5)
                report.failures.push_back(std::string("printed script failed to parse: ") + e.what() +
                                          "\n" + once);
        }
    }
    return report;
}

Report suite_mutation_sanity(int trials, std::uint64_t seed) {
    (void)trials;
    (void)seed;
    Report report{"mutation-sanity"};
    report.trials = 1;
    report.resolved = 1;
    // A deliberately inverted quantifier order must flip detectable verdicts;
    // a harness that cannot see the flip would be vacuous.
    auto le = make_le_set();
    UPoint u = UPoint::limit(0, 1);
    QuantPrefix correct = {{0, u}, {1, u}};
    QuantPrefix inverted = {{1, u}, {0, u}};
    int detected = 0;
    if (eval_prefix(correct, le) != eval_prefix(inverted, le)) ++detected;
    // Parameter-innermost convention: reversing it changes family semantics.
    auto families = make_family_models();
    const auto& rel = families.monus_model.relations.at("R");
    std::vector<UPoint> args = {UPoint::limit(0, 1)};
    QuantPrefix param_inner = {{0, args[0]}, {1, rel.parameter_point()}};
    QuantPrefix param_outer = {{1, rel.parameter_point()}, {0, args[0]}};
    if (eval_prefix(param_inner, rel.set()) != eval_prefix(param_outer, rel.set())) ++detected;
    if (detected == 0) add_failure(report, "inverted quantifier order was not detected");
    return report;
}

}  // namespace

void register_suite(const std::string& name, SuiteFn fn);

void register_suite(const std::string& name, SuiteFn fn) {
    mutable_registry().emplace(name, std::move(fn));
}

const std::map<std::string, SuiteFn>& suite_registry() {
    static bool initialized = false;
    if (!initialized) {
        initialized = true;
        auto& reg = mutable_registry();
        reg.emplace("boolean-laws", suite_boolean_laws);
        reg.emplace("is-empty", suite_is_empty);
        reg.emplace("period-profile", suite_period_profile);
        reg.emplace("ultrafilter-laws", suite_ultrafilter_laws);
        reg.emplace("truncation-agreement", suite_truncation_agreement);
        reg.emplace("pushforward-laws", suite_pushforward_laws);
        reg.emplace("quantifier-correctness", suite_quantifier_correctness);
        reg.emplace("self-duality", suite_self_duality);
        reg.emplace("principal-reduction", suite_principal_reduction);
        reg.emplace("non-commutation", suite_non_commutation);
        reg.emplace("tilde-subset-star", suite_tilde_subset_star);
        reg.emplace("star-truncation", suite_star_truncation);
        reg.emplace("functional-star", suite_functional_star);
        reg.emplace("extension-base", suite_extension_base);
        reg.emplace("finite-oracle-equivalence", suite_finite_oracle_equivalence);
        reg.emplace("finite-hom-check", suite_finite_hom_check);
        reg.emplace("e-preserves-formulas", suite_e_preserves_formulas);
        reg.emplace("homo-e-to-E", suite_homo_e_to_E);
        reg.emplace("ultraextension-equivalence", suite_ultraextension_equivalence);
        reg.emplace("e-E-topology", suite_e_E_topology);
        reg.emplace("lift-project", suite_lift_project);
        reg.emplace("lim-i-e", suite_lim_i_e);
        reg.emplace("lim-I-E", suite_lim_I_E);
        reg.emplace("ordinary-as-wide", suite_ordinary_as_wide);
        reg.emplace("modal-via-ext", suite_modal_via_ext);
        reg.emplace("cli-roundtrip", suite_cli_roundtrip);
        reg.emplace("mutation-sanity", suite_mutation_sanity);
    }
    return mutable_registry();
}

std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : suite_registry()) names.push_back(name);
    return names;
}

Report run_suite(const std::string& name, int trials, std::uint64_t seed) {
    const auto& registry = suite_registry();
    auto it = registry.find(name);
    if (it == registry.end()) throw std::invalid_argument("unknown suite: " + name);
    return it->second(trials, seed);
}

}  // namespace ultrext
