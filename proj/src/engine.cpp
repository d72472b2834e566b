#include "engine.hpp"

#include "widesense.hpp"

#include <json.hpp>

#include <chrono>
#include <future>

namespace ultrext {

std::string ResultRecord::to_text() const {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += " ";
        out += fields[i].first + "=";
        const std::string& v = fields[i].second;
        bool needs_quotes = v.find(' ') != std::string::npos || v.empty();
        out += needs_quotes ? "\"" + v + "\"" : v;
    }
    return out;
}

std::string ResultRecord::to_json() const {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : fields) {
        if (v == "true" || v == "false") {
            j[k] = (v == "true");
        } else {
            j[k] = v;
        }
    }
    return j.dump();
}

namespace {
std::string print_query_echo(const ast::Statement& st) { return print_statement(st); }
}  // namespace

Session::Session(EngineConfig config) : config_(std::move(config)), seed_(config_.seed) {
    if (!config_.universe_labels.empty())
        universe_ = std::make_shared<FiniteUniverse>(config_.universe_labels);
}

const Session::Value& Session::lookup(const std::string& name) const {
    auto it = env_.find(name);
    if (it == env_.end()) throw std::invalid_argument("undefined name: " + name);
    return it->second;
}

namespace {

struct CompiledAtoms {
    std::vector<LinearAtom> inequalities;
    std::vector<CongruenceAtom> congruences;
};

std::size_t var_index(const std::vector<std::string>& vars, const std::string& name) {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == name) return i;
    throw std::invalid_argument("unknown variable: " + name);
}

// Lowers a linear AST expression over the given variable order.
void lower_linear(const ast::LinearExpr& expr, const std::vector<std::string>& vars,
                  std::vector<Int>& coeffs, Int& constant) {
    coeffs.assign(vars.size(), 0);
    constant = 0;
    for (const auto& term : expr.terms) {
        if (term.var.empty())
            constant += term.coeff;
        else
            coeffs[var_index(vars, term.var)] += term.coeff;
    }
}

// Normalizes a relational or congruence atom into cell atoms. Equalities
// produce two inequality atoms; strict forms shift the constant.
void lower_atom(const ast::AtomNode& atom, const std::vector<std::string>& vars, CompiledAtoms& out) {
    std::vector<Int> lhs_coeffs, rhs_coeffs;
    Int lhs_const, rhs_const;
    lower_linear(atom.lhs, vars, lhs_coeffs, lhs_const);
    if (atom.is_congruence) {
        CongruenceAtom c;
        c.coeffs = lhs_coeffs;
        c.modulus = atom.modulus;
        c.residue = mod_floor(atom.residue - lhs_const, atom.modulus);
        out.congruences.push_back(std::move(c));
        return;
    }
    lower_linear(atom.rhs, vars, rhs_coeffs, rhs_const);
    auto diff = [&](bool rhs_minus_lhs, const Int& shift) {
        LinearAtom a;
        a.coeffs.resize(vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i)
            a.coeffs[i] = rhs_minus_lhs ? rhs_coeffs[i] - lhs_coeffs[i] : lhs_coeffs[i] - rhs_coeffs[i];
        a.constant = (rhs_minus_lhs ? rhs_const - lhs_const : lhs_const - rhs_const) + shift;
        return a;
    };
    switch (atom.op) {
        case ast::RelOp::Le: out.inequalities.push_back(diff(true, 0)); break;
        case ast::RelOp::Lt: out.inequalities.push_back(diff(true, -1)); break;
        case ast::RelOp::Ge: out.inequalities.push_back(diff(false, 0)); break;
        case ast::RelOp::Gt: out.inequalities.push_back(diff(false, -1)); break;
        case ast::RelOp::Eq:
            out.inequalities.push_back(diff(true, 0));
            out.inequalities.push_back(diff(false, 0));
            break;
    }
}

Cell lower_cell(const std::vector<ast::AtomNode>& atoms, const std::vector<std::string>& vars) {
    CompiledAtoms compiled;
    for (const auto& atom : atoms) lower_atom(atom, vars, compiled);
    Cell cell;
    cell.arity = vars.size();
    cell.inequalities = std::move(compiled.inequalities);
    cell.congruences = std::move(compiled.congruences);
    return cell;
}

// Negation alternatives of one AST atom, as single-atom cells over vars.
std::vector<Cell> negated_atom_cells(const ast::AtomNode& atom, const std::vector<std::string>& vars) {
    std::vector<Cell> cells;
    auto push_ineq = [&](LinearAtom a) {
        Cell c;
        c.arity = vars.size();
        c.inequalities.push_back(std::move(a));
        cells.push_back(std::move(c));
    };
    CompiledAtoms compiled;
    lower_atom(atom, vars, compiled);
    for (const auto& ineq : compiled.inequalities) {
        // not(e >= 0)  <=>  -e - 1 >= 0 ... for equalities the two pieces
        // produce the two strict sides, which is exactly the negation split.
        LinearAtom neg;
        neg.coeffs = ineq.coeffs;
        for (auto& c : neg.coeffs) c = -c;
        neg.constant = -ineq.constant - 1;
        push_ineq(std::move(neg));
    }
    for (const auto& cong : compiled.congruences) {
        for (Int r = 0; r < cong.modulus; ++r) {
            if (r == cong.residue) continue;
            Cell c;
            c.arity = vars.size();
            c.congruences.push_back(CongruenceAtom{cong.coeffs, r, cong.modulus});
            cells.push_back(std::move(c));
        }
    }
    return cells;
}

Cell merge_cells(const Cell& a, const Cell& b) {
    Cell out = a;
    out.inequalities.insert(out.inequalities.end(), b.inequalities.begin(), b.inequalities.end());
    out.congruences.insert(out.congruences.end(), b.congruences.begin(), b.congruences.end());
    return out;
}

// Lowers an if-chain into guarded affine branches.
void lower_op_expr(const ast::OpExpr& expr, const std::vector<std::string>& vars,
                   const std::vector<Cell>& path, std::vector<AffineBranch>& out) {
    if (!expr.is_if) {
        std::vector<Int> coeffs;
        Int constant;
        lower_linear(expr.value, vars, coeffs, constant);
        for (const auto& guard : path) out.push_back(AffineBranch{guard, coeffs, constant});
        return;
    }
    Cell cond = lower_cell(expr.condition, vars);
    std::vector<Cell> then_path;
    for (const auto& guard : path) then_path.push_back(merge_cells(guard, cond));
    lower_op_expr(expr.branches[0], vars, then_path, out);

    std::vector<Cell> else_path;
    for (const auto& atom : expr.condition) {
        for (const auto& neg : negated_atom_cells(atom, vars)) {
            for (const auto& guard : path) else_path.push_back(merge_cells(guard, neg));
        }
    }
    lower_op_expr(expr.branches[1], vars, else_path, out);
}

std::vector<std::string> free_variables(const ast::OpExpr& expr, const std::string& except) {
    std::vector<std::string> vars;
    auto add = [&](const std::string& name) {
        if (name.empty() || name == except) return;
        for (const auto& v : vars)
            if (v == name) return;
        vars.push_back(name);
    };
    std::function<void(const ast::OpExpr&)> walk = [&](const ast::OpExpr& node) {
        if (node.is_if) {
            for (const auto& atom : node.condition) {
                for (const auto& term : atom.lhs.terms) add(term.var);
                for (const auto& term : atom.rhs.terms) add(term.var);
            }
            walk(node.branches[0]);
            walk(node.branches[1]);
            return;
        }
        for (const auto& term : node.value.terms) add(term.var);
    };
    walk(expr);
    return vars;
}

std::string point_value_string(const UPoint& point) { return point_to_string(point); }

}  // namespace

DefinableSet Session::eval_set(const ast::SetExpr& expr) const {
    using Kind = ast::SetExpr::Kind;
    switch (expr.kind) {
        case Kind::Union:
            return set_union(eval_set(expr.children[0]), eval_set(expr.children[1]));
        case Kind::Intersect:
            return set_intersect(eval_set(expr.children[0]), eval_set(expr.children[1]));
        case Kind::Complement:
            return set_complement(eval_set(expr.children[0]));
        case Kind::Name: {
            const Value& v = lookup(expr.name);
            if (!std::holds_alternative<DefinableSet>(v))
                throw std::invalid_argument(expr.name + " is not a set");
            return std::get<DefinableSet>(v);
        }
        case Kind::Compr: {
            if (expr.compr.always_false)
                return DefinableSet::symbolic_empty(expr.compr.vars.size());
            if (expr.compr.always_true)
                return DefinableSet::symbolic_full(expr.compr.vars.size());
            return DefinableSet::symbolic(expr.compr.vars.size(),
                                          {lower_cell(expr.compr.atoms, expr.compr.vars)});
        }
        case Kind::FiniteEnum: {
            if (!universe_)
                throw std::invalid_argument("finite enumeration needs a universe definition");
            std::size_t arity = expr.tuples.front().size();
            std::vector<bool> table(finite_table_size(*universe_, arity), false);
            for (const auto& tuple : expr.tuples) {
                if (tuple.size() != arity)
                    throw std::invalid_argument("enumeration tuples must share one arity");
                std::vector<Int> point;
                for (const auto& label : tuple) {
                    auto idx = universe_->index_of(label);
                    if (!idx) throw std::invalid_argument("unknown element label: " + label);
                    point.push_back(Int(*idx));
                }
                table[finite_index(*universe_, point)] = true;
            }
            return DefinableSet::finite(universe_, arity, std::move(table));
        }
    }
    throw std::logic_error("unreachable set expression");
}

DefOp Session::eval_op(const ast::OpDef& def) const {
    std::vector<AffineBranch> branches;
    lower_op_expr(def.body, def.params, {Cell::full(def.params.size())}, branches);
    return DefOp::symbolic(def.params.size(), std::move(branches));
}

UPoint Session::eval_point(const ast::PointLit& lit) const {
    using Kind = ast::PointLit::Kind;
    switch (lit.kind) {
        case Kind::Principal:
            return UPoint::principal(lit.value);
        case Kind::Label: {
            if (!universe_) throw std::invalid_argument("element points need a universe definition");
            auto idx = universe_->index_of(lit.name);
            if (!idx) throw std::invalid_argument("unknown element label: " + lit.name);
            return UPoint::principal_finite(universe_, Int(*idx));
        }
        case Kind::LimInf:
            return UPoint::limit(0, default_precision_);
        case Kind::Limit:
            return UPoint::limit(lit.residue, lit.modulus);
        case Kind::Name: {
            const Value& v = lookup(lit.name);
            if (!std::holds_alternative<UPoint>(v))
                throw std::invalid_argument(lit.name + " is not a point");
            return std::get<UPoint>(v);
        }
    }
    throw std::logic_error("unreachable point literal");
}

Model Session::eval_model(const std::vector<ast::ModelEntry>& entries) const {
    bool finite = false;
    for (const auto& entry : entries)
        if (!entry.is_op && entry.set.kind == ast::SetExpr::Kind::FiniteEnum) finite = true;
    Model model(finite ? universe_ : nullptr);
    for (const auto& entry : entries) {
        if (entry.is_op)
            model.add_function(entry.name, eval_op(entry.op));
        else
            model.add_relation(entry.name, eval_set(entry.set));
    }
    return model;
}

GenModel Session::eval_genmodel(const std::vector<ast::GenEntry>& entries) const {
    GenModel model;
    for (const auto& entry : entries) {
        switch (entry.kind) {
            case ast::GenEntry::Kind::PrincipalOp:
                model.functions.emplace(entry.name, GenFunction::principal(eval_op(entry.op)));
                break;
            case ast::GenEntry::Kind::PrincipalSet:
                model.relations.emplace(entry.name, GenRelation::principal(eval_set(entry.set)));
                break;
            case ast::GenEntry::Kind::FamilyOp: {
                // Formals are the free variables in first-occurrence order;
                // the parameter is the last coordinate of the stored op.
                std::vector<std::string> vars = free_variables(entry.family_op, entry.param);
                vars.push_back(entry.param);
                std::vector<AffineBranch> branches;
                lower_op_expr(entry.family_op, vars, {Cell::full(vars.size())}, branches);
                model.functions.emplace(
                    entry.name, GenFunction::family(DefOp::symbolic(vars.size(), std::move(branches)),
                                                    eval_point(entry.at)));
                break;
            }
            case ast::GenEntry::Kind::FamilySet: {
                if (entry.set.kind != ast::SetExpr::Kind::Compr)
                    throw std::invalid_argument("family relations need a comprehension body");
                std::vector<std::string> vars = entry.set.compr.vars;
                vars.push_back(entry.param);
                DefinableSet body =
                    entry.set.compr.always_false
                        ? DefinableSet::symbolic_empty(vars.size())
                        : entry.set.compr.always_true
                              ? DefinableSet::symbolic_full(vars.size())
                              : DefinableSet::symbolic(vars.size(),
                                                       {lower_cell(entry.set.compr.atoms, vars)});
                model.relations.emplace(entry.name,
                                        GenRelation::family(std::move(body), eval_point(entry.at)));
                break;
            }
        }
    }
    return model;
}

GenModel Session::as_genmodel(const std::string& name) const {
    const Value& v = lookup(name);
    if (std::holds_alternative<GenModel>(v)) return std::get<GenModel>(v);
    if (std::holds_alternative<Model>(v)) {
        const Model& m = std::get<Model>(v);
        GenModel wrapped;
        wrapped.universe = m.universe();
        for (const auto& [n, op] : m.functions()) wrapped.functions.emplace(n, GenFunction::principal(op));
        for (const auto& [n, rel] : m.relations())
            wrapped.relations.emplace(n, GenRelation::principal(rel));
        return wrapped;
    }
    throw std::invalid_argument(name + " is not a model");
}

Session::QueryOutcome Session::run_query_ast(const ast::Query& query) const {
    using Kind = ast::Query::Kind;
    QueryOutcome outcome;
    outcome.label = "exact";
    try {
        switch (query.kind) {
            case Kind::ExtTilde:
            case Kind::ExtStar: {
                const Value& v = lookup(query.name);
                if (!std::holds_alternative<DefinableSet>(v))
                    throw std::invalid_argument(query.name + " is not a relation");
                std::vector<UPoint> args;
                for (const auto& a : query.args) args.push_back(eval_point(a));
                const DefinableSet& rel = std::get<DefinableSet>(v);
                outcome.kind = QueryOutcome::Kind::Bool;
                outcome.truth = query.kind == Kind::ExtTilde ? ext_rel_tilde(rel, args)
                                                             : ext_rel_star(rel, args);
                return outcome;
            }
            case Kind::ExtMap: {
                const Value& v = lookup(query.name);
                if (!std::holds_alternative<DefOp>(v))
                    throw std::invalid_argument(query.name + " is not an operation");
                std::vector<UPoint> args;
                for (const auto& a : query.args) args.push_back(eval_point(a));
                outcome.kind = QueryOutcome::Kind::Point;
                outcome.point = ext_map(std::get<DefOp>(v), args);
                return outcome;
            }
            case Kind::Sat: {
                GenModel model = as_genmodel(query.name);
                Valuation valuation;
                for (const auto& [var, lit] : query.bindings)
                    valuation.emplace(var, eval_point(lit));
                std::optional<std::vector<UPoint>> witnesses;
                if (query.witnesses) {
                    witnesses.emplace();
                    for (const auto& lit : *query.witnesses) witnesses->push_back(eval_point(lit));
                }
                outcome.kind = QueryOutcome::Kind::Bool;
                outcome.truth = satisfies(model, query.formula, valuation, witnesses);
                return outcome;
            }
            case Kind::CollapseE:
            case Kind::CollapseBigE:
            case Kind::LimLowerI:
            case Kind::LimUpperI: {
                GenModel model = as_genmodel(query.name);
                std::vector<UPoint> args;
                for (const auto& a : query.args) args.push_back(eval_point(a));
                bool star_side = query.kind == Kind::CollapseBigE || query.kind == Kind::LimUpperI;
                if (auto it = model.relations.find(query.member); it != model.relations.end()) {
                    RelationOracle oracle;
                    if (query.kind == Kind::LimLowerI) {
                        oracle = limit_of(i_map(it->second));
                    } else if (query.kind == Kind::LimUpperI) {
                        oracle = limit_of(I_map(it->second));
                    } else {
                        oracle = star_side ? E_of(it->second) : e_of(it->second);
                    }
                    outcome.kind = QueryOutcome::Kind::Bool;
                    outcome.truth = oracle(args);
                    return outcome;
                }
                if (auto it = model.functions.find(query.member); it != model.functions.end()) {
                    outcome.kind = QueryOutcome::Kind::Point;
                    outcome.point = app_tilde(args, it->second);  // e and E agree on functions
                    return outcome;
                }
                throw std::invalid_argument(query.member + " is not a symbol of " + query.name);
            }
            case Kind::Core: {
                GenModel model = as_genmodel(query.name);
                auto it = model.relations.find(query.member);
                if (it == model.relations.end())
                    throw std::invalid_argument(query.member + " is not a relation of " + query.name);
                outcome.kind = QueryOutcome::Kind::Set;
                outcome.set = core_relation(it->second);
                return outcome;
            }
            case Kind::Pseudo: {
                GenModel model = as_genmodel(query.name);
                auto it = model.functions.find(query.member);
                if (it == model.functions.end())
                    throw std::invalid_argument(query.member + " is not a function of " + query.name);
                outcome.kind = QueryOutcome::Kind::Bool;
                outcome.truth = is_pseudo_principal(it->second);
                return outcome;
            }
            case Kind::HomCheck: {
                const Value& hv = lookup(query.hom_map);
                if (!std::holds_alternative<DefOp>(hv))
                    throw std::invalid_argument(query.hom_map + " is not an operation");
                const Value& av = lookup(query.hom_source);
                const Value& bv = lookup(query.hom_target);
                if (!std::holds_alternative<Model>(av) || !std::holds_alternative<Model>(bv))
                    throw std::invalid_argument("homcheck needs ordinary models");
                auto verdict = check_hom(std::get<DefOp>(hv), std::get<Model>(av), std::get<Model>(bv),
                                         query.hom_star ? ExtMode::Star : ExtMode::Tilde);
                outcome.kind = QueryOutcome::Kind::Verdict;
                outcome.truth = verdict.passed;
                outcome.label = verdict.exhaustive ? "exact" : "consistent-with-sample";
                outcome.detail = verdict.counterexample;
                return outcome;
            }
            case Kind::CheckModal: {
                const Value& v = lookup(query.name);
                if (!std::holds_alternative<DefinableSet>(v))
                    throw std::invalid_argument(query.name + " is not a relation");
                const DefinableSet& rel = std::get<DefinableSet>(v);
                outcome.kind = QueryOutcome::Kind::Bool;
                outcome.truth = modal_via_ext_check(rel, rel.universe());
                return outcome;
            }
            case Kind::Quant: {
                std::vector<std::string> vars;
                std::vector<UPoint> points;
                for (const auto& binder : query.binders) {
                    vars.push_back(binder.var);
                    points.push_back(eval_point(binder.point));
                }
                DefinableSet set =
                    DefinableSet::symbolic(vars.size(), {lower_cell(query.quant_atoms, vars)});
                QuantPrefix prefix;
                for (std::size_t i = 0; i < points.size(); ++i) prefix.emplace_back(i, points[i]);
                outcome.kind = QueryOutcome::Kind::Bool;
                outcome.truth = eval_prefix(prefix, set);
                return outcome;
            }
        }
    } catch (const PrecisionError& e) {
        outcome.precision_failure = e.required_modulus();
        return outcome;
    }
    throw std::logic_error("unreachable query kind");
}

ResultRecord Session::eval_definition(const ast::Statement& st) {
    ResultRecord record;
    record.add("kind", "definition");
    record.add("name", st.name);
    using Kind = ast::Statement::Kind;
    switch (st.kind) {
        case Kind::DefineSet: {
            DefinableSet set = eval_set(st.set);
            record.add("type", "set");
            record.add("arity", std::to_string(set.arity()));
            env_.insert_or_assign(st.name, std::move(set));
            break;
        }
        case Kind::DefineOp: {
            DefOp op = eval_op(st.op);
            record.add("type", "op");
            record.add("arity", std::to_string(op.arity()));
            env_.insert_or_assign(st.name, std::move(op));
            break;
        }
        case Kind::DefineMap: {
            if (!universe_) throw std::invalid_argument("maps by labels need a universe definition");
            std::vector<Int> table(universe_->size(), -1);
            for (const auto& [from, to] : st.map_entries) {
                auto fi = universe_->index_of(from);
                auto ti = universe_->index_of(to);
                if (!fi || !ti) throw std::invalid_argument("unknown element label in map");
                table[*fi] = Int(*ti);
            }
            for (const auto& v : table)
                if (v < 0) throw std::invalid_argument("map must cover every universe element");
            DefOp op = DefOp::finite(universe_, 1, std::move(table));
            record.add("type", "op");
            record.add("arity", "1");
            env_.insert_or_assign(st.name, std::move(op));
            break;
        }
        case Kind::DefinePoint: {
            UPoint point = eval_point(st.point);
            record.add("type", "point");
            record.add("value", point_value_string(point));
            env_.insert_or_assign(st.name, std::move(point));
            break;
        }
        case Kind::DefineModel: {
            Model model = eval_model(st.model);
            record.add("type", "model");
            env_.insert_or_assign(st.name, std::move(model));
            break;
        }
        case Kind::DefineGenModel: {
            GenModel model = eval_genmodel(st.genmodel);
            record.add("type", "genmodel");
            env_.insert_or_assign(st.name, std::move(model));
            break;
        }
        case Kind::DefineUniverse: {
            universe_ = std::make_shared<FiniteUniverse>(st.universe_labels);
            record.fields.clear();
            record.add("kind", "definition");
            record.add("name", "universe");
            record.add("type", "universe");
            record.add("size", std::to_string(universe_->size()));
            break;
        }
        default:
            throw std::logic_error("not a definition");
    }
    return record;
}

ResultRecord Session::eval_directive(const ast::Statement& st) {
    ResultRecord record;
    record.add("kind", "directive");
    record.add("name", st.directive);
    if (st.directive == "precision") {
        if (st.directive_args.size() != 1)
            throw std::invalid_argument(":precision needs one modulus argument");
        default_precision_ = Int(st.directive_args[0]);
        if (default_precision_ < 1) throw std::invalid_argument("precision modulus must be >= 1");
        record.add("value", st.directive_args[0]);
    } else if (st.directive == "seed") {
        if (st.directive_args.size() != 1) throw std::invalid_argument(":seed needs one argument");
        seed_ = std::stoull(st.directive_args[0]);
        record.add("value", st.directive_args[0]);
    } else if (st.directive == "backend") {
        if (st.directive_args.empty()) throw std::invalid_argument(":backend needs an argument");
        record.add("value", st.directive_args[0]);
        if (st.directive_args[0] == "symbolic") universe_ = nullptr;
        // the finite backend is entered through a universe definition
    } else {
        throw std::invalid_argument("unknown directive: " + st.directive);
    }
    return record;
}

ResultRecord Session::eval_query(const ast::Statement& st) {
    ResultRecord record;
    record.add("kind", st.kind == ast::Statement::Kind::Assert ? "assert" : "query");
    record.add("query", print_query_echo(st));
    QueryOutcome outcome = run_query_ast(st.query);

    if (outcome.precision_failure) {
        record.add("error", "precision");
        record.add("required_modulus", outcome.precision_failure->str());
    } else {
        switch (outcome.kind) {
            case QueryOutcome::Kind::Bool:
                record.add("verdict", outcome.truth ? "true" : "false");
                break;
            case QueryOutcome::Kind::Verdict:
                record.add("verdict", outcome.truth ? "pass" : "fail");
                if (!outcome.detail.empty()) record.add("counterexample", outcome.detail);
                break;
            case QueryOutcome::Kind::Point:
                record.add("value", point_value_string(*outcome.point));
                break;
            case QueryOutcome::Kind::Set:
                record.add("value", set_to_string(*outcome.set));
                break;
        }
        record.add("precision", outcome.label);
    }

    if (st.kind == ast::Statement::Kind::Assert) {
        bool pass = false;
        switch (st.expected.kind) {
            case ast::Expected::Kind::True:
                pass = !outcome.precision_failure && outcome.kind != QueryOutcome::Kind::Point &&
                       outcome.truth;
                break;
            case ast::Expected::Kind::False:
                pass = !outcome.precision_failure && outcome.kind != QueryOutcome::Kind::Point &&
                       !outcome.truth;
                break;
            case ast::Expected::Kind::Point: {
                if (!outcome.precision_failure && outcome.kind == QueryOutcome::Kind::Point) {
                    UPoint expected = eval_point(st.expected.point);
                    try {
                        pass = equal_points(expected, *outcome.point);
                    } catch (const PrecisionError&) {
                        pass = false;
                    }
                }
                break;
            }
            case ast::Expected::Kind::Error:
                pass = outcome.precision_failure.has_value() &&
                       (!st.expected.error_modulus ||
                        *st.expected.error_modulus == *outcome.precision_failure);
                break;
        }
        record.add("status", pass ? "ok" : "fail");
        if (!pass) {
            record.is_failure = true;
        }
    }
    return record;
}

std::string print_query_echo(const ast::Statement& st);  // forward declared below

ResultRecord Session::run_statement(const ast::Statement& st) {
    using Kind = ast::Statement::Kind;
    auto started = std::chrono::steady_clock::now();
    ResultRecord record;
    try {
        switch (st.kind) {
            case Kind::RunQuery:
            case Kind::Assert:
                if (config_.parallel && !frozen_) frozen_ = true;
                record = eval_query(st);
                break;
            case Kind::Directive:
                record = eval_directive(st);
                break;
            default:
                if (config_.parallel && frozen_)
                    throw std::invalid_argument(
                        "definitions must precede queries when running in parallel");
                record = eval_definition(st);
                break;
        }
    } catch (const std::exception& e) {
        record = ResultRecord{};
        record.add("kind", "error");
        record.add("query", print_statement(st));
        record.add("message", e.what());
        record.is_failure = true;
    }
    if (config_.timings) {
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
        record.add("time_ms", std::to_string(elapsed));
    }
    if (record.is_failure) ++failures_;
    return record;
}

std::vector<ResultRecord> Session::run_script(const ast::Script& script) {
    std::vector<ResultRecord> records;
    if (!config_.parallel) {
        for (const auto& st : script) {
            records.push_back(run_statement(st));
            if (config_.fail_fast && records.back().is_failure) break;
        }
        return records;
    }
    // Parallel batch mode: the environment freezes after the definitions
    // phase, then independent queries evaluate concurrently in order.
    std::size_t split = 0;
    while (split < script.size() && script[split].kind != ast::Statement::Kind::RunQuery &&
           script[split].kind != ast::Statement::Kind::Assert) {
        records.push_back(run_statement(script[split]));
        ++split;
    }
    std::vector<std::future<ResultRecord>> futures;
    for (std::size_t i = split; i < script.size(); ++i) {
        const auto& st = script[i];
        if (st.kind != ast::Statement::Kind::RunQuery && st.kind != ast::Statement::Kind::Assert) {
            futures.emplace_back(std::async(std::launch::deferred, [this, &st] {
                ResultRecord r;
                r.add("kind", "error");
                r.add("query", print_statement(st));
                r.add("message", "definitions must precede queries when running in parallel");
                r.is_failure = true;
                return r;
            }));
            continue;
        }
        futures.emplace_back(std::async(std::launch::async, [this, &st] { return run_statement(st); }));
    }
    for (auto& f : futures) records.push_back(f.get());
    return records;
}

std::vector<ResultRecord> Session::run_text(const std::string& text) {
    return run_script(parse_script(text));
}

std::string Session::render(const ResultRecord& record) const {
    return config_.json ? record.to_json() : record.to_text();
}

std::string Session::environment_listing() const {
    std::string out;
    for (const auto& [name, value] : env_) {
        out += name + " : ";
        if (std::holds_alternative<DefinableSet>(value)) out += "set";
        if (std::holds_alternative<DefOp>(value)) out += "op";
        if (std::holds_alternative<UPoint>(value)) out += "point";
        if (std::holds_alternative<Model>(value)) out += "model";
        if (std::holds_alternative<GenModel>(value)) out += "genmodel";
        out += "\n";
    }
    return out;
}

// --- random scripts for the round-trip property ------------------------------

namespace {

class ScriptGenerator {
public:
    explicit ScriptGenerator(std::uint64_t seed) : gen_(seed) {}

    ast::Script script(int statements) {
        ast::Script out;
        for (int i = 0; i < statements; ++i) out.push_back(statement());
        return out;
    }

private:
    CaseGenerator gen_;

    std::uint64_t pick(std::uint64_t n) {
        return static_cast<std::uint64_t>(gen_.int_in(0, static_cast<long>(n) - 1).convert_to<long>());
    }

    std::string name() {
        static const char* names[] = {"R", "S", "F", "G", "M", "N", "u", "v", "h"};
        return names[pick(9)];
    }

    ast::LinearExpr linear(const std::vector<std::string>& vars) {
        ast::LinearExpr expr;
        std::size_t terms = 1 + pick(2);
        for (std::size_t i = 0; i < terms; ++i) {
            ast::LinearExpr::TermNode term;
            term.coeff = gen_.int_in(-5, 5);
            if (term.coeff == 0) term.coeff = 1;
            if (pick(3) != 0) term.var = vars[pick(vars.size())];
            expr.terms.push_back(std::move(term));
        }
        return expr;
    }

    ast::AtomNode atom(const std::vector<std::string>& vars) {
        ast::AtomNode node;
        node.lhs = linear(vars);
        if (pick(4) == 0) {
            node.is_congruence = true;
            node.modulus = gen_.int_in(2, 6);
            node.residue = mod_floor(gen_.int_in(0, 11), node.modulus);
            return node;
        }
        node.op = static_cast<ast::RelOp>(pick(5));
        node.rhs = linear(vars);
        return node;
    }

    ast::SetExpr comprehension() {
        ast::SetExpr set;
        set.kind = ast::SetExpr::Kind::Compr;
        std::size_t arity = 1 + pick(2);
        set.compr.vars = arity == 1 ? std::vector<std::string>{"x"}
                                    : std::vector<std::string>{"x", "y"};
        std::size_t n = pick(3);
        if (n == 0) {
            set.compr.always_true = pick(2) == 0;
            set.compr.always_false = !set.compr.always_true;
        } else {
            for (std::size_t i = 0; i < n; ++i) set.compr.atoms.push_back(atom(set.compr.vars));
        }
        return set;
    }

    ast::SetExpr set_expr(int depth) {
        if (depth <= 0 || pick(2) == 0) return comprehension();
        ast::SetExpr node;
        switch (pick(3)) {
            case 0:
                node.kind = ast::SetExpr::Kind::Union;
                node.children = {set_expr(depth - 1), set_expr(depth - 1)};
                break;
            case 1:
                node.kind = ast::SetExpr::Kind::Intersect;
                node.children = {set_expr(depth - 1), set_expr(depth - 1)};
                break;
            default:
                node.kind = ast::SetExpr::Kind::Complement;
                node.children = {set_expr(depth - 1)};
                break;
        }
        return node;
    }

    ast::PointLit point() {
        ast::PointLit lit;
        switch (pick(3)) {
            case 0:
                lit.kind = ast::PointLit::Kind::Principal;
                lit.value = gen_.int_in(0, 9);
                break;
            case 1:
                lit.kind = ast::PointLit::Kind::LimInf;
                break;
            default:
                lit.kind = ast::PointLit::Kind::Limit;
                lit.modulus = gen_.int_in(1, 6);
                lit.residue = mod_floor(gen_.int_in(0, 11), lit.modulus);
                break;
        }
        return lit;
    }

    ast::OpDef opdef() {
        ast::OpDef def;
        def.params = pick(2) == 0 ? std::vector<std::string>{"x"}
                                  : std::vector<std::string>{"x", "y"};
        if (pick(2) == 0) {
            def.body.value = linear(def.params);
        } else {
            def.body.is_if = true;
            def.body.condition = {atom(def.params)};
            ast::OpExpr then_branch, else_branch;
            then_branch.value = linear(def.params);
            else_branch.value = linear(def.params);
            def.body.branches = {then_branch, else_branch};
        }
        return def;
    }

    ast::Query query() {
        ast::Query q;
        switch (pick(5)) {
            case 0:
                q.kind = ast::Query::Kind::ExtTilde;
                q.name = name();
                q.args = {point(), point()};
                break;
            case 1:
                q.kind = ast::Query::Kind::ExtStar;
                q.name = name();
                q.args = {point(), point()};
                break;
            case 2:
                q.kind = ast::Query::Kind::ExtMap;
                q.name = name();
                q.args = {point()};
                break;
            case 3: {
                q.kind = ast::Query::Kind::Quant;
                q.binders = {{"x", point()}, {"y", point()}};
                q.quant_atoms = {atom({"x", "y"})};
                break;
            }
            default:
                q.kind = ast::Query::Kind::Pseudo;
                q.name = name();
                q.member = "F";
                break;
        }
        return q;
    }

    ast::Statement statement() {
        ast::Statement st;
        switch (pick(6)) {
            case 0:
                st.kind = ast::Statement::Kind::DefineSet;
                st.name = name();
                st.set = set_expr(2);
                break;
            case 1:
                st.kind = ast::Statement::Kind::DefineOp;
                st.name = name();
                st.op = opdef();
                break;
            case 2:
                st.kind = ast::Statement::Kind::DefinePoint;
                st.name = name();
                st.point = point();
                break;
            case 3:
                st.kind = ast::Statement::Kind::RunQuery;
                st.query = query();
                break;
            case 4: {
                st.kind = ast::Statement::Kind::Assert;
                st.query = query();
                st.expected.kind = pick(2) == 0 ? ast::Expected::Kind::True : ast::Expected::Kind::False;
                break;
            }
            default: {
                st.kind = ast::Statement::Kind::DefineGenModel;
                st.name = name();
                ast::GenEntry f;
                f.kind = ast::GenEntry::Kind::FamilyOp;
                f.name = "F";
                f.param = "m";
                f.family_op.value = linear({"x", "m"});
                f.at = point();
                ast::GenEntry r;
                r.kind = ast::GenEntry::Kind::PrincipalSet;
                r.name = "R";
                r.set = comprehension();
                st.genmodel = {f, r};
                break;
            }
        }
        return st;
    }
};

}  // namespace

ast::Script generate_random_script(std::uint64_t seed, int statements) {
    ScriptGenerator generator(seed);
    return generator.script(statements);
}

}  // namespace ultrext
