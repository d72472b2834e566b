#include "generalized.hpp"

namespace ultrext {

GenFunction GenFunction::principal(DefOp op) {
    GenFunction f;
    f.op_ = std::move(op);
    return f;
}

GenFunction GenFunction::family(DefOp op_with_parameter, UPoint parameter_point) {
    if (op_with_parameter.arity() < 1)
        throw std::invalid_argument("family operation needs a parameter position");
    if (op_with_parameter.is_symbolic() != parameter_point.is_symbolic())
        throw std::invalid_argument("family backend mismatch");
    GenFunction f;
    f.op_ = std::move(op_with_parameter);
    f.parameter_ = std::move(parameter_point);
    return f;
}

std::size_t GenFunction::arity() const { return is_principal() ? op_.arity() : op_.arity() - 1; }

const UPoint& GenFunction::parameter_point() const {
    if (!parameter_) throw std::logic_error("principal interpretation has no parameter");
    return *parameter_;
}

GenRelation GenRelation::principal(DefinableSet set) {
    GenRelation r;
    r.set_ = std::move(set);
    return r;
}

GenRelation GenRelation::family(DefinableSet set_with_parameter, UPoint parameter_point) {
    if (set_with_parameter.arity() < 1)
        throw std::invalid_argument("family relation needs a parameter position");
    if (set_with_parameter.is_symbolic() != parameter_point.is_symbolic())
        throw std::invalid_argument("family backend mismatch");
    GenRelation r;
    r.set_ = std::move(set_with_parameter);
    r.parameter_ = std::move(parameter_point);
    return r;
}

std::size_t GenRelation::arity() const { return is_principal() ? set_.arity() : set_.arity() - 1; }

const UPoint& GenRelation::parameter_point() const {
    if (!parameter_) throw std::logic_error("principal interpretation has no parameter");
    return *parameter_;
}

UPoint app_tilde(std::span<const UPoint> args, const GenFunction& interp) {
    if (args.size() != interp.arity()) throw std::invalid_argument("application arity mismatch");
    if (interp.is_principal()) return ext_map(interp.op(), args);
    std::vector<UPoint> extended(args.begin(), args.end());
    extended.push_back(interp.parameter_point());
    return ext_map(interp.op(), extended);
}

bool in_tilde(std::span<const UPoint> args, const GenRelation& interp) {
    if (args.size() != interp.arity()) throw std::invalid_argument("membership arity mismatch");
    if (interp.is_principal()) return ext_rel_tilde(interp.set(), args);
    std::vector<UPoint> extended(args.begin(), args.end());
    extended.push_back(interp.parameter_point());
    return ext_rel_tilde(interp.set(), extended);
}

namespace {

UPoint eval_term(const GenModel& model, const Term& term, const Valuation& valuation) {
    if (term.kind == Term::Kind::Variable) {
        auto it = valuation.find(term.name);
        if (it == valuation.end()) throw std::invalid_argument("unbound variable: " + term.name);
        return it->second;
    }
    auto it = model.functions.find(term.name);
    if (it == model.functions.end())
        throw std::invalid_argument("unknown function symbol: " + term.name);
    std::vector<UPoint> args;
    for (const auto& sub : term.args) args.push_back(eval_term(model, sub, valuation));
    return app_tilde(args, it->second);
}

}  // namespace

bool satisfies(const GenModel& model, const Formula& formula, const Valuation& valuation,
               const std::optional<std::vector<UPoint>>& quantifier_witnesses) {
    switch (formula.kind) {
        case Formula::Kind::Equal:
            return equal_points(eval_term(model, formula.terms[0], valuation),
                                eval_term(model, formula.terms[1], valuation));
        case Formula::Kind::Atom: {
            auto it = model.relations.find(formula.name);
            if (it == model.relations.end())
                throw std::invalid_argument("unknown relation symbol: " + formula.name);
            std::vector<UPoint> args;
            for (const auto& term : formula.terms) args.push_back(eval_term(model, term, valuation));
            return in_tilde(args, it->second);
        }
        case Formula::Kind::Not:
            return !satisfies(model, formula.children[0], valuation, quantifier_witnesses);
        case Formula::Kind::And:
            return satisfies(model, formula.children[0], valuation, quantifier_witnesses) &&
                   satisfies(model, formula.children[1], valuation, quantifier_witnesses);
        case Formula::Kind::Or:
            return satisfies(model, formula.children[0], valuation, quantifier_witnesses) ||
                   satisfies(model, formula.children[1], valuation, quantifier_witnesses);
        case Formula::Kind::Implies:
            return !satisfies(model, formula.children[0], valuation, quantifier_witnesses) ||
                   satisfies(model, formula.children[1], valuation, quantifier_witnesses);
        case Formula::Kind::ForAll:
        case Formula::Kind::Exists: {
            std::vector<UPoint> range;
            if (!model.is_symbolic()) {
                for (Int i = 0; i < Int(model.universe->size()); ++i)
                    range.push_back(UPoint::principal_finite(model.universe, i));
            } else if (quantifier_witnesses) {
                range = *quantifier_witnesses;
            } else {
                throw UnsupportedQuantifier();
            }
            bool universal = formula.kind == Formula::Kind::ForAll;
            for (const auto& point : range) {
                Valuation inner = valuation;
                inner.insert_or_assign(formula.name, point);
                bool v = satisfies(model, formula.children[0], inner, quantifier_witnesses);
                if (universal && !v) return false;
                if (!universal && v) return true;
            }
            return universal;
        }
    }
    throw std::logic_error("unreachable formula kind");
}

DefinableSet core_relation(const GenRelation& interp) {
    if (interp.is_principal()) return interp.set();
    return forall_u(interp.parameter_point(), interp.set(), interp.set().arity() - 1);
}

FunctionOracle e_of(const GenFunction& interp) {
    return [interp](std::span<const UPoint> args) { return app_tilde(args, interp); };
}

FunctionOracle E_of(const GenFunction& interp) { return e_of(interp); }  // E and e agree on functions

RelationOracle e_of(const GenRelation& interp) {
    DefinableSet core = core_relation(interp);
    return [core](std::span<const UPoint> args) { return ext_rel_tilde(core, args); };
}

RelationOracle E_of(const GenRelation& interp) {
    DefinableSet core = core_relation(interp);
    return [core](std::span<const UPoint> args) { return ext_rel_star(core, args); };
}

bool is_pseudo_principal(const GenFunction& interp) {
    if (interp.is_principal()) return true;
    const UPoint& w = interp.parameter_point();
    if (w.is_principal()) return true;  // substitution of the generator
    std::size_t n = interp.arity();
    for (const auto& branch : interp.op().branches()) {
        // Region of principal tuples on which this branch is eventually the
        // active one along the parameter point.
        DefinableSet region = forall_u(w, DefinableSet::symbolic(n + 1, {branch.guard}), n);
        if (branch.coeffs[n] == 0) continue;     // value does not move with the parameter
        if (!is_empty(region)) return false;     // some principal tuple escapes to a limit
    }
    return true;
}

GenModel collapse_principal(const GenModel& model) {
    GenModel out;
    out.universe = model.universe;
    for (const auto& [name, interp] : model.relations)
        out.relations.emplace(name, GenRelation::principal(core_relation(interp)));
    for (const auto& [name, interp] : model.functions) {
        if (interp.is_principal()) {
            out.functions.emplace(name, interp);
            continue;
        }
        if (!is_pseudo_principal(interp)) throw NotPseudoPrincipal(name);
        const UPoint& w = interp.parameter_point();
        std::size_t n = interp.arity();
        if (w.is_principal()) {
            out.functions.emplace(
                name, GenFunction::principal(interp.op().substituted(n, w.value())));
            continue;
        }
        std::vector<AffineBranch> branches;
        for (const auto& branch : interp.op().branches()) {
            DefinableSet region = forall_u(w, DefinableSet::symbolic(n + 1, {branch.guard}), n);
            for (const auto& cell : region.cells()) {
                AffineBranch collapsed;
                collapsed.guard = cell;
                collapsed.coeffs.assign(branch.coeffs.begin(), branch.coeffs.begin() + n);
                collapsed.constant = branch.constant;
                branches.push_back(std::move(collapsed));
            }
        }
        out.functions.emplace(name, GenFunction::principal(DefOp::symbolic(n, std::move(branches))));
    }
    return out;
}

Model principal_submodel(const GenModel& model) {
    GenModel collapsed = collapse_principal(model);
    Model out(model.universe);
    for (const auto& [name, interp] : collapsed.functions) out.add_function(name, interp.op());
    for (const auto& [name, interp] : collapsed.relations) out.add_relation(name, interp.set());
    return out;
}

}  // namespace ultrext
