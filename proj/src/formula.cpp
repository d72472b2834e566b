#include "formula.hpp"

namespace ultrext {

Formula Formula::equal(Term a, Term b) {
    Formula f;
    f.kind = Kind::Equal;
    f.terms = {std::move(a), std::move(b)};
    return f;
}

Formula Formula::atom(std::string relation, std::vector<Term> terms) {
    Formula f;
    f.kind = Kind::Atom;
    f.name = std::move(relation);
    f.terms = std::move(terms);
    return f;
}

Formula Formula::negation(Formula inner) {
    Formula f;
    f.kind = Kind::Not;
    f.children = {std::move(inner)};
    return f;
}

Formula Formula::conjunction(Formula a, Formula b) {
    Formula f;
    f.kind = Kind::And;
    f.children = {std::move(a), std::move(b)};
    return f;
}

Formula Formula::disjunction(Formula a, Formula b) {
    Formula f;
    f.kind = Kind::Or;
    f.children = {std::move(a), std::move(b)};
    return f;
}

Formula Formula::implication(Formula a, Formula b) {
    Formula f;
    f.kind = Kind::Implies;
    f.children = {std::move(a), std::move(b)};
    return f;
}

Formula Formula::forall(std::string variable, Formula body) {
    Formula f;
    f.kind = Kind::ForAll;
    f.name = std::move(variable);
    f.children = {std::move(body)};
    return f;
}

Formula Formula::exists(std::string variable, Formula body) {
    Formula f;
    f.kind = Kind::Exists;
    f.name = std::move(variable);
    f.children = {std::move(body)};
    return f;
}

std::string term_to_string(const Term& term) {
    if (term.kind == Term::Kind::Variable) return term.name;
    std::string out = term.name + "(";
    for (std::size_t i = 0; i < term.args.size(); ++i) {
        if (i) out += ", ";
        out += term_to_string(term.args[i]);
    }
    return out + ")";
}

std::string formula_to_string(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::Equal:
            return term_to_string(f.terms[0]) + " = " + term_to_string(f.terms[1]);
        case Formula::Kind::Atom: {
            std::string out = f.name + "(";
            for (std::size_t i = 0; i < f.terms.size(); ++i) {
                if (i) out += ", ";
                out += term_to_string(f.terms[i]);
            }
            return out + ")";
        }
        case Formula::Kind::Not:
            return "!(" + formula_to_string(f.children[0]) + ")";
        case Formula::Kind::And:
            return "(" + formula_to_string(f.children[0]) + " & " + formula_to_string(f.children[1]) + ")";
        case Formula::Kind::Or:
            return "(" + formula_to_string(f.children[0]) + " | " + formula_to_string(f.children[1]) + ")";
        case Formula::Kind::Implies:
            return "(" + formula_to_string(f.children[0]) + " -> " + formula_to_string(f.children[1]) + ")";
        case Formula::Kind::ForAll:
            return "forall " + f.name + ". (" + formula_to_string(f.children[0]) + ")";
        case Formula::Kind::Exists:
            return "exists " + f.name + ". (" + formula_to_string(f.children[0]) + ")";
    }
    return "";
}

}  // namespace ultrext
