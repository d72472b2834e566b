#pragma once

#include <memory>
#include <string>
#include <vector>

namespace ultrext {

struct Term {
    enum class Kind { Variable, Apply };
    Kind kind = Kind::Variable;
    std::string name;        // variable name, or function symbol for Apply
    std::vector<Term> args;  // Apply only

    static Term variable(std::string name) { return Term{Kind::Variable, std::move(name), {}}; }
    static Term apply(std::string function, std::vector<Term> args) {
        return Term{Kind::Apply, std::move(function), std::move(args)};
    }

    bool operator==(const Term&) const = default;
};

// First-order syntax tree. Classical quantifiers evaluate on the finite
// backend (or over an explicit witness list on the symbolic one).
struct Formula {
    enum class Kind { Equal, Atom, Not, And, Or, Implies, ForAll, Exists };
    Kind kind = Kind::Atom;
    std::string name;                // relation symbol (Atom) or bound variable (quantifiers)
    std::vector<Term> terms;         // Equal: exactly 2; Atom: relation arity
    std::vector<Formula> children;   // Not: 1; And/Or/Implies: 2; quantifiers: 1

    static Formula equal(Term a, Term b);
    static Formula atom(std::string relation, std::vector<Term> terms);
    static Formula negation(Formula f);
    static Formula conjunction(Formula a, Formula b);
    static Formula disjunction(Formula a, Formula b);
    static Formula implication(Formula a, Formula b);
    static Formula forall(std::string variable, Formula body);
    static Formula exists(std::string variable, Formula body);

    bool operator==(const Formula&) const = default;
};

std::string term_to_string(const Term& term);
std::string formula_to_string(const Formula& formula);

}  // namespace ultrext
