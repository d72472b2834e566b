#pragma once

#include "extension.hpp"
#include "formula.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace ultrext {

class NotPseudoPrincipal : public std::runtime_error {
public:
    explicit NotPseudoPrincipal(const std::string& symbol)
        : std::runtime_error("interpretation of " + symbol + " is not pseudo-principal") {}
};

class UnsupportedQuantifier : public std::runtime_error {
public:
    UnsupportedQuantifier()
        : std::runtime_error(
              "classical quantifiers need the finite backend or an explicit witness list") {}
};

// Ultrafilter interpretation of a function symbol: the principal point of a
// single operation, or the pushforward of a parameter point along a definable
// family m -> f_m. The family is stored as one operation over (args..., m).
class GenFunction {
public:
    static GenFunction principal(DefOp op);
    static GenFunction family(DefOp op_with_parameter, UPoint parameter_point);

    bool is_principal() const { return !parameter_.has_value(); }
    std::size_t arity() const;
    const DefOp& op() const { return op_; }
    const UPoint& parameter_point() const;

private:
    GenFunction() = default;
    DefOp op_ = identity_op();
    std::optional<UPoint> parameter_;
};

// Ultrafilter interpretation of a relation symbol, mirroring GenFunction:
// principal set, or a definable family m -> R_m stored over (args..., m).
class GenRelation {
public:
    static GenRelation principal(DefinableSet set);
    static GenRelation family(DefinableSet set_with_parameter, UPoint parameter_point);

    bool is_principal() const { return !parameter_.has_value(); }
    std::size_t arity() const;
    const DefinableSet& set() const { return set_; }
    const UPoint& parameter_point() const;

private:
    GenRelation() : set_(DefinableSet::symbolic_empty(1)) {}
    DefinableSet set_;
    std::optional<UPoint> parameter_;
};

struct GenModel {
    UniversePtr universe;  // null: symbolic
    std::map<std::string, GenFunction> functions;
    std::map<std::string, GenRelation> relations;

    bool is_symbolic() const { return universe == nullptr; }
};

// Extended application: the parameter quantifier sits innermost, matching the
// argument order of the application operation (the function slot is last).
UPoint app_tilde(std::span<const UPoint> args, const GenFunction& interp);

// Extended membership, same convention.
bool in_tilde(std::span<const UPoint> args, const GenRelation& interp);

using Valuation = std::map<std::string, UPoint>;

// Satisfaction in a generalized model. Classical quantifiers range over the
// finite universe; on the symbolic backend they need a witness list.
bool satisfies(const GenModel& model, const Formula& formula, const Valuation& valuation,
               const std::optional<std::vector<UPoint>>& quantifier_witnesses = std::nullopt);

// The set the interpretation concentrates on: membership at a tuple equals
// extended membership at the principal points of the tuple.
DefinableSet core_relation(const GenRelation& interp);

using FunctionOracle = std::function<UPoint(std::span<const UPoint>)>;

// Collapse operators. On relations they yield the two canonical extensions of
// the core; on functions they coincide with extended application.
FunctionOracle e_of(const GenFunction& interp);
FunctionOracle E_of(const GenFunction& interp);
RelationOracle e_of(const GenRelation& interp);
RelationOracle E_of(const GenRelation& interp);

// True when extended application sends every principal tuple to a principal
// point; exactly then the collapses of a model are ultrafilter extensions of
// an ordinary model.
bool is_pseudo_principal(const GenFunction& interp);

// Replaces every interpretation by the principal one with the same collapse.
// Function symbols must be pseudo-principal.
GenModel collapse_principal(const GenModel& model);

// The collapsed ordinary model over the base universe (principal submodel).
Model principal_submodel(const GenModel& model);

}  // namespace ultrext
