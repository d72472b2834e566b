#pragma once

#include "def_op.hpp"
#include "points.hpp"
#include "quantifier.hpp"
#include "set_algebra.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ultrext {

struct Signature {
    struct Symbol {
        std::string name;
        std::size_t arity;
    };
    std::vector<Symbol> functions;
    std::vector<Symbol> relations;
};

// An ordinary first-order model over ℕ (symbolic) or a finite universe, with
// definable interpretations.
class Model {
public:
    Model() = default;
    explicit Model(UniversePtr universe) : universe_(std::move(universe)) {}

    bool is_symbolic() const { return universe_ == nullptr; }
    const UniversePtr& universe() const { return universe_; }

    void add_function(const std::string& name, DefOp op);
    void add_relation(const std::string& name, DefinableSet set);

    const DefOp& function(const std::string& name) const;
    const DefinableSet& relation(const std::string& name) const;
    bool has_function(const std::string& name) const { return functions_.count(name) > 0; }
    bool has_relation(const std::string& name) const { return relations_.count(name) > 0; }

    Signature signature() const;
    const std::map<std::string, DefOp>& functions() const { return functions_; }
    const std::map<std::string, DefinableSet>& relations() const { return relations_; }

private:
    UniversePtr universe_;
    std::map<std::string, DefOp> functions_;
    std::map<std::string, DefinableSet> relations_;
};

// Image of a tuple of points under the extended operation. All-principal
// tuples reproduce the base operation; otherwise the eventually active branch
// along the nested progressions determines the image at the coarsest
// argument modulus.
UPoint ext_map(const DefOp& op, std::span<const UPoint> args);

// The two canonical relation extensions.
bool ext_rel_tilde(const DefinableSet& relation, std::span<const UPoint> args);
bool ext_rel_star(const DefinableSet& relation, std::span<const UPoint> args);

enum class ExtMode { Tilde, Star };

// Extensions are oracles over points, never enumerations.
class ExtendedModel {
public:
    ExtendedModel(Model base, ExtMode mode) : base_(std::move(base)), mode_(mode) {}

    const Model& base() const { return base_; }
    ExtMode mode() const { return mode_; }

    UPoint apply(const std::string& function_name, std::span<const UPoint> args) const;
    bool holds(const std::string& relation_name, std::span<const UPoint> args) const;

private:
    Model base_;
    ExtMode mode_;
};

ExtendedModel extend_model(Model base, ExtMode mode);

// Alias of pushforward, surfaced next to the homomorphism checks.
UPoint ext_hom(const DefOp& unary_map, const UPoint& point);

using RelationOracle = std::function<bool(std::span<const UPoint>)>;

struct ClopenVerdict {
    bool refuted = false;
    std::string counterexample;  // set when refuted
};

// Sound refuter, sampling-based affirmer: compares the oracle with the tilde
// extension of the candidate on a structured sample of principal and limit
// tuples. A pass means "consistent with the sample", never a proof.
ClopenVerdict is_right_clopen(const RelationOracle& oracle, std::size_t arity,
                              const DefinableSet& candidate, const Int& bound = 4);

struct HomVerdict {
    bool passed = true;
    bool exhaustive = false;  // finite backend: every tuple checked
    std::string counterexample;
    std::vector<std::string> precision_notes;  // per-sample precision failures, not fatal
};

struct HomSampleConfig {
    Int principal_bound = 5;  // principal coordinates 0..bound
    Int modulus_bound = 4;    // limit points with modulus <= bound
};

// Checks that the continuous extension of h is a homomorphism of the
// mode-extension of `source` into the mode-extension of `target`. Finite
// backend: exhaustive. Symbolic: refutation-sound, affirmation by sampling.
HomVerdict check_hom(const DefOp& h, const Model& source, const Model& target, ExtMode mode,
                     const HomSampleConfig& config = {});

// Structured sample of points used by the samplers above.
std::vector<UPoint> sample_points(bool symbolic, const UniversePtr& universe,
                                  const Int& principal_bound, const Int& modulus_bound);

}  // namespace ultrext
