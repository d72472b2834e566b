#pragma once

#include "generalized.hpp"

#include <string>
#include <vector>

namespace ultrext {

// --- Finite enumerated carriers -------------------------------------------
//
// The finite backend enumerates whole function and relation spaces, so the
// lifting/projection machinery and the identification maps can be checked
// exhaustively. Sizes are capped so the exhaustive suites stay fast.

class FunctionCarrier {
public:
    static constexpr std::size_t max_size = 512;

    FunctionCarrier(UniversePtr universe, std::size_t arity);

    std::size_t size() const { return size_; }
    DefOp element(std::size_t index) const;
    std::size_t index_of(const DefOp& op) const;
    std::string label(std::size_t index) const;
    const UniversePtr& universe() const { return universe_; }
    std::size_t arity() const { return arity_; }

private:
    UniversePtr universe_;
    std::size_t arity_;
    std::size_t domain_size_;
    std::size_t size_;
};

class RelationCarrier {
public:
    static constexpr std::size_t max_size = 512;

    RelationCarrier(UniversePtr universe, std::size_t arity);

    std::size_t size() const { return size_; }
    DefinableSet element(std::size_t index) const;
    std::size_t index_of(const DefinableSet& set) const;
    std::string label(std::size_t index) const;
    const UniversePtr& universe() const { return universe_; }
    std::size_t arity() const { return arity_; }

private:
    UniversePtr universe_;
    std::size_t arity_;
    std::size_t domain_size_;
    std::size_t size_;
};

// --- Lifting and projection -------------------------------------------------
//
// Ultrafilters over finite carriers are principal; lifting embeds one along
// an injection into a larger carrier, remembering the concentration set.

struct FiniteUltrafilter {
    std::size_t carrier_size = 0;
    std::size_t element = 0;  // principal generator
};

struct LiftedUF {
    std::size_t carrier_size = 0;
    std::size_t element = 0;
    std::vector<std::size_t> concentration;  // image of the source carrier, sorted

    bool concentrated_on(const std::vector<std::size_t>& subset) const;
};

LiftedUF lift(const FiniteUltrafilter& point, std::span<const std::size_t> injection,
              std::size_t target_size);

// Requires the concentration set to belong to the lifted point, i.e. the
// generator must lie in the image of the injection.
FiniteUltrafilter project(const LiftedUF& point, std::span<const std::size_t> injection);

// --- Identification maps on the finite backend ------------------------------

// The +-map followed by lifting: sends an ultrafilter over the function
// carrier to one over the extended-map carrier, concentrated on the image of
// the extension map. On a finite universe the extension is computed honestly
// through the generic engine (and collapses to the original table).
LiftedUF i_map(const FiniteUltrafilter& point, const FunctionCarrier& carrier);

// Relation version of the identification, concentrating on the basic sets.
LiftedUF i_map(const FiniteUltrafilter& point, const RelationCarrier& carrier);

// The x-map analogue for relations, using the star extension as the closure.
LiftedUF I_map(const FiniteUltrafilter& point, const RelationCarrier& carrier);

// The +-map alone (extension-relabel, before lifting).
FiniteUltrafilter plus_map(const FiniteUltrafilter& point, const FunctionCarrier& carrier);

// Limit of a (principal) ultrafilter over an enumerated carrier: the
// generating element, the discrete-topology case.
DefOp limit_of(const FiniteUltrafilter& point, const FunctionCarrier& carrier);
DefinableSet limit_of(const FiniteUltrafilter& point, const RelationCarrier& carrier);
DefOp limit_of(const LiftedUF& point, const FunctionCarrier& carrier);
DefinableSet limit_of(const LiftedUF& point, const RelationCarrier& carrier);

// --- Symbolic wide-sense interpretations ------------------------------------
//
// On the symbolic backend the pushforward representation already names the
// lifted ultrafilter, so i and I are representation tags; their limits are
// the evaluation oracles.

enum class WideTag { LowerI, UpperI };

struct WideRelation {
    WideTag tag;
    GenRelation base;
};

struct WideFunction {
    WideTag tag;  // both tags act identically on functions
    GenFunction base;
};

WideRelation i_map(GenRelation base);
WideRelation I_map(GenRelation base);
WideFunction i_map(GenFunction base);
WideFunction I_map(GenFunction base);

// X-pointwise convergence semantics: the limit of an i-tagged interpretation
// evaluates through extended membership, the limit of an I-tagged one through
// the star extension of the core.
RelationOracle limit_of(const WideRelation& wide);
FunctionOracle limit_of(const WideFunction& wide);

// --- Theorem checks -----------------------------------------------------------

// Computes the self-applied extension over the (finite) tuple space, takes
// the image of the basic set of R, and compares with the star extension; the
// three collapse to R itself over a finite universe.
bool modal_via_ext_check(const DefinableSet& relation, const UniversePtr& universe);

}  // namespace ultrext
