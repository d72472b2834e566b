#pragma once

#include "points.hpp"
#include "set_algebra.hpp"

#include <utility>
#include <vector>

namespace ultrext {

// Ordered quantifier prefix (∀^u1 x_p1) ... (∀^un x_pn): the first entry is
// the outermost quantifier, mirroring the display order. Quantifiers do not
// commute, so this convention is load-bearing.
using QuantPrefix = std::vector<std::pair<std::size_t, UPoint>>;

// Eliminates x_position under the ultrafilter quantifier for `point`:
// membership of the result at the remaining coordinates equals membership of
// the section in the ultrafilter. Principal points reduce to substitution;
// limit points run per-residue eventual analysis, splitting the progression
// to lcm(M, touched congruence moduli) and demanding extensional agreement
// across the refinements (disagreement raises PrecisionError).
DefinableSet forall_u(const UPoint& point, const DefinableSet& set, std::size_t position);

// Self-dual companion, defined as the complement-conjugate of forall_u; the
// two agree extensionally on every input that resolves.
DefinableSet exists_u(const UPoint& point, const DefinableSet& set, std::size_t position);

// Folds forall_u right-to-left (innermost quantifier eliminated first). The
// prefix must cover every position of the set; the arity-0 result is the
// truth value.
bool eval_prefix(const QuantPrefix& prefix, const DefinableSet& set);

// Evaluation of an arity-0 set.
bool truth_value(const DefinableSet& set);

namespace quantifier_detail {
// A refinement disagreement found while eliminating a limit quantifier; used
// by oracles to justify PrecisionError verdicts. Returns the parameter tuple
// on which two residue refinements disagree, if elimination raises.
struct RefinementConflict {
    Int required_modulus;
    std::vector<Int> parameter_witness;
    Int residue_a;
    Int residue_b;
};
std::optional<RefinementConflict> forall_u_conflict(const UPoint& point, const DefinableSet& set,
                                                    std::size_t position);
}  // namespace quantifier_detail

}  // namespace ultrext
