#pragma once

#include "generalized.hpp"
#include "widesense.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace ultrext {

enum class TriState { True, False, Unstable };

// Sampling window for truncation oracles. The sample starts at the first
// progression index past the relevant period-profile threshold and covers
// `width` further steps; instability past a correct start indicates either a
// genuine precision failure or a bug.
struct TruncationConfig {
    int width = 100;
    Int coord_bound = 50;
    std::uint64_t seed = 0;
};

// Literal sampling of A ∈ u along the generating progression.
TriState oracle_in_ultrafilter(const DefinableSet& unary_set, const UPoint& point,
                               const TruncationConfig& config = {});

// Sampling form of the ultrafilter quantifier for a unary set (the section at
// fixed remaining coordinates).
TriState oracle_forall_u(const UPoint& point, const DefinableSet& unary_set,
                         const TruncationConfig& config = {});

// Witness search along the generating progressions with all limit
// coordinates >= threshold, within a widening box. Heuristic: the box suits
// generators with small coefficients.
bool oracle_star_witness(const DefinableSet& relation, std::span<const UPoint> args,
                         const Int& threshold);

// Explicitly enumerated extension tables of a finite model, evaluated from
// the defining formulas (principal substitution for the nested quantifiers,
// full member/witness expansion for the star prefix).
struct FiniteExtensionTables {
    std::map<std::string, std::vector<Int>> functions;
    std::map<std::string, std::vector<bool>> relations;
};
FiniteExtensionTables oracle_finite_extension(const Model& model, ExtMode mode);

// Brute-force homomorphism verdict on finite base models.
bool oracle_finite_hom(const DefOp& h, const Model& source, const Model& target);

// --- Differential suites ------------------------------------------------------

struct Report {
    std::string name;
    int trials = 0;
    int resolved = 0;  // cases that produced a comparable verdict
    std::vector<std::string> failures;  // minimized descriptions, capped
    bool passed() const { return failures.empty(); }
};

using SuiteFn = std::function<Report(int trials, std::uint64_t seed)>;

const std::map<std::string, SuiteFn>& suite_registry();
std::vector<std::string> suite_names();
Report run_suite(const std::string& name, int trials, std::uint64_t seed);
void register_suite(const std::string& name, SuiteFn fn);

// --- Structured generators (shared by suites and the acceptance harness) ----

class CaseGenerator {
public:
    explicit CaseGenerator(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    Int int_in(long lo, long hi);
    DefinableSet random_set(std::size_t arity, std::size_t max_cells = 3, long coeff_bound = 5,
                            long const_bound = 10);
    DefinableSet small_set(std::size_t arity);  // coefficients within [-2,2], tuned for box oracles
    UPoint random_point(bool allow_principal = true, long max_modulus = 4);
    Model random_finite_model(const UniversePtr& universe, int max_symbols = 2,
                              std::size_t max_arity = 2);
    Formula random_quantifier_free(const std::vector<Signature::Symbol>& relations,
                                   const std::vector<Signature::Symbol>& functions,
                                   const std::vector<std::string>& variables, int depth);

private:
    std::uint64_t next();
    std::uint64_t state_;
};

// Shrinks a failing set by zeroing coefficients and constants while the
// failure predicate stays true.
DefinableSet shrink_set(const DefinableSet& set, const std::function<bool(const DefinableSet&)>& fails);

std::string set_to_string(const DefinableSet& set);

}  // namespace ultrext
