#ifndef LIA_REWRITE_HPP
#define LIA_REWRITE_HPP

#include "formula.hpp"

namespace lia {

// The six equivalence-preserving rewriting rules applied to the input formula
// and to every derivative state. Each rule is idempotent and preserves the
// binary-model set; rewrite_pipeline iterates them to a fixpoint.

// Identity/annihilation laws for top/bottom, collapse of single-child
// connectives, double negation. The smart constructors maintain these
// invariants already; the pass re-establishes them for arbitrary input.
Formula simplify_bool(FormulaStore& store, Formula f);

// Pushes existential quantifiers as deep as possible: distributes them over
// disjunctions, splits independent conjunct groups, drops vacuous binders.
Formula antiprenex(FormulaStore& store, Formula f);

// De Morgan's laws; negation survives only on congruence atoms and on
// existential quantifiers.
Formula push_negations(FormulaStore& store, Formula f);

// Per-variable interval reasoning from single-variable atoms within each
// conjunction: tightens bounds using congruence residues, rewrites the
// variable's atoms to a canonical tight form, kills contradicting disjuncts.
Formula bounds_prune(FormulaStore& store, Formula f);

// Variable-count minimization under a binder: merges congruence variables by
// their coefficient gcd, turns single-use equation variables into congruences.
Formula var_minimize(FormulaStore& store, Formula f);

// Conflict detection for conjunctions containing a subformula and the
// negation of an isomorphic copy (equal up to bound-variable renaming).
Formula iso_conflict(FormulaStore& store, Formula f);

struct RewriteLimits {
    u32 max_passes = 16;
    u32 iso_node_cap = 32;  // candidate size for isomorphism matching
};

Formula rewrite_pipeline(FormulaStore& store, Formula f, u64* hits = nullptr,
                         const RewriteLimits& limits = {});

}  // namespace lia

#endif
