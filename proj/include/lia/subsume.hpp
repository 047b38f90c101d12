#ifndef LIA_SUBSUME_HPP
#define LIA_SUBSUME_HPP

#include "formula.hpp"

#include <unordered_map>

namespace lia {

// Syntactic subsumption preorder: subsumes(f1, f2) implies f1 => f2 over
// binary models. Inequality atoms compare by constant when coefficient rows
// match; conjunctions, disjunctions, negation and quantifiers follow the
// structural rules; everything else falls back to syntactic equality.
// Memoized per store run via the optional cache.
using SubsumeCache = std::unordered_map<u64, bool>;

bool subsumes(Formula f1, Formula f2, SubsumeCache* cache = nullptr);

// Keeps a minimal sublist: every removed disjunct is subsumed by a kept one,
// and no kept disjunct subsumes another. Deterministic: candidates are
// processed largest-first.
std::vector<Formula> prune_disjunction(const std::vector<Formula>& disjuncts,
                                       SubsumeCache* cache = nullptr, u64* hits = nullptr);

// Applies prune_disjunction to every disjunction in the formula.
Formula prune_disjunctions_everywhere(FormulaStore& store, Formula f,
                                      SubsumeCache* cache = nullptr, u64* hits = nullptr);

}  // namespace lia

#endif
