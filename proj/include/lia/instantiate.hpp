#ifndef LIA_INSTANTIATE_HPP
#define LIA_INSTANTIATE_HPP

#include "formula.hpp"

namespace lia {

// Meet-semilattice element of the formula-analysis framework: bottom (no
// information, absorbing), a finite value, or the one-sided infinity of the
// analysis direction.
struct BoundEstimate {
    enum class Tag : u8 { Bottom, Finite, PlusInf, MinusInf };
    Tag tag = Tag::Bottom;
    Int value = 0;

    static BoundEstimate bottom() { return {}; }
    static BoundEstimate finite(Int v) { return {Tag::Finite, std::move(v)}; }
    static BoundEstimate plus_inf() { return {Tag::PlusInf, 0}; }
    static BoundEstimate minus_inf() { return {Tag::MinusInf, 0}; }

    bool is_bottom() const { return tag == Tag::Bottom; }
    bool is_finite() const { return tag == Tag::Finite; }
    bool operator==(const BoundEstimate&) const = default;
};

// Integer interval with optional infinite endpoints; bottom is distinct from
// the empty interval.
struct IntRange {
    bool bottom = false;
    bool has_lo = false, has_hi = false;  // absent endpoint = infinite
    Int lo = 0, hi = 0;

    static IntRange bot() { return {true, false, false, 0, 0}; }
    static IntRange full() { return {}; }
    static IntRange interval(Int a, Int b) { return {false, true, true, std::move(a), std::move(b)}; }
    static IntRange at_most(Int b) { return {false, false, true, 0, std::move(b)}; }
    static IntRange at_least(Int a) { return {false, true, false, std::move(a), 0}; }

    bool is_empty() const { return !bottom && has_lo && has_hi && lo > hi; }
    bool is_finite() const { return !bottom && has_lo && has_hi; }
    IntRange intersect(const IntRange& other) const;
    bool operator==(const IntRange&) const = default;
};

// Per-atom analyses. All three treat any subformula without an occurrence of
// y as unconstraining; atoms containing y follow the inequality rules, and
// any other y-containing shape is bottom.
BoundEstimate decat(Formula f, VarId y);
BoundEstimate incat(Formula f, VarId y);
IntRange rangeat(Formula f, VarId y);

// flow over a conjunction tree with the given meet; non-conjunction nodes are
// handed to the atom analysis.
BoundEstimate dec(Formula f, VarId y);
BoundEstimate inc(Formula f, VarId y);
IntRange range_of(Formula f, VarId y);

struct MonotoneReport {
    bool applied = false;
    VarId var;
    bool from_below = true;
    bool used_congruence = false;
    Int substituted = 0;  // the value put in for the variable (c or c')
    bool infinite = false;
};

// Monotone substitution: exists y (phi) or exists y (phi && y ~ k (mod m)),
// with phi conjunction-shaped. Returns the input when inapplicable.
Formula instantiate_monotone(FormulaStore& store, Formula f, MonotoneReport* report = nullptr);

// Range-based expansion with width parameter N; an empty derived range gives
// bottom. Returns the input when inapplicable.
Formula instantiate_range(FormulaStore& store, Formula f, const Int& N);

struct LinearizationParams {
    Int alpha = 0, ell1 = 0, count = 0;  // alpha, l1, N of the rewriting rule
    bool from_below = true;
};

// Replaces a two-variable congruence under exists y,m by the linear
// equations crossing the relevant rectangle. Applies when the equation count
// is 1, or for any count with `exact`. Returns the input when inapplicable.
Formula linearize_mod(FormulaStore& store, Formula f, bool exact,
                      LinearizationParams* params = nullptr);

struct InstantiateConfig {
    Int range_bound = 0;
    bool linearize_exact = false;
};

// Applies the three instantiations everywhere in the formula, innermost
// first, repeating per node until none fires.
Formula instantiate_pass(FormulaStore& store, Formula f, const InstantiateConfig& config,
                         u64* hits = nullptr);

}  // namespace lia

#endif
