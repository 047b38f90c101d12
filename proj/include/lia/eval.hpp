#ifndef LIA_EVAL_HPP
#define LIA_EVAL_HPP

#include "formula.hpp"

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

namespace lia {

enum class Tri : u8 { False, True, Unknown };

inline Tri tri_not(Tri t) {
    if (t == Tri::Unknown) return Tri::Unknown;
    return t == Tri::True ? Tri::False : Tri::True;
}

// Direct semantics of a (not necessarily canonical) atom under an integer
// assignment; the reference point for canonicalization tests.
bool eval_atom_raw(const std::vector<std::pair<VarId, Int>>& coeffs, Rel rel,
                   const Int& constant, const Int& modulus,
                   const std::function<Int(VarId)>& value_of);

// Bounded-box evaluator. Quantified variables range over intervals derived
// from the conjunct atoms, clipped to [-box, box]; a quantifier whose
// variables are not provably confined to the box yields Unknown instead of a
// definite "false". A plain recursive walk over the syntax tree, independent
// of the automata pipeline.
class BoxedEvaluator {
  public:
    BoxedEvaluator(Formula f, s64 box, u64 point_budget = 10'000'000);
    ~BoxedEvaluator();

    // Truth under an assignment of all free variables of f.
    Tri eval(const std::unordered_map<u32, s64>& free_assignment);

    // Existence of a model with free variables in the box. False is reported
    // only when the derived bounds prove the box exhaustive.
    Tri sat();

    const std::optional<std::unordered_map<u32, s64>>& witness() const { return witness_; }
    u64 points_used() const { return points_; }

  private:
    struct Node;
    struct VarRange;
    u32 compile(Formula f);
    Tri eval_node(u32 idx);
    void derive_range(u32 target, const std::vector<u32>& conjunct_atoms,
                      const std::vector<u32>& unassigned, VarRange& out);
    Tri enumerate(const std::vector<u32>& slots, const std::vector<u32>& conjunct_atoms,
                  u32 body, std::vector<s64>* witness_out);

    Formula root_;
    s64 box_;
    u64 budget_;
    u64 points_ = 0;
    std::vector<Node> nodes_;
    std::unordered_map<u32, u32> slot_of_var_;
    std::vector<u32> free_slots_;
    std::vector<VarId> free_vars_;
    std::vector<s64> env_;
    std::vector<char> env_assigned_;
    std::optional<std::unordered_map<u32, s64>> witness_;
};

// Satisfiability within the box; Unknown when the box may be too small.
Tri brute_force_sat(Formula f, s64 box, u64 point_budget = 10'000'000);

// True iff no box assignment definitely distinguishes f and g.
bool models_agree_boxed(Formula f, Formula g, s64 box, u64 point_budget = 200'000'000);

// True iff no box assignment definitely satisfies f but falsifies g.
bool models_subset_boxed(Formula f, Formula g, s64 box, u64 point_budget = 200'000'000);

}  // namespace lia

#endif
