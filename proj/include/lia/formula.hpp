#ifndef LIA_FORMULA_HPP
#define LIA_FORMULA_HPP

#include "ints.hpp"
#include "errors.hpp"

#include <deque>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lia {

// Index into the run-global variable table. The total order on VarId (the
// declaration order) fixes the track order of automata symbols.
struct VarId {
    u32 idx = 0xffffffffu;

    bool valid() const { return idx != 0xffffffffu; }
    friend auto operator<=>(VarId a, VarId b) = default;
};

class VarTable {
  public:
    VarId intern(std::string_view name);
    VarId fresh(std::string_view base);
    bool contains(std::string_view name) const;
    const std::string& name(VarId v) const { return names_.at(v.idx); }
    u32 size() const { return static_cast<u32>(names_.size()); }

  private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, u32> index_;
};

enum class Rel : u8 { EQ, LEQ, CONG };

// Sparse coefficient row over the ordered variable set. Canonical form is
// maintained by FormulaStore::atom: no zero coefficients, coefficients sorted
// by variable, gcd-reduced, and for congruences 0 <= constant < modulus.
struct LinearAtom {
    std::vector<std::pair<VarId, Int>> coeffs;
    Rel rel = Rel::LEQ;
    Int constant = 0;
    Int modulus = 0;  // CONG only, positive

    bool operator==(const LinearAtom& other) const = default;
    Int coeff_of(VarId v) const;
    bool mentions(VarId v) const { return coeff_of(v) != 0; }
    std::size_t hash() const;
};

enum class Kind : u8 { Bot, Top, Atom, NegAtom, Not, And, Or, Exists };

struct FormulaNode;
using Formula = const FormulaNode*;

struct FormulaNode {
    Kind kind;
    u32 id;      // hash-cons id; also the canonical child sort key
    u32 size;    // node count of the subtree
    std::size_t hash;
    LinearAtom atom;                 // Atom / NegAtom
    std::vector<Formula> children;   // Not: 1, And/Or: n >= 2, Exists: 1
    std::vector<VarId> bound;        // Exists only; sorted, nonempty
    std::vector<VarId> fvs;          // cached free variables, sorted

    Formula child() const { return children[0]; }
    bool is_atomic() const { return kind == Kind::Atom || kind == Kind::NegAtom; }
};

inline const std::vector<VarId>& free_vars(Formula f) { return f->fvs; }
bool mentions_var(Formula f, VarId v);

// Hash-consing factory. Structurally equal formulae (up to child order,
// duplicate conjuncts/disjuncts, and gcd scaling of atoms) share one node,
// which makes pointer equality the state-identity test of the derivative
// construction. Not thread-safe; confine one store to one solver run.
class FormulaStore {
  public:
    VarTable vars;

    FormulaStore();
    FormulaStore(const FormulaStore&) = delete;
    FormulaStore& operator=(const FormulaStore&) = delete;

    Formula bot() const { return bot_; }
    Formula top() const { return top_; }

    // Canonicalizes and decides constant atoms; may return top()/bot().
    Formula atom(LinearAtom raw);

    Formula leq(std::vector<std::pair<VarId, Int>> coeffs, Int c);
    Formula eq(std::vector<std::pair<VarId, Int>> coeffs, Int c);
    Formula cong(std::vector<std::pair<VarId, Int>> coeffs, Int c, Int modulus);

    // Involution and constants are folded; negated equalities and inequalities
    // are eliminated eagerly; congruences become NegAtom nodes. Everything
    // else gets a Not node (De Morgan is the rewrite engine's job).
    Formula negate(Formula f);

    // N-ary connectives: flatten same-kind children, drop neutral elements,
    // short-circuit on absorbing ones, sort + deduplicate.
    Formula conj(std::vector<Formula> children);
    Formula disj(std::vector<Formula> children);
    Formula conj(Formula a, Formula b) { return conj(std::vector<Formula>{a, b}); }
    Formula disj(Formula a, Formula b) { return disj(std::vector<Formula>{a, b}); }

    // Binds a set; nested binders are flattened, unused variables dropped.
    Formula exists(std::vector<VarId> vs, Formula body);

    // Bottom-up rebuild through the smart constructors. Idempotent; the
    // identity on formulae built by this store.
    Formula canonicalize(Formula f);

    // substitute(f, y, k): all constant expressions evaluated; y must not be
    // bound anywhere in f.
    Formula substitute(Formula f, VarId y, const Int& k);

    // y := +inf / -inf. Defined only when every atom containing y is an
    // inequality whose y-term evaluates to -inf; throws UndefinedSubstitution
    // otherwise.
    Formula substitute_inf(Formula f, VarId y, bool plus_inf);

    u32 node_count() const { return next_id_; }

  private:
    Formula make(FormulaNode&& node);
    Formula bot_;
    Formula top_;
    u32 next_id_ = 0;
    std::deque<FormulaNode> nodes_;
    std::unordered_map<std::size_t, std::vector<Formula>> table_;
};

// LSBF two's complement: word a0..an decodes to sum a_i 2^i - a_n 2^n.
// Rejects the empty word (at least the sign bit is required).
Int decode_word(const std::vector<int>& bits);

// Shortest encoding; decode_word(encode_int(v)) == v.
std::vector<int> encode_int(const Int& v);

// Deterministic SMT-LIB term printer (round-trips through the parser).
std::string to_smt(Formula f, const VarTable& vars);

// Compact infix rendering for DOT labels and diagnostics.
std::string to_text(Formula f, const VarTable& vars);

}  // namespace lia

#endif
