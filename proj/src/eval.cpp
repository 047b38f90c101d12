#include "lia/eval.hpp"

#include <algorithm>
#include <cassert>

namespace lia {

bool eval_atom_raw(const std::vector<std::pair<VarId, Int>>& coeffs, Rel rel,
                   const Int& constant, const Int& modulus,
                   const std::function<Int(VarId)>& value_of) {
    Int dot = 0;
    for (const auto& [v, a] : coeffs) dot += a * value_of(v);
    switch (rel) {
        case Rel::EQ: return dot == constant;
        case Rel::LEQ: return dot <= constant;
        case Rel::CONG: return mod_norm(dot - constant, modulus) == 0;
    }
    return false;
}

struct BoxedEvaluator::Node {
    Kind kind;
    Rel rel = Rel::LEQ;
    bool big = false;  // coefficients/constants exceed the s64 fast path
    s64 constant = 0, modulus = 0;
    Int constant_big, modulus_big;
    std::vector<std::pair<u32, s64>> terms;
    std::vector<std::pair<u32, Int>> terms_big;
    std::vector<u32> children;
    std::vector<u32> bound_slots;
    std::vector<u32> conjunct_atoms;  // Exists: atom conjuncts of the body
};

struct BoxedEvaluator::VarRange {
    bool has_lo = false, has_hi = false, empty = false;
    Int lo = 0, hi = 0;

    void add_lo(const Int& v) {
        if (!has_lo || v > lo) { lo = v; has_lo = true; }
        if (has_hi && lo > hi) empty = true;
    }
    void add_hi(const Int& v) {
        if (!has_hi || v < hi) { hi = v; has_hi = true; }
        if (has_lo && lo > hi) empty = true;
    }
};

namespace {
constexpr s64 kSmallLimit = s64(1) << 31;
}

BoxedEvaluator::~BoxedEvaluator() = default;

BoxedEvaluator::BoxedEvaluator(Formula f, s64 box, u64 point_budget)
    : root_(f), box_(box), budget_(point_budget) {
    compile(f);
    env_.resize(slot_of_var_.size(), 0);
    env_assigned_.resize(slot_of_var_.size(), 0);
    for (VarId v : free_vars(f)) {
        free_vars_.push_back(v);
        free_slots_.push_back(slot_of_var_.at(v.idx));
    }
}

u32 BoxedEvaluator::compile(Formula f) {
    Node n;
    n.kind = f->kind;
    auto slot = [&](VarId v) {
        auto [it, inserted] =
            slot_of_var_.try_emplace(v.idx, static_cast<u32>(slot_of_var_.size()));
        return it->second;
    };
    switch (f->kind) {
        case Kind::Bot:
        case Kind::Top: break;
        case Kind::Atom:
        case Kind::NegAtom: {
            const LinearAtom& a = f->atom;
            n.rel = a.rel;
            n.constant_big = a.constant;
            n.modulus_big = a.modulus;
            if (abs_int(a.constant) >= kSmallLimit) n.big = true;
            if (a.rel == Rel::CONG && a.modulus >= kSmallLimit) n.big = true;
            for (const auto& [v, c] : a.coeffs) {
                if (abs_int(c) >= kSmallLimit) n.big = true;
                n.terms_big.emplace_back(slot(v), c);
            }
            if (!n.big) {
                n.constant = to_s64(a.constant);
                if (a.rel == Rel::CONG) n.modulus = to_s64(a.modulus);
                for (const auto& [s, c] : n.terms_big) n.terms.emplace_back(s, to_s64(c));
            }
            break;
        }
        case Kind::Not:
            n.children.push_back(compile(f->child()));
            break;
        case Kind::And:
        case Kind::Or:
            for (Formula c : f->children) n.children.push_back(compile(c));
            break;
        case Kind::Exists: {
            u32 body_idx = compile(f->child());
            n.children.push_back(body_idx);
            for (VarId y : f->bound) n.bound_slots.push_back(slot(y));
            const Node& body = nodes_[body_idx];
            if (body.kind == Kind::Atom) {
                n.conjunct_atoms.push_back(body_idx);
            } else if (body.kind == Kind::And) {
                for (u32 c : body.children)
                    if (nodes_[c].kind == Kind::Atom) n.conjunct_atoms.push_back(c);
            }
            break;
        }
    }
    nodes_.push_back(std::move(n));
    return static_cast<u32>(nodes_.size() - 1);
}

// Interval for `target` from atom conjuncts whose other variables are all
// currently assigned (the atom is then effectively single-variable).
void BoxedEvaluator::derive_range(u32 target, const std::vector<u32>& conjunct_atoms,
                                  const std::vector<u32>& unassigned, VarRange& out) {
    for (u32 ai : conjunct_atoms) {
        const Node& a = nodes_[ai];
        Int rest = a.constant_big;
        Int coef = 0;
        bool usable = true;
        for (const auto& [s, c] : a.terms_big) {
            if (s == target) { coef = c; continue; }
            bool assigned = env_assigned_[s] &&
                            std::find(unassigned.begin(), unassigned.end(), s) == unassigned.end();
            if (!assigned) { usable = false; break; }
            rest -= c * env_[s];
        }
        if (!usable || coef == 0) continue;
        if (a.rel == Rel::LEQ) {
            if (coef > 0) out.add_hi(floor_div(rest, coef));
            else out.add_lo(ceil_div(rest, coef));
        } else if (a.rel == Rel::EQ) {
            if (rest % coef != 0) { out.empty = true; return; }
            Int v = rest / coef;
            out.add_lo(v);
            out.add_hi(v);
        }
        if (out.empty) return;
    }
}

Tri BoxedEvaluator::eval_node(u32 idx) {
    const Node& n = nodes_[idx];
    switch (n.kind) {
        case Kind::Bot: return Tri::False;
        case Kind::Top: return Tri::True;
        case Kind::Atom:
        case Kind::NegAtom: {
            bool holds;
            if (n.big) {
                Int dot = 0;
                for (const auto& [s, c] : n.terms_big) dot += c * env_[s];
                switch (n.rel) {
                    case Rel::EQ: holds = dot == n.constant_big; break;
                    case Rel::LEQ: holds = dot <= n.constant_big; break;
                    default: holds = mod_norm(dot - n.constant_big, n.modulus_big) == 0;
                }
            } else {
                s64 dot = 0;
                for (const auto& [s, c] : n.terms) dot += c * env_[s];
                switch (n.rel) {
                    case Rel::EQ: holds = dot == n.constant; break;
                    case Rel::LEQ: holds = dot <= n.constant; break;
                    default: holds = (dot - n.constant) % n.modulus == 0;
                }
            }
            if (n.kind == Kind::NegAtom) holds = !holds;
            return holds ? Tri::True : Tri::False;
        }
        case Kind::Not: return tri_not(eval_node(n.children[0]));
        case Kind::And: {
            bool unknown = false;
            for (u32 c : n.children) {
                Tri t = eval_node(c);
                if (t == Tri::False) return Tri::False;
                if (t == Tri::Unknown) unknown = true;
            }
            return unknown ? Tri::Unknown : Tri::True;
        }
        case Kind::Or: {
            bool unknown = false;
            for (u32 c : n.children) {
                Tri t = eval_node(c);
                if (t == Tri::True) return Tri::True;
                if (t == Tri::Unknown) unknown = true;
            }
            return unknown ? Tri::Unknown : Tri::False;
        }
        case Kind::Exists:
            return enumerate(n.bound_slots, n.conjunct_atoms, n.children[0], nullptr);
    }
    return Tri::Unknown;
}

// Odometer enumeration of `slots` over box-clipped derived ranges. A definite
// False needs every variable's derived interval inside the box and no
// Unknown from the body.
Tri BoxedEvaluator::enumerate(const std::vector<u32>& slots,
                              const std::vector<u32>& conjunct_atoms, u32 body,
                              std::vector<s64>* witness_out) {
    std::size_t k = slots.size();
    std::vector<std::pair<s64, s64>> ranges(k);
    bool all_exhaustive = true;
    for (std::size_t i = 0; i < k; ++i) {
        VarRange r;
        derive_range(slots[i], conjunct_atoms, slots, r);
        if (r.empty) return Tri::False;
        bool exhaustive = r.has_lo && r.has_hi && r.lo >= -Int(box_) && r.hi <= Int(box_);
        if (!exhaustive) all_exhaustive = false;
        Int clip_lo = r.has_lo ? std::max(r.lo, Int(-box_)) : Int(-box_);
        Int clip_hi = r.has_hi ? std::min(r.hi, Int(box_)) : Int(box_);
        if (clip_lo > clip_hi) return Tri::Unknown;  // candidates only outside the box
        ranges[i] = {to_s64(clip_lo), to_s64(clip_hi)};
    }

    std::vector<s64> current(k);
    for (std::size_t i = 0; i < k; ++i) current[i] = ranges[i].first;
    for (u32 s : slots) env_assigned_[s] = 1;
    bool saw_unknown = false;
    bool found = false;
    while (true) {
        if (++points_ > budget_)
            throw ResourceLimit("brute-force evaluation exceeded the point budget");
        for (std::size_t i = 0; i < k; ++i) env_[slots[i]] = current[i];
        Tri t = eval_node(body);
        if (t == Tri::True) {
            if (witness_out) *witness_out = current;
            found = true;
            break;
        }
        if (t == Tri::Unknown) saw_unknown = true;
        std::size_t i = 0;
        for (; i < k; ++i) {
            if (current[i] < ranges[i].second) { ++current[i]; break; }
            current[i] = ranges[i].first;
        }
        if (i == k || k == 0) break;
    }
    for (u32 s : slots) env_assigned_[s] = 0;
    if (found) return Tri::True;
    return (all_exhaustive && !saw_unknown) ? Tri::False : Tri::Unknown;
}

Tri BoxedEvaluator::eval(const std::unordered_map<u32, s64>& free_assignment) {
    for (VarId v : free_vars_) {
        auto it = free_assignment.find(v.idx);
        s64 val = it == free_assignment.end() ? 0 : it->second;
        u32 s = slot_of_var_.at(v.idx);
        env_[s] = val;
        env_assigned_[s] = 1;
    }
    return eval_node(static_cast<u32>(nodes_.size() - 1));
}

Tri BoxedEvaluator::sat() {
    u32 root = static_cast<u32>(nodes_.size() - 1);
    std::vector<u32> conjunct_atoms;
    const Node& rn = nodes_[root];
    if (rn.kind == Kind::Atom) conjunct_atoms.push_back(root);
    if (rn.kind == Kind::And)
        for (u32 c : rn.children)
            if (nodes_[c].kind == Kind::Atom) conjunct_atoms.push_back(c);

    std::vector<s64> values;
    Tri t = enumerate(free_slots_, conjunct_atoms, root, &values);
    if (t == Tri::True) {
        witness_.emplace();
        for (std::size_t i = 0; i < free_vars_.size(); ++i)
            (*witness_)[free_vars_[i].idx] = values[i];
    }
    return t;
}

Tri brute_force_sat(Formula f, s64 box, u64 point_budget) {
    BoxedEvaluator ev(f, box, point_budget);
    return ev.sat();
}

namespace {

template <typename Check>
bool enumerate_pairs(Formula f, Formula g, s64 box, u64 point_budget, Check&& check) {
    std::vector<VarId> vars;
    std::set_union(free_vars(f).begin(), free_vars(f).end(), free_vars(g).begin(),
                   free_vars(g).end(), std::back_inserter(vars));
    BoxedEvaluator ef(f, box, point_budget);
    BoxedEvaluator eg(g, box, point_budget);
    std::size_t k = vars.size();
    std::unordered_map<u32, s64> assignment;
    std::vector<s64> current(k, -box);
    u64 points = 0;
    while (true) {
        if (++points > point_budget)
            throw ResourceLimit("brute-force comparison exceeded the point budget");
        for (std::size_t i = 0; i < k; ++i) assignment[vars[i].idx] = current[i];
        if (!check(ef.eval(assignment), eg.eval(assignment))) return false;
        std::size_t i = 0;
        for (; i < k; ++i) {
            if (current[i] < box) { ++current[i]; break; }
            current[i] = -box;
        }
        if (i == k || k == 0) break;
    }
    return true;
}

}  // namespace

bool models_agree_boxed(Formula f, Formula g, s64 box, u64 point_budget) {
    return enumerate_pairs(f, g, box, point_budget, [](Tri a, Tri b) {
        if (a == Tri::Unknown || b == Tri::Unknown) return true;
        return a == b;
    });
}

bool models_subset_boxed(Formula f, Formula g, s64 box, u64 point_budget) {
    return enumerate_pairs(f, g, box, point_budget, [](Tri a, Tri b) {
        return !(a == Tri::True && b == Tri::False);
    });
}

}  // namespace lia
