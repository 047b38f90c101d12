#include "lia/rewrite.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <sstream>

namespace lia {

Formula simplify_bool(FormulaStore& store, Formula f) {
    return store.canonicalize(f);
}

// ---------------------------------------------------------------- negations

namespace {

Formula push_neg_pos(FormulaStore& store, Formula f);

Formula push_neg_neg(FormulaStore& store, Formula f) {
    switch (f->kind) {
        case Kind::Bot: return store.top();
        case Kind::Top: return store.bot();
        case Kind::Atom:
        case Kind::NegAtom: return store.negate(f);
        case Kind::Not: return push_neg_pos(store, f->child());
        case Kind::And: {
            std::vector<Formula> kids;
            for (Formula c : f->children) kids.push_back(push_neg_neg(store, c));
            return store.disj(std::move(kids));
        }
        case Kind::Or: {
            std::vector<Formula> kids;
            for (Formula c : f->children) kids.push_back(push_neg_neg(store, c));
            return store.conj(std::move(kids));
        }
        case Kind::Exists: return store.negate(push_neg_pos(store, f));
    }
    return f;
}

Formula push_neg_pos(FormulaStore& store, Formula f) {
    switch (f->kind) {
        case Kind::Not: return push_neg_neg(store, f->child());
        case Kind::And:
        case Kind::Or: {
            std::vector<Formula> kids;
            for (Formula c : f->children) kids.push_back(push_neg_pos(store, c));
            return f->kind == Kind::And ? store.conj(std::move(kids))
                                        : store.disj(std::move(kids));
        }
        case Kind::Exists: return store.exists(f->bound, push_neg_pos(store, f->child()));
        default: return f;
    }
}

}  // namespace

Formula push_negations(FormulaStore& store, Formula f) {
    return push_neg_pos(store, f);
}

// --------------------------------------------------------------- antiprenex

namespace {

// Places Exists(vs, body) with the quantifier pushed maximally deep.
Formula push_exists(FormulaStore& store, std::vector<VarId> vs, Formula body) {
    std::vector<VarId> used;
    for (VarId v : vs)
        if (mentions_var(body, v)) used.push_back(v);
    if (used.empty()) return body;

    if (body->kind == Kind::Or) {
        std::vector<Formula> kids;
        for (Formula c : body->children) kids.push_back(push_exists(store, used, c));
        return store.disj(std::move(kids));
    }
    if (body->kind == Kind::And) {
        // Group conjuncts into components connected through shared bound
        // variables; conjuncts free of the bound set move outside.
        const auto& conjuncts = body->children;
        std::map<VarId, std::vector<std::size_t>> touching;
        for (std::size_t i = 0; i < conjuncts.size(); ++i)
            for (VarId v : used)
                if (mentions_var(conjuncts[i], v)) touching[v].push_back(i);

        std::vector<std::size_t> parent(conjuncts.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        auto find = [&](std::size_t a) {
            while (parent[a] != a) a = parent[a] = parent[parent[a]];
            return a;
        };
        for (const auto& [v, idxs] : touching)
            for (std::size_t i = 1; i < idxs.size(); ++i)
                parent[find(idxs[i])] = find(idxs[0]);

        std::map<std::size_t, std::vector<Formula>> groups;
        std::vector<Formula> outside;
        for (std::size_t i = 0; i < conjuncts.size(); ++i) {
            bool touches = false;
            for (VarId v : used)
                if (mentions_var(conjuncts[i], v)) { touches = true; break; }
            if (touches) groups[find(i)].push_back(conjuncts[i]);
            else outside.push_back(conjuncts[i]);
        }
        if (groups.size() == 1 && outside.empty())
            return store.exists(used, body);
        std::vector<Formula> result = std::move(outside);
        for (auto& [root, group] : groups) {
            Formula g = store.conj(group);
            std::vector<VarId> gvars;
            for (VarId v : used)
                if (mentions_var(g, v)) gvars.push_back(v);
            result.push_back(push_exists(store, std::move(gvars), g));
        }
        return store.conj(std::move(result));
    }
    return store.exists(used, body);
}

}  // namespace

Formula antiprenex(FormulaStore& store, Formula f) {
    switch (f->kind) {
        case Kind::Not: return store.negate(antiprenex(store, f->child()));
        case Kind::And:
        case Kind::Or: {
            std::vector<Formula> kids;
            for (Formula c : f->children) kids.push_back(antiprenex(store, c));
            return f->kind == Kind::And ? store.conj(std::move(kids))
                                        : store.disj(std::move(kids));
        }
        case Kind::Exists:
            return push_exists(store, f->bound, antiprenex(store, f->child()));
        default: return f;
    }
}

// ------------------------------------------------------------- var_minimize

namespace {

std::vector<Formula> conjunct_list(Formula body) {
    if (body->kind == Kind::And) return body->children;
    return {body};
}

// Rewrites one Exists node; nullopt when no pattern applies.
std::optional<Formula> minimize_exists(FormulaStore& store, Formula f) {
    std::vector<Formula> conjuncts = conjunct_list(f->child());
    std::vector<VarId> bound = f->bound;
    bool changed = false;

    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t bi = 0; bi < bound.size(); ++bi) {
            VarId y = bound[bi];
            int count = 0;
            std::size_t at = 0;
            for (std::size_t i = 0; i < conjuncts.size(); ++i) {
                if (mentions_var(conjuncts[i], y)) { ++count; at = i; }
            }
            if (count != 1 || conjuncts[at]->kind != Kind::Atom) continue;
            const LinearAtom& a = conjuncts[at]->atom;
            Int by = a.coeff_of(y);
            if (by == 0) continue;

            if (a.rel == Rel::EQ) {
                // exists y (t + b y = c)  ==  t ~ c (mod |b|)
                std::vector<std::pair<VarId, Int>> rest;
                for (const auto& [v, coef] : a.coeffs)
                    if (v != y) rest.emplace_back(v, coef);
                conjuncts[at] = store.cong(std::move(rest), a.constant, abs_int(by));
                bound.erase(bound.begin() + bi);
                progress = changed = true;
                break;
            }
            if (a.rel == Rel::CONG) {
                // Partner variable bound by the same quantifier and local to
                // the same congruence: coefficients merge into their gcd.
                bool merged = false;
                for (std::size_t bj = 0; bj < bound.size() && !merged; ++bj) {
                    if (bj == bi) continue;
                    VarId z = bound[bj];
                    Int bz = a.coeff_of(z);
                    if (bz == 0) continue;
                    int zcount = 0;
                    for (Formula c : conjuncts)
                        if (mentions_var(c, z)) ++zcount;
                    if (zcount != 1) continue;
                    LinearAtom na = a;
                    Int g = gcd_int(by, bz);
                    std::erase_if(na.coeffs, [&](const auto& p) { return p.first == z; });
                    for (auto& [v, coef] : na.coeffs)
                        if (v == y) coef = g;
                    conjuncts[at] = store.atom(std::move(na));
                    bound.erase(bound.begin() + bj);
                    merged = true;
                }
                if (merged) {
                    progress = changed = true;
                    break;
                }
                continue;
            }
        }
    }
    if (!changed) return std::nullopt;
    return store.exists(bound, store.conj(conjuncts));
}

}  // namespace

Formula var_minimize(FormulaStore& store, Formula f) {
    switch (f->kind) {
        case Kind::Not: return store.negate(var_minimize(store, f->child()));
        case Kind::And:
        case Kind::Or: {
            std::vector<Formula> kids;
            for (Formula c : f->children) kids.push_back(var_minimize(store, c));
            return f->kind == Kind::And ? store.conj(std::move(kids))
                                        : store.disj(std::move(kids));
        }
        case Kind::Exists: {
            Formula rebuilt = store.exists(f->bound, var_minimize(store, f->child()));
            if (rebuilt->kind != Kind::Exists) return rebuilt;
            if (auto r = minimize_exists(store, rebuilt)) return *r;
            return rebuilt;
        }
        default: return f;
    }
}

// ------------------------------------------------------------- bounds_prune

namespace {

struct VarFacts {
    bool has_lo = false, has_hi = false;
    Int lo = 0, hi = 0;
    bool has_cong = false, conflict = false;
    Int cong_mod = 1, cong_val = 0;             // CRT merge of congruences
    std::vector<std::pair<Int, Int>> negcongs;  // (mod, excluded residue)

    void add_lo(const Int& v) { if (!has_lo || v > lo) { lo = v; has_lo = true; } }
    void add_hi(const Int& v) { if (!has_hi || v < hi) { hi = v; has_hi = true; } }
    void add_cong(const Int& m, const Int& k) {
        if (!has_cong) { has_cong = true; cong_mod = m; cong_val = k; return; }
        Crt c = crt_merge(cong_mod, cong_val, m, k);
        if (!c.consistent) { conflict = true; return; }
        cong_mod = c.modulus;
        cong_val = c.value;
    }

    bool violates_negcong(const Int& v) const {
        for (const auto& [m, k] : negcongs)
            if (mod_norm(v, m) == k) return true;
        return false;
    }

    // Snap bounds inward to the nearest values compatible with the
    // congruence facts; skipped values falsify some conjunct.
    void snap() {
        if (conflict) return;
        if (has_lo) {
            if (has_cong) lo += mod_norm(cong_val - lo, cong_mod);
            for (int guard = 0; guard < 64 && violates_negcong(lo); ++guard)
                lo += has_cong ? cong_mod : 1;
        }
        if (has_hi) {
            if (has_cong) hi -= mod_norm(hi - cong_val, cong_mod);
            for (int guard = 0; guard < 64 && violates_negcong(hi); ++guard)
                hi -= has_cong ? cong_mod : 1;
        }
        if (has_lo && has_hi && lo > hi) conflict = true;
        if (has_lo && has_hi && lo == hi) {
            if (has_cong && mod_norm(lo, cong_mod) != cong_val) conflict = true;
            if (violates_negcong(lo)) conflict = true;
        }
    }
};

enum class Verdict { Implied, Contradicts, Open };

// Status of g under the interval facts, judged from single-variable atoms
// only.
Verdict check_against(Formula g, const std::map<VarId, VarFacts>& facts) {
    switch (g->kind) {
        case Kind::Bot: return Verdict::Contradicts;
        case Kind::Top: return Verdict::Implied;
        case Kind::Atom:
        case Kind::NegAtom: {
            const LinearAtom& a = g->atom;
            if (a.coeffs.size() != 1) return Verdict::Open;
            auto it = facts.find(a.coeffs[0].first);
            if (it == facts.end()) return Verdict::Open;
            const VarFacts& vf = it->second;
            const Int& coef = a.coeffs[0].second;

            if (vf.has_lo && vf.has_hi && vf.hi - vf.lo <= 256) {
                // Small finite interval: decide by walking the candidates.
                bool all = true, none = true;
                for (Int v = vf.lo; v <= vf.hi; ++v) {
                    if (vf.has_cong && mod_norm(v, vf.cong_mod) != vf.cong_val) continue;
                    if (vf.violates_negcong(v)) continue;
                    bool holds;
                    Int dot = coef * v;
                    switch (a.rel) {
                        case Rel::EQ: holds = dot == a.constant; break;
                        case Rel::LEQ: holds = dot <= a.constant; break;
                        default: holds = mod_norm(dot - a.constant, a.modulus) == 0;
                    }
                    if (g->kind == Kind::NegAtom) holds = !holds;
                    (holds ? none : all) = false;
                }
                if (none) return Verdict::Contradicts;
                if (all) return Verdict::Implied;
                return Verdict::Open;
            }

            // Wide or half-open interval: endpoint comparisons only.
            if (g->kind == Kind::Atom && a.rel == Rel::LEQ) {
                Int bound = coef > 0 ? floor_div(a.constant, coef)
                                     : ceil_div(a.constant, coef);
                if (coef > 0) {
                    if (vf.has_hi && vf.hi <= bound) return Verdict::Implied;
                    if (vf.has_lo && vf.lo > bound) return Verdict::Contradicts;
                } else {
                    if (vf.has_lo && vf.lo >= bound) return Verdict::Implied;
                    if (vf.has_hi && vf.hi < bound) return Verdict::Contradicts;
                }
                return Verdict::Open;
            }
            if (g->kind == Kind::Atom && a.rel == Rel::EQ) {
                if ((vf.has_lo && a.constant < vf.lo) || (vf.has_hi && a.constant > vf.hi))
                    return Verdict::Contradicts;
                if (vf.has_cong && mod_norm(a.constant, vf.cong_mod) != vf.cong_val)
                    return Verdict::Contradicts;
                if (vf.violates_negcong(a.constant)) return Verdict::Contradicts;
                return Verdict::Open;
            }
            return Verdict::Open;
        }
        case Kind::And: {
            bool all_implied = true;
            for (Formula c : g->children) {
                Verdict v = check_against(c, facts);
                if (v == Verdict::Contradicts) return Verdict::Contradicts;
                if (v != Verdict::Implied) all_implied = false;
            }
            return all_implied ? Verdict::Implied : Verdict::Open;
        }
        case Kind::Or: {
            bool all_contradict = true;
            for (Formula c : g->children) {
                Verdict v = check_against(c, facts);
                if (v == Verdict::Implied) return Verdict::Implied;
                if (v != Verdict::Contradicts) all_contradict = false;
            }
            return all_contradict ? Verdict::Contradicts : Verdict::Open;
        }
        default: return Verdict::Open;
    }
}

Formula prune_branches(FormulaStore& store, Formula g,
                       const std::map<VarId, VarFacts>& facts) {
    if (g->kind != Kind::Or) return g;
    std::vector<Formula> kept;
    for (Formula c : g->children) {
        Verdict v = check_against(c, facts);
        if (v == Verdict::Contradicts) continue;
        if (v == Verdict::Implied) return store.top();
        kept.push_back(c);
    }
    if (kept.size() == g->children.size()) return g;
    return store.disj(std::move(kept));
}

Formula bounds_prune_conj(FormulaStore& store, std::vector<Formula> conjuncts) {
    for (int round = 0; round < 8; ++round) {
        std::map<VarId, VarFacts> facts;
        std::vector<Formula> rest;
        bool any_fact = false;
        for (Formula c : conjuncts) {
            if (c->kind == Kind::Atom && c->atom.coeffs.size() == 1) {
                VarId v = c->atom.coeffs[0].first;
                const Int& coef = c->atom.coeffs[0].second;
                VarFacts& vf = facts[v];
                any_fact = true;
                switch (c->atom.rel) {
                    case Rel::LEQ:
                        if (coef > 0) vf.add_hi(floor_div(c->atom.constant, coef));
                        else vf.add_lo(ceil_div(c->atom.constant, coef));
                        continue;
                    case Rel::EQ:
                        vf.add_lo(c->atom.constant);  // canonical coefficient is 1
                        vf.add_hi(c->atom.constant);
                        continue;
                    case Rel::CONG:
                        vf.add_cong(c->atom.modulus, c->atom.constant);
                        continue;
                }
            }
            if (c->kind == Kind::NegAtom && c->atom.coeffs.size() == 1 &&
                c->atom.rel == Rel::CONG) {
                VarFacts& vf = facts[c->atom.coeffs[0].first];
                vf.negcongs.emplace_back(c->atom.modulus, c->atom.constant);
                any_fact = true;
                continue;
            }
            rest.push_back(c);
        }
        if (!any_fact) return store.conj(std::move(conjuncts));

        for (auto& [v, vf] : facts) {
            vf.snap();
            if (vf.conflict) return store.bot();
        }

        std::vector<Formula> out;
        for (Formula c : rest) out.push_back(prune_branches(store, c, facts));

        for (auto& [v, vf] : facts) {
            if (vf.has_lo && vf.has_hi && vf.lo == vf.hi) {
                out.push_back(store.eq({{v, 1}}, vf.lo));
                continue;  // congruence facts hold at the point
            }
            if (vf.has_lo) out.push_back(store.leq({{v, -1}}, -vf.lo));
            if (vf.has_hi) out.push_back(store.leq({{v, 1}}, vf.hi));
            if (vf.has_cong && vf.cong_mod > 1)
                out.push_back(store.cong({{v, 1}}, vf.cong_val, vf.cong_mod));
            for (const auto& [m, k] : vf.negcongs)
                out.push_back(store.negate(store.cong({{v, 1}}, k, m)));
        }

        Formula rebuilt = store.conj(out);
        if (rebuilt == store.conj(conjuncts)) return rebuilt;
        if (rebuilt->kind != Kind::And) return rebuilt;
        conjuncts = rebuilt->children;
    }
    return store.conj(std::move(conjuncts));
}

}  // namespace

Formula bounds_prune(FormulaStore& store, Formula f) {
    switch (f->kind) {
        case Kind::Not: return store.negate(bounds_prune(store, f->child()));
        case Kind::Or: {
            std::vector<Formula> kids;
            for (Formula c : f->children) kids.push_back(bounds_prune(store, c));
            return store.disj(std::move(kids));
        }
        case Kind::And: {
            std::vector<Formula> kids;
            for (Formula c : f->children) kids.push_back(bounds_prune(store, c));
            Formula rebuilt = store.conj(std::move(kids));
            if (rebuilt->kind != Kind::And) return rebuilt;
            return bounds_prune_conj(store, rebuilt->children);
        }
        case Kind::Exists:
            return store.exists(f->bound, bounds_prune(store, f->child()));
        default: return f;
    }
}

// ------------------------------------------------------------- iso_conflict

namespace {

constexpr std::size_t kPermCap = 4;

void alpha_key_rec(Formula f, std::map<VarId, int>& binding, int& next, u32 cap,
                   std::string& out, bool* failed);

std::string alpha_key_atom(const LinearAtom& a, std::map<VarId, int>& binding) {
    std::ostringstream os;
    os << static_cast<int>(a.rel) << ";";
    for (const auto& [v, coef] : a.coeffs) {
        auto it = binding.find(v);
        if (it != binding.end()) os << "b" << it->second;
        else os << "f" << v.idx;
        os << ":" << coef << ",";
    }
    os << ";" << a.constant;
    if (a.rel == Rel::CONG) os << ";" << a.modulus;
    return os.str();
}

void alpha_key_rec(Formula f, std::map<VarId, int>& binding, int& next, u32 cap,
                   std::string& out, bool* failed) {
    if (f->size > cap) { *failed = true; return; }
    switch (f->kind) {
        case Kind::Bot: out += "F"; return;
        case Kind::Top: out += "T"; return;
        case Kind::Atom:
            out += "A(" + alpha_key_atom(f->atom, binding) + ")";
            return;
        case Kind::NegAtom:
            out += "G(" + alpha_key_atom(f->atom, binding) + ")";
            return;
        case Kind::Not: {
            out += "N(";
            alpha_key_rec(f->child(), binding, next, cap, out, failed);
            out += ")";
            return;
        }
        case Kind::And:
        case Kind::Or: {
            std::vector<std::string> keys;
            for (Formula c : f->children) {
                std::string k;
                alpha_key_rec(c, binding, next, cap, k, failed);
                if (*failed) return;
                keys.push_back(std::move(k));
            }
            std::sort(keys.begin(), keys.end());
            out += f->kind == Kind::And ? "C(" : "D(";
            for (const auto& k : keys) { out += k; out += "|"; }
            out += ")";
            return;
        }
        case Kind::Exists: {
            if (f->bound.size() > kPermCap) { *failed = true; return; }
            // Canonical numbering of the bound set: the permutation giving
            // the lexicographically smallest body key.
            std::vector<VarId> perm = f->bound;
            std::string best;
            bool have = false;
            do {
                std::map<VarId, int> local = binding;
                int n = next;
                for (VarId v : perm) local[v] = n++;
                std::string k;
                int n2 = n;
                alpha_key_rec(f->child(), local, n2, cap, k, failed);
                if (*failed) return;
                if (!have || k < best) { best = std::move(k); have = true; }
            } while (std::next_permutation(perm.begin(), perm.end()));
            next += static_cast<int>(f->bound.size());
            out += "E" + std::to_string(f->bound.size()) + "(" + best + ")";
            return;
        }
    }
}

std::optional<std::string> alpha_key(Formula f, u32 cap) {
    std::map<VarId, int> binding;
    int next = 0;
    std::string out;
    bool failed = false;
    alpha_key_rec(f, binding, next, cap, out, &failed);
    if (failed) return std::nullopt;
    return out;
}

Formula iso_conflict_rec(FormulaStore& store, Formula f, u32 cap) {
    switch (f->kind) {
        case Kind::Not: return store.negate(iso_conflict_rec(store, f->child(), cap));
        case Kind::Or: {
            std::vector<Formula> kids;
            for (Formula c : f->children) kids.push_back(iso_conflict_rec(store, c, cap));
            return store.disj(std::move(kids));
        }
        case Kind::Exists:
            return store.exists(f->bound, iso_conflict_rec(store, f->child(), cap));
        case Kind::And: {
            std::vector<Formula> kids;
            for (Formula c : f->children) kids.push_back(iso_conflict_rec(store, c, cap));
            Formula rebuilt = store.conj(std::move(kids));
            if (rebuilt->kind != Kind::And) return rebuilt;

            std::vector<std::string> positive;
            for (Formula c : rebuilt->children) {
                if (c->kind == Kind::Not || c->kind == Kind::NegAtom) continue;
                if (auto k = alpha_key(c, cap)) positive.push_back(std::move(*k));
            }
            std::sort(positive.begin(), positive.end());
            for (Formula c : rebuilt->children) {
                Formula inner = nullptr;
                if (c->kind == Kind::Not) inner = c->child();
                else if (c->kind == Kind::NegAtom) inner = store.negate(c);
                else continue;
                if (auto k = alpha_key(inner, cap))
                    if (std::binary_search(positive.begin(), positive.end(), *k))
                        return store.bot();
            }
            return rebuilt;
        }
        default: return f;
    }
}

}  // namespace

Formula iso_conflict(FormulaStore& store, Formula f) {
    return iso_conflict_rec(store, f, RewriteLimits{}.iso_node_cap);
}

// ----------------------------------------------------------------- pipeline

Formula rewrite_pipeline(FormulaStore& store, Formula f, u64* hits,
                         const RewriteLimits& limits) {
    for (u32 pass = 0; pass < limits.max_passes; ++pass) {
        Formula before = f;
        auto step = [&](Formula (*rule)(FormulaStore&, Formula)) {
            Formula next = rule(store, f);
            if (next != f && hits) ++*hits;
            f = next;
        };
        step(&push_negations);
        step(&antiprenex);
        step(&var_minimize);
        step(&simplify_bool);
        step(&bounds_prune);
        step(&iso_conflict);
        if (f == before) break;
    }
    return f;
}

}  // namespace lia
