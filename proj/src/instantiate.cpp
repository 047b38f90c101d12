#include "lia/instantiate.hpp"

#include <algorithm>
#include <cassert>
#include <optional>

namespace lia {

IntRange IntRange::intersect(const IntRange& other) const {
    if (bottom || other.bottom) return bot();
    IntRange out = *this;
    if (other.has_lo && (!out.has_lo || other.lo > out.lo)) { out.has_lo = true; out.lo = other.lo; }
    if (other.has_hi && (!out.has_hi || other.hi < out.hi)) { out.has_hi = true; out.hi = other.hi; }
    return out;
}

BoundEstimate decat(Formula f, VarId y) {
    if (!mentions_var(f, y)) return BoundEstimate::plus_inf();
    if (f->kind != Kind::Atom || f->atom.rel != Rel::LEQ) return BoundEstimate::bottom();
    const LinearAtom& a = f->atom;
    Int ay = a.coeff_of(y);
    if (a.coeffs.size() == 1) {
        if (ay > 0) return BoundEstimate::finite(floor_div(a.constant, ay));
        return BoundEstimate::bottom();
    }
    if (ay < 0) return BoundEstimate::plus_inf();
    return BoundEstimate::bottom();
}

BoundEstimate incat(Formula f, VarId y) {
    if (!mentions_var(f, y)) return BoundEstimate::minus_inf();
    if (f->kind != Kind::Atom || f->atom.rel != Rel::LEQ) return BoundEstimate::bottom();
    const LinearAtom& a = f->atom;
    Int ay = a.coeff_of(y);
    if (a.coeffs.size() == 1) {
        if (ay < 0) return BoundEstimate::finite(ceil_div(a.constant, ay));
        return BoundEstimate::bottom();
    }
    if (ay > 0) return BoundEstimate::minus_inf();
    return BoundEstimate::bottom();
}

IntRange rangeat(Formula f, VarId y) {
    if (!mentions_var(f, y)) return IntRange::full();
    if (f->kind != Kind::Atom) return IntRange::bot();
    const LinearAtom& a = f->atom;
    Int ay = a.coeff_of(y);
    switch (a.rel) {
        case Rel::LEQ:
            if (a.coeffs.size() == 1)
                return ay > 0 ? IntRange::at_most(floor_div(a.constant, ay))
                              : IntRange::at_least(ceil_div(a.constant, ay));
            return IntRange::full();
        case Rel::EQ:
            // canonical single-variable equations read y = c
            if (a.coeffs.size() == 1) return IntRange::interval(a.constant, a.constant);
            return IntRange::full();
        case Rel::CONG:
            return IntRange::full();
    }
    return IntRange::bot();
}

namespace {

template <typename Elem, typename AtomFn, typename Meet>
Elem flow(Formula f, VarId y, AtomFn&& atom_fn, Meet&& meet, const Elem& neutral) {
    if (f->kind != Kind::And) return atom_fn(f, y);
    Elem acc = neutral;
    for (Formula c : f->children)
        acc = meet(acc, flow<Elem>(c, y, atom_fn, meet, neutral));
    return acc;
}

BoundEstimate meet_min(const BoundEstimate& a, const BoundEstimate& b) {
    if (a.is_bottom() || b.is_bottom()) return BoundEstimate::bottom();
    if (a.tag == BoundEstimate::Tag::PlusInf) return b;
    if (b.tag == BoundEstimate::Tag::PlusInf) return a;
    return BoundEstimate::finite(std::min(a.value, b.value));
}

BoundEstimate meet_max(const BoundEstimate& a, const BoundEstimate& b) {
    if (a.is_bottom() || b.is_bottom()) return BoundEstimate::bottom();
    if (a.tag == BoundEstimate::Tag::MinusInf) return b;
    if (b.tag == BoundEstimate::Tag::MinusInf) return a;
    return BoundEstimate::finite(std::max(a.value, b.value));
}

template <typename Elem, typename AtomFn, typename Meet>
Elem flow_list(const std::vector<Formula>& conjuncts, VarId y, AtomFn&& atom_fn, Meet&& meet,
               const Elem& neutral) {
    Elem acc = neutral;
    for (Formula c : conjuncts)
        acc = meet(acc, flow<Elem>(c, y, atom_fn, meet, neutral));
    return acc;
}

std::vector<Formula> conjunct_list(Formula body) {
    if (body->kind == Kind::And) return body->children;
    return {body};
}

}  // namespace

BoundEstimate dec(Formula f, VarId y) {
    return flow<BoundEstimate>(f, y, &decat, &meet_min, BoundEstimate::plus_inf());
}

BoundEstimate inc(Formula f, VarId y) {
    return flow<BoundEstimate>(f, y, &incat, &meet_max, BoundEstimate::minus_inf());
}

IntRange range_of(Formula f, VarId y) {
    return flow<IntRange>(
        f, y, &rangeat, [](const IntRange& a, const IntRange& b) { return a.intersect(b); },
        IntRange::full());
}

// ------------------------------------------------------- monotone substitution

Formula instantiate_monotone(FormulaStore& store, Formula f, MonotoneReport* report) {
    if (f->kind != Kind::Exists) return f;
    std::vector<Formula> conjuncts = conjunct_list(f->child());

    for (VarId y : f->bound) {
        // Peel congruences of the shape y ~ k (mod m); several merge by CRT.
        std::vector<Formula> rest;
        bool has_cong = false, inconsistent = false;
        Int M = 1, K = 0;
        for (Formula c : conjuncts) {
            if (c->kind == Kind::Atom && c->atom.rel == Rel::CONG &&
                c->atom.coeffs.size() == 1 && c->atom.coeffs[0].first == y) {
                if (!has_cong) {
                    has_cong = true;
                    M = c->atom.modulus;
                    K = c->atom.constant;
                } else {
                    Crt merged = crt_merge(M, K, c->atom.modulus, c->atom.constant);
                    if (!merged.consistent) { inconsistent = true; break; }
                    M = merged.modulus;
                    K = merged.value;
                }
                continue;
            }
            rest.push_back(c);
        }
        if (inconsistent) return store.bot();

        auto finish = [&](const Int& value, bool from_below) {
            std::vector<Formula> out;
            for (Formula c : rest) out.push_back(store.substitute(c, y, value));
            if (report) {
                report->applied = true;
                report->var = y;
                report->from_below = from_below;
                report->used_congruence = has_cong;
                report->substituted = value;
                report->infinite = false;
            }
            return store.exists(f->bound, store.conj(std::move(out)));
        };
        auto finish_inf = [&](bool plus, bool from_below) {
            std::vector<Formula> out;
            for (Formula c : rest) out.push_back(store.substitute_inf(c, y, plus));
            if (report) {
                report->applied = true;
                report->var = y;
                report->from_below = from_below;
                report->used_congruence = false;
                report->infinite = true;
            }
            return store.exists(f->bound, store.conj(std::move(out)));
        };

        BoundEstimate d = flow_list<BoundEstimate>(rest, y, &decat, &meet_min,
                                                   BoundEstimate::plus_inf());
        if (d.is_finite()) {
            // largest value <= c in the congruence class (or c itself)
            Int value = has_cong ? d.value - mod_norm(d.value - K, M) : d.value;
            return finish(value, true);
        }
        if (d.tag == BoundEstimate::Tag::PlusInf && !has_cong)
            return finish_inf(true, true);

        BoundEstimate i = flow_list<BoundEstimate>(rest, y, &incat, &meet_max,
                                                   BoundEstimate::minus_inf());
        if (i.is_finite()) {
            Int value = has_cong ? i.value + mod_norm(K - i.value, M) : i.value;
            return finish(value, false);
        }
        if (i.tag == BoundEstimate::Tag::MinusInf && !has_cong)
            return finish_inf(false, false);
    }
    return f;
}

// ---------------------------------------------------------- range expansion

Formula instantiate_range(FormulaStore& store, Formula f, const Int& N) {
    if (f->kind != Kind::Exists) return f;
    std::vector<Formula> conjuncts = conjunct_list(f->child());

    for (VarId y : f->bound) {
        IntRange r = flow_list<IntRange>(
            conjuncts, y, &rangeat,
            [](const IntRange& a, const IntRange& b) { return a.intersect(b); },
            IntRange::full());
        if (r.bottom) continue;
        if (r.is_empty()) return store.bot();
        if (!r.is_finite() || r.hi - r.lo > N) continue;

        std::vector<Formula> disjuncts;
        for (Int v = r.lo; v <= r.hi; ++v) {
            std::vector<Formula> out;
            for (Formula c : conjuncts) out.push_back(store.substitute(c, y, v));
            disjuncts.push_back(store.conj(std::move(out)));
        }
        return store.exists(f->bound, store.disj(std::move(disjuncts)));
    }
    return f;
}

// ------------------------------------------------------- modulo linearization

Formula linearize_mod(FormulaStore& store, Formula f, bool exact, LinearizationParams* params) {
    if (f->kind != Kind::Exists) return f;
    std::vector<Formula> conjuncts = conjunct_list(f->child());

    for (std::size_t ci = 0; ci < conjuncts.size(); ++ci) {
        Formula c = conjuncts[ci];
        if (c->kind != Kind::Atom || c->atom.rel != Rel::CONG || c->atom.coeffs.size() != 2)
            continue;
        VarId v0 = c->atom.coeffs[0].first;
        VarId v1 = c->atom.coeffs[1].first;
        if (!std::binary_search(f->bound.begin(), f->bound.end(), v0) ||
            !std::binary_search(f->bound.begin(), f->bound.end(), v1))
            continue;

        std::vector<Formula> rest;
        for (std::size_t i = 0; i < conjuncts.size(); ++i)
            if (i != ci) rest.push_back(conjuncts[i]);

        for (auto [y, m] : {std::pair{v0, v1}, std::pair{v1, v0}}) {
            const Int& M = c->atom.modulus;
            const Int& k = c->atom.constant;
            Int a_y = c->atom.coeff_of(y);
            Int a_m = c->atom.coeff_of(m);

            bool from_below;
            Int cbest;
            BoundEstimate d = flow_list<BoundEstimate>(rest, y, &decat, &meet_min,
                                                       BoundEstimate::plus_inf());
            if (d.is_finite()) {
                from_below = true;
                cbest = d.value;
            } else {
                BoundEstimate i = flow_list<BoundEstimate>(rest, y, &incat, &meet_max,
                                                           BoundEstimate::minus_inf());
                if (!i.is_finite()) continue;
                from_below = false;
                cbest = i.value;
            }

            IntRange rng = flow_list<IntRange>(
                rest, m, &rangeat,
                [](const IntRange& a, const IntRange& b) { return a.intersect(b); },
                IntRange::full());
            if (!rng.is_finite()) continue;
            if (rng.is_empty()) return store.bot();
            const Int& r = rng.lo;
            const Int& s = rng.hi;

            Int alpha = M / gcd_int(a_y, M);

            // The c-best-from-above case reduces to from-below through the
            // mirror y -> -y; the produced equations are identical in the
            // original variables.
            Int ay_eff = from_below ? a_y : -a_y;
            Int c_eff = from_below ? cbest : -cbest;

            bool ratio_positive = (a_m > 0) == (ay_eff > 0);
            Int ell1, ay_times_y1;
            if (ratio_positive) {
                ell1 = ceil_div(ay_eff * (c_eff - alpha + 1) + a_m * r - k, alpha);
                ay_times_y1 = k + ell1 * alpha - a_m * r;
            } else {
                ell1 = ceil_div(ay_eff * (c_eff - alpha + 1) + a_m * s - k, alpha);
                ay_times_y1 = k + ell1 * alpha - a_m * s;
            }
            Int count = ceil_div(ay_eff * c_eff - ay_times_y1 + a_m * (s - r) + 1, alpha);

            if (count < 1) return store.bot();  // no line crosses the rectangle
            if (count != 1 && !exact) continue;

            std::vector<Formula> equations;
            for (Int i = 0; i < count; ++i)
                equations.push_back(
                    store.eq({{y, a_y}, {m, a_m}}, k + (ell1 + i) * alpha));
            rest.push_back(store.disj(std::move(equations)));
            if (params) {
                params->alpha = alpha;
                params->ell1 = ell1;
                params->count = count;
                params->from_below = from_below;
            }
            return store.exists(f->bound, store.conj(std::move(rest)));
        }
    }
    return f;
}

// -------------------------------------------------------------------- pass

namespace {

Formula instantiate_node(FormulaStore& store, Formula f, const InstantiateConfig& config,
                         u64* hits) {
    for (int guard = 0; guard < 8 && f->kind == Kind::Exists; ++guard) {
        Formula next = instantiate_range(store, f, config.range_bound);
        if (next == f) next = instantiate_monotone(store, f);
        if (next == f) next = linearize_mod(store, f, config.linearize_exact);
        if (next == f) break;
        if (hits) ++*hits;
        f = next;
    }
    return f;
}

}  // namespace

Formula instantiate_pass(FormulaStore& store, Formula f, const InstantiateConfig& config,
                         u64* hits) {
    switch (f->kind) {
        case Kind::Not:
            return store.negate(instantiate_pass(store, f->child(), config, hits));
        case Kind::And:
        case Kind::Or: {
            std::vector<Formula> kids;
            for (Formula c : f->children) kids.push_back(instantiate_pass(store, c, config, hits));
            Formula rebuilt = f->kind == Kind::And ? store.conj(std::move(kids))
                                                   : store.disj(std::move(kids));
            if (rebuilt->kind == Kind::Exists) return instantiate_node(store, rebuilt, config, hits);
            return rebuilt;
        }
        case Kind::Exists: {
            Formula rebuilt = store.exists(f->bound, instantiate_pass(store, f->child(), config, hits));
            if (rebuilt->kind != Kind::Exists) return rebuilt;
            return instantiate_node(store, rebuilt, config, hits);
        }
        default: return f;
    }
}

}  // namespace lia
