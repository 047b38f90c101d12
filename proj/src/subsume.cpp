#include "lia/subsume.hpp"

#include <algorithm>

namespace lia {

namespace {

bool subsumes_rec(Formula f1, Formula f2, SubsumeCache* cache) {
    if (f1 == f2) return true;

    u64 key = 0;
    if (cache) {
        key = (static_cast<u64>(f1->id) << 32) | f2->id;
        auto it = cache->find(key);
        if (it != cache->end()) return it->second;
    }

    bool result = false;
    // Inequality atoms: same coefficient row, weaker constant.
    if (f1->kind == Kind::Atom && f2->kind == Kind::Atom && f1->atom.rel == Rel::LEQ &&
        f2->atom.rel == Rel::LEQ && f1->atom.coeffs == f2->atom.coeffs) {
        result = f1->atom.constant <= f2->atom.constant;
    } else if (f1->kind == Kind::Not && f2->kind == Kind::Not) {
        result = subsumes_rec(f2->child(), f1->child(), cache);
    } else if (f1->kind == Kind::Exists && f2->kind == Kind::Exists &&
               f1->bound == f2->bound) {
        result = subsumes_rec(f1->child(), f2->child(), cache);
    } else if (f1->kind == Kind::Or || f2->kind == Kind::Or) {
        // Every left disjunct must be subsumed by some right disjunct.
        std::vector<Formula> left =
            f1->kind == Kind::Or ? f1->children : std::vector<Formula>{f1};
        std::vector<Formula> right =
            f2->kind == Kind::Or ? f2->children : std::vector<Formula>{f2};
        result = true;
        for (Formula l : left) {
            bool found = false;
            for (Formula r : right)
                if (subsumes_rec(l, r, cache)) { found = true; break; }
            if (!found) { result = false; break; }
        }
    } else if (f1->kind == Kind::And || f2->kind == Kind::And) {
        // Every right conjunct must subsume some left conjunct.
        std::vector<Formula> left =
            f1->kind == Kind::And ? f1->children : std::vector<Formula>{f1};
        std::vector<Formula> right =
            f2->kind == Kind::And ? f2->children : std::vector<Formula>{f2};
        result = true;
        for (Formula r : right) {
            bool found = false;
            for (Formula l : left)
                if (subsumes_rec(l, r, cache)) { found = true; break; }
            if (!found) { result = false; break; }
        }
    }

    if (cache) (*cache)[key] = result;
    return result;
}

}  // namespace

bool subsumes(Formula f1, Formula f2, SubsumeCache* cache) {
    return subsumes_rec(f1, f2, cache);
}

std::vector<Formula> prune_disjunction(const std::vector<Formula>& disjuncts,
                                       SubsumeCache* cache, u64* hits) {
    if (disjuncts.size() <= 1) return disjuncts;

    // Largest first, ties by id: a disjunct subsumed by any other live one is
    // dropped, so of two mutually subsuming disjuncts the shorter survives.
    std::vector<std::size_t> order(disjuncts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (disjuncts[a]->size != disjuncts[b]->size)
            return disjuncts[a]->size > disjuncts[b]->size;
        return disjuncts[a]->id > disjuncts[b]->id;
    });

    std::vector<char> alive(disjuncts.size(), 1);
    for (std::size_t i : order) {
        for (std::size_t j = 0; j < disjuncts.size(); ++j) {
            if (j == i || !alive[j]) continue;
            if (subsumes(disjuncts[i], disjuncts[j], cache)) {
                alive[i] = 0;
                if (hits) ++*hits;
                break;
            }
        }
    }
    std::vector<Formula> kept;
    for (std::size_t i = 0; i < disjuncts.size(); ++i)
        if (alive[i]) kept.push_back(disjuncts[i]);
    return kept;
}

Formula prune_disjunctions_everywhere(FormulaStore& store, Formula f, SubsumeCache* cache,
                                      u64* hits) {
    switch (f->kind) {
        case Kind::Not:
            return store.negate(prune_disjunctions_everywhere(store, f->child(), cache, hits));
        case Kind::Exists:
            return store.exists(
                f->bound, prune_disjunctions_everywhere(store, f->child(), cache, hits));
        case Kind::And: {
            std::vector<Formula> kids;
            for (Formula c : f->children)
                kids.push_back(prune_disjunctions_everywhere(store, c, cache, hits));
            return store.conj(std::move(kids));
        }
        case Kind::Or: {
            std::vector<Formula> kids;
            for (Formula c : f->children)
                kids.push_back(prune_disjunctions_everywhere(store, c, cache, hits));
            Formula rebuilt = store.disj(kids);
            if (rebuilt->kind != Kind::Or) return rebuilt;
            return store.disj(prune_disjunction(rebuilt->children, cache, hits));
        }
        default: return f;
    }
}

}  // namespace lia
