#include "lia/corpus.hpp"

#include <algorithm>

namespace lia {

namespace {

struct Gen {
    FormulaStore& store;
    std::mt19937_64& rng;
    const CorpusOptions& opts;
    std::vector<VarId> scope;
    u32 binders_left;

    int uniform(int lo, int hi) {
        return static_cast<int>(rng() % static_cast<u64>(hi - lo + 1)) + lo;
    }

    Formula atom() {
        u32 nvars = 1 + rng() % std::min<std::size_t>(scope.size(), 3);
        std::vector<VarId> vars = scope;
        std::shuffle(vars.begin(), vars.end(), rng);
        vars.resize(nvars);
        std::vector<std::pair<VarId, Int>> row;
        for (VarId v : vars) {
            int c = 0;
            while (c == 0) c = uniform(-opts.coeff_range, opts.coeff_range);
            row.emplace_back(v, c);
        }
        Int cst = uniform(-opts.const_range, opts.const_range);
        switch (rng() % 4) {
            case 0: return store.eq(std::move(row), cst);
            case 1: return store.cong(std::move(row), cst, uniform(2, opts.max_modulus));
            default: return store.leq(std::move(row), cst);
        }
    }

    // A bound atom keeping quantified variables box-friendly: v is given an
    // explicit range so brute-force oracles stay decisive more often.
    Formula range_atom(VarId v) {
        int lo = uniform(-opts.const_range, opts.const_range / 2);
        int len = uniform(0, opts.const_range);
        return store.conj(store.leq({{v, -1}}, -lo), store.leq({{v, 1}}, lo + len));
    }

    Formula gen(u32 depth) {
        u32 pick = rng() % 10;
        if (depth == 0 || scope.empty()) pick = 9;
        if (pick < 2 && binders_left > 0) {  // exists
            u32 nbind = 1 + rng() % std::min<u32>(binders_left, 2);
            std::vector<VarId> fresh;
            for (u32 i = 0; i < nbind; ++i) {
                fresh.push_back(store.vars.fresh("q"));
                --binders_left;
            }
            std::size_t mark = scope.size();
            for (VarId v : fresh) scope.push_back(v);
            std::vector<Formula> body;
            body.push_back(gen(depth - 1));
            for (VarId v : fresh) {
                if (rng() % 2) body.push_back(range_atom(v));
                else body.push_back(atom());
            }
            scope.resize(mark);
            return store.exists(fresh, store.conj(std::move(body)));
        }
        if (pick < 4) {  // and / or
            std::vector<Formula> kids;
            u32 n = 2 + rng() % 2;
            for (u32 i = 0; i < n; ++i) kids.push_back(gen(depth - 1));
            return rng() % 2 ? store.conj(std::move(kids)) : store.disj(std::move(kids));
        }
        if (pick < 5) return store.negate(gen(depth - 1));
        return atom();
    }
};

}  // namespace

Formula random_formula(FormulaStore& store, std::mt19937_64& rng, const CorpusOptions& opts) {
    std::vector<VarId> frees;
    const char* names[] = {"x", "y", "z"};
    u32 nfree = 1 + rng() % opts.max_free_vars;
    for (u32 i = 0; i < nfree && i < 3; ++i) frees.push_back(store.vars.intern(names[i]));
    Gen g{store, rng, opts, frees, opts.max_bound_vars};
    return g.gen(opts.max_depth);
}

std::vector<Formula> make_corpus(FormulaStore& store, const CorpusOptions& opts) {
    std::mt19937_64 rng(opts.seed);
    std::vector<Formula> out;
    out.reserve(opts.count);
    while (out.size() < opts.count) {
        Formula f = random_formula(store, rng, opts);
        if (f->kind == Kind::Bot || f->kind == Kind::Top) continue;
        out.push_back(f);
    }
    return out;
}

}  // namespace lia
