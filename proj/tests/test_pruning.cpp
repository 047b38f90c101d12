#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"

#include "lia/corpus.hpp"
#include "lia/eval.hpp"
#include "lia/subsume.hpp"

#include <random>

using namespace lia;
using lia::test::Ctx;

namespace {

// Rebuilds f with inequality constants shifted; produces formulas related to
// f by subsumption reasonably often.
Formula mutate(FormulaStore& s, Formula f, std::mt19937_64& rng) {
    switch (f->kind) {
        case Kind::Atom:
            if (f->atom.rel == Rel::LEQ) {
                LinearAtom a = f->atom;
                a.constant += static_cast<int>(rng() % 5) - 2;
                return s.atom(std::move(a));
            }
            return f;
        case Kind::Not: return s.negate(mutate(s, f->child(), rng));
        case Kind::And:
        case Kind::Or: {
            std::vector<Formula> kids;
            for (Formula c : f->children) kids.push_back(mutate(s, c, rng));
            return f->kind == Kind::And ? s.conj(std::move(kids)) : s.disj(std::move(kids));
        }
        case Kind::Exists: return s.exists(f->bound, mutate(s, f->child(), rng));
        default: return f;
    }
}

}  // namespace

TEST_CASE("subsumption on inequality atoms compares constants") {
    Ctx c;
    CHECK(subsumes(c.leq({{c.x, 1}, {c.y, 2}}, 0), c.leq({{c.x, 1}, {c.y, 2}}, 1)));
    CHECK(subsumes(c.leq({{c.x, 1}}, -8), c.leq({{c.x, 1}}, -6)));
    CHECK(!subsumes(c.leq({{c.x, 1}}, -6), c.leq({{c.x, 1}}, -8)));
    CHECK(!subsumes(c.leq({{c.x, 1}}, 5), c.leq({{c.y, 1}}, 5)));
    CHECK(!subsumes(c.leq({{c.x, 1}, {c.y, 2}}, 0), c.leq({{c.x, 1}, {c.y, 3}}, 1)));
    // equalities and congruences only by identity
    CHECK(subsumes(c.eq({{c.x, 1}}, 3), c.eq({{c.x, 1}}, 3)));
    CHECK(!subsumes(c.eq({{c.x, 1}}, 3), c.eq({{c.x, 1}}, 4)));
    CHECK(!subsumes(c.eq({{c.x, 1}}, 3), c.leq({{c.x, 1}}, 3)));
}

TEST_CASE("subsumption structural rules") {
    Ctx c;
    Formula a0 = c.leq({{c.x, 1}}, 0);
    Formula a1 = c.leq({{c.x, 1}}, 1);
    Formula b0 = c.leq({{c.y, 1}}, 0);
    Formula b1 = c.leq({{c.y, 1}}, 1);

    // conjunction: every right conjunct subsumes some left conjunct
    CHECK(subsumes(c.s.conj(a0, b0), c.s.conj(a1, b1)));
    CHECK(subsumes(c.s.conj(a0, b0), a1));
    CHECK(!subsumes(c.s.conj(a1, b0), c.s.conj(a0, b1)));

    // disjunction: every left disjunct subsumed by some right disjunct
    CHECK(subsumes(c.s.disj(a0, b0), c.s.disj(a1, b1)));
    CHECK(subsumes(a0, c.s.disj(a1, b0)));
    CHECK(!subsumes(c.s.disj(a1, b0), a0));

    // negation is contravariant
    Formula e0 = c.s.exists({c.z}, c.s.conj(c.leq({{c.z, 1}, {c.x, 1}}, 0), a0));
    Formula e1 = c.s.exists({c.z}, c.s.conj(c.leq({{c.z, 1}, {c.x, 1}}, 0), a1));
    CHECK(subsumes(e0, e1));
    CHECK(subsumes(c.s.negate(e1), c.s.negate(e0)));
    CHECK(!subsumes(c.s.negate(e0), c.s.negate(e1)));

    // mixed arities
    CHECK(subsumes(c.s.conj({a0, b0, c.eq({{c.z, 1}}, 2)}), c.s.conj(a1, b1)));
}

TEST_CASE("prune_disjunction keeps the weakest disjuncts") {
    Ctx c;
    Formula strong = c.leq({{c.x, 1}}, -8);
    Formula weak = c.leq({{c.x, 1}}, -6);
    CHECK(prune_disjunction({weak, strong}) == std::vector<Formula>{weak});
    CHECK(prune_disjunction({strong, weak}) == std::vector<Formula>{weak});
    CHECK(prune_disjunction({weak}) == std::vector<Formula>{weak});

    // conjunction-shaped disjuncts under a binder, as produced by projection;
    // the congruence residue separates the first from the other two
    auto state = [&](Int c1, Int c2, Int res) {
        return c.s.exists({c.y, c.m},
                          c.s.conj({c.leq({{c.x, 1}, {c.m, 3}, {c.y, -1}}, c1),
                                    c.leq({{c.y, 1}}, -1), c.leq({{c.m, 1}}, c2),
                                    c.leq({{c.m, -1}}, 0),
                                    c.cong({{c.y, 1}, {c.m, -1}}, res, 7)}));
    };
    Formula phi1 = state(4, 3, 3);
    Formula phi2 = state(1, 1, 0);
    Formula phi3 = state(0, 0, 0);
    REQUIRE(subsumes(phi3, phi2));
    REQUIRE(!subsumes(phi2, phi1));
    auto kept = prune_disjunction({phi1, phi2, phi3});
    CHECK(kept == std::vector<Formula>{phi1, phi2});
}

TEST_CASE("no kept disjunct subsumes another") {
    Ctx c;
    std::mt19937_64 rng(5);
    CorpusOptions opts;
    opts.count = 60;
    opts.seed = 31;
    auto corpus = make_corpus(c.s, opts);
    for (std::size_t i = 0; i + 2 < corpus.size(); i += 3) {
        std::vector<Formula> in = {corpus[i], mutate(c.s, corpus[i], rng),
                                   mutate(c.s, corpus[i], rng), corpus[i + 1]};
        auto kept = prune_disjunction(in);
        REQUIRE(!kept.empty());
        for (Formula a : kept)
            for (Formula b : kept)
                if (a != b) CHECK(!subsumes(a, b));
        // removed disjuncts are covered by kept ones
        for (Formula d : in) {
            bool covered = false;
            for (Formula k : kept)
                if (subsumes(d, k)) covered = true;
            CHECK(covered);
        }
    }
}

TEST_CASE("subsumption is sound: bounded-model inclusion") {
    Ctx c;
    std::mt19937_64 rng(17);
    CorpusOptions opts;
    opts.count = 150;
    opts.seed = 51;
    auto corpus = make_corpus(c.s, opts);

    int positives = 0;
    for (Formula f : corpus) {
        Formula g = mutate(c.s, f, rng);
        for (auto [a, b] : {std::pair{f, g}, std::pair{g, f}}) {
            if (!subsumes(a, b) || a == b) continue;
            ++positives;
            s64 box = free_vars(a).size() >= 3 ? 10 : 24;
            CAPTURE(to_text(a, c.s.vars));
            CAPTURE(to_text(b, c.s.vars));
            CHECK(models_subset_boxed(a, b, box));
        }
    }
    // the mutation scheme must actually exercise the relation
    CHECK(positives > 40);
}

TEST_CASE("subsumption is reflexive and transitive on sampled triples") {
    Ctx c;
    std::mt19937_64 rng(77);
    CorpusOptions opts;
    opts.count = 40;
    opts.seed = 8;
    auto corpus = make_corpus(c.s, opts);
    SubsumeCache cache;
    for (Formula f : corpus) {
        CHECK(subsumes(f, f, &cache));
        Formula g = mutate(c.s, f, rng);
        Formula h = mutate(c.s, g, rng);
        for (auto [a, b, d] : {std::tuple{f, g, h}, {h, g, f}, {g, f, h}}) {
            if (subsumes(a, b, &cache) && subsumes(b, d, &cache))
                CHECK(subsumes(a, d, &cache));
        }
    }
}

TEST_CASE("prune_disjunctions_everywhere preserves the model set") {
    Ctx c;
    std::mt19937_64 rng(4);
    CorpusOptions opts;
    opts.count = 80;
    opts.seed = 13;
    auto corpus = make_corpus(c.s, opts);
    for (std::size_t i = 0; i + 1 < corpus.size(); i += 2) {
        Formula f = c.s.disj({corpus[i], mutate(c.s, corpus[i], rng), corpus[i + 1]});
        Formula g = prune_disjunctions_everywhere(c.s, f);
        if (f == g) continue;
        s64 box = free_vars(f).size() >= 3 ? 10 : 20;
        CHECK(models_agree_boxed(f, g, box));
    }
}
