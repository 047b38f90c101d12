#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"

#include "lia/corpus.hpp"
#include "lia/eval.hpp"
#include "lia/rewrite.hpp"

using namespace lia;
using lia::test::Ctx;

TEST_CASE("simplify_bool: identity and annihilation") {
    Ctx c;
    Formula phi = c.leq({{c.x, 1}}, 4);
    CHECK(c.s.disj(phi, c.s.bot()) == phi);
    CHECK(c.s.conj(phi, c.s.bot()) == c.s.bot());
    CHECK(c.s.conj(phi, c.s.top()) == phi);
    CHECK(c.s.disj(phi, c.s.top()) == c.s.top());
    Formula e = c.s.exists({c.y}, c.leq({{c.x, 1}, {c.y, 1}}, 0));
    CHECK(c.s.negate(c.s.negate(e)) == e);
    CHECK(simplify_bool(c.s, c.s.conj(phi, e)) == c.s.conj(phi, e));
}

TEST_CASE("antiprenex distributes exists over disjunctions") {
    Ctx c;
    Formula phi = c.leq({{c.x, 1}, {c.y, -1}}, 0);
    Formula psi = c.leq({{c.y, 1}, {c.z, 1}}, 3);
    Formula f = c.s.exists({c.y}, c.s.disj(phi, psi));
    CHECK(antiprenex(c.s, f) ==
          c.s.disj(c.s.exists({c.y}, phi), c.s.exists({c.y}, psi)));
}

TEST_CASE("antiprenex shrinks scopes past independent conjuncts") {
    Ctx c;
    Formula phi = c.leq({{c.x, 1}}, 7);  // no y
    Formula psi = c.leq({{c.y, 1}, {c.z, 1}}, 3);
    Formula f = c.s.exists({c.y}, c.s.conj(phi, psi));
    CHECK(antiprenex(c.s, f) == c.s.conj(phi, c.s.exists({c.y}, psi)));

    // vacuous binder
    CHECK(c.s.exists({c.y}, c.leq({{c.x, 1}}, 3)) == c.leq({{c.x, 1}}, 3));

    // independent groups split
    Formula g = c.s.exists({c.y, c.m}, c.s.conj(c.leq({{c.y, 1}, {c.x, 1}}, 0),
                                                c.leq({{c.m, 1}, {c.z, 1}}, 0)));
    Formula split = antiprenex(c.s, g);
    CHECK(split == c.s.conj(c.s.exists({c.y}, c.leq({{c.y, 1}, {c.x, 1}}, 0)),
                            c.s.exists({c.m}, c.leq({{c.m, 1}, {c.z, 1}}, 0))));
}

TEST_CASE("push_negations: De Morgan and atom negation") {
    Ctx c;
    Formula phi = c.leq({{c.x, 1}}, 5);
    Formula psi = c.leq({{c.y, 1}}, 0);
    Formula f = c.s.negate(c.s.conj(phi, psi));
    CHECK(f->kind == Kind::Not);
    CHECK(push_negations(c.s, f) ==
          c.s.disj(c.leq({{c.x, -1}}, -6), c.leq({{c.y, -1}}, -1)));

    CHECK(c.s.negate(c.leq({{c.x, 1}}, 5)) == c.leq({{c.x, -1}}, -6));
    CHECK(c.s.negate(c.eq({{c.x, 1}}, 0)) ==
          c.s.disj(c.leq({{c.x, 1}}, -1), c.leq({{c.x, -1}}, -1)));

    // negation parks on congruences and on quantifiers only
    Formula g = c.s.negate(c.s.exists({c.y}, c.s.conj(c.cong({{c.y, 1}, {c.x, 2}}, 1, 3), psi)));
    Formula pushed = push_negations(c.s, g);
    CHECK(pushed->kind == Kind::Not);
    CHECK(pushed->child()->kind == Kind::Exists);
}

TEST_CASE("bounds_prune tightens intervals using excluded values") {
    Ctx c;
    // x >= 0 && x <= 10 && not(x = 0)  ->  x >= 1 && x <= 10
    Formula f = c.s.conj({c.geq(c.x, 0), c.leq({{c.x, 1}}, 10),
                          c.s.negate(c.eq({{c.x, 1}}, 0))});
    CHECK(bounds_prune(c.s, f) == c.s.conj(c.geq(c.x, 1), c.leq({{c.x, 1}}, 10)));
}

TEST_CASE("bounds_prune kills contradicting branches") {
    Ctx c;
    Formula phi = c.leq({{c.y, 1}, {c.z, 1}}, 5);
    Formula psi = c.leq({{c.y, 1}, {c.z, -1}}, 7);
    // x >= 3 && (phi || (x = 0 && psi))  ->  x >= 3 && phi
    Formula f = c.s.conj(c.geq(c.x, 3),
                         c.s.disj(phi, c.s.conj(c.eq({{c.x, 1}}, 0), psi)));
    CHECK(bounds_prune(c.s, f) == c.s.conj(c.geq(c.x, 3), phi));

    // empty interval
    CHECK(bounds_prune(c.s, c.s.conj(c.leq({{c.x, 1}}, 2), c.geq(c.x, 5))) == c.s.bot());
}

TEST_CASE("bounds_prune uses congruence residues to pin singletons") {
    Ctx c;
    // 0 <= x <= 500 && x ~ 256 (mod 257)  ->  x = 256
    Formula f = c.s.conj({c.geq(c.x, 0), c.leq({{c.x, 1}}, 500), c.cong({{c.x, 1}}, 256, 257)});
    CHECK(bounds_prune(c.s, f) == c.eq({{c.x, 1}}, 256));
}

TEST_CASE("var_minimize merges congruence-only variables by gcd") {
    Ctx c;
    VarId x1 = c.s.vars.intern("x1");
    VarId x2 = c.s.vars.intern("x2");
    // exists x1,x2 (3y + 4 x1 + 6 x2 ~ 0 (mod 5))  ->  exists x1 (3y + 2 x1 ~ 0 (mod 5))
    Formula f = c.s.exists({x1, x2}, c.cong({{c.y, 3}, {x1, 4}, {x2, 6}}, 0, 5));
    CHECK(var_minimize(c.s, f) == c.s.exists({x1}, c.cong({{c.y, 3}, {x1, 2}}, 0, 5)));
}

TEST_CASE("var_minimize turns single-use equation variables into congruences") {
    Ctx c;
    // exists x (y + 3x = 0)  ->  y ~ 0 (mod 3)
    Formula f = c.s.exists({c.x}, c.eq({{c.y, 1}, {c.x, 3}}, 0));
    CHECK(var_minimize(c.s, f) == c.cong({{c.y, 1}}, 0, 3));

    // the b = 0 shape never materializes: zero coefficients are dropped and
    // the vacuous binder goes away at construction
    CHECK(c.s.exists({c.x}, c.eq({{c.y, 2}, {c.x, 0}}, 0)) == c.eq({{c.y, 1}}, 0));

    // a variable used by two conjuncts stays
    Formula g = c.s.exists({c.x}, c.s.conj(c.eq({{c.y, 1}, {c.x, 3}}, 0),
                                           c.leq({{c.x, 1}}, 10)));
    CHECK(var_minimize(c.s, g) == g);
}

TEST_CASE("iso_conflict collapses isomorphic complementary conjuncts") {
    Ctx c;
    // exists x (x > 3 && x + z <= 10) && not(exists y (y > 3 && y + z <= 10))  ->  false
    Formula ex = c.s.exists({c.x}, c.s.conj(c.geq(c.x, 4), c.leq({{c.x, 1}, {c.z, 1}}, 10)));
    Formula ey = c.s.exists({c.y}, c.s.conj(c.geq(c.y, 4), c.leq({{c.y, 1}, {c.z, 1}}, 10)));
    CHECK(iso_conflict(c.s, c.s.conj(ex, c.s.negate(ey))) == c.s.bot());

    // plain phi && not(phi)
    Formula phi = c.s.exists({c.y}, c.leq({{c.y, 1}, {c.x, 1}}, 0));
    CHECK(iso_conflict(c.s, c.s.conj(phi, c.s.negate(phi))) == c.s.bot());
    Formula cng = c.cong({{c.x, 1}}, 1, 3);
    CHECK(iso_conflict(c.s, c.s.conj(cng, c.s.negate(cng))) == c.s.bot());

    // different free variables: not isomorphic
    Formula a = c.s.exists({c.x}, c.leq({{c.x, 1}, {c.z, -1}}, 0));
    Formula b = c.s.exists({c.y}, c.leq({{c.y, 1}, {c.u, -1}}, 0));
    Formula keep = c.s.conj(a, c.s.negate(b));
    CHECK(iso_conflict(c.s, keep) == keep);
}

TEST_CASE("every rule preserves binary models on a random corpus") {
    Ctx c;
    CorpusOptions opts;
    opts.count = 200;
    opts.seed = 20240817;
    auto corpus = make_corpus(c.s, opts);

    using Rule = Formula (*)(FormulaStore&, Formula);
    std::pair<const char*, Rule> rules[] = {
        {"push_negations", &push_negations}, {"antiprenex", &antiprenex},
        {"var_minimize", &var_minimize},     {"simplify_bool", &simplify_bool},
        {"bounds_prune", &bounds_prune},     {"iso_conflict", &iso_conflict},
    };

    for (Formula f : corpus) {
        for (auto [name, rule] : rules) {
            Formula g = rule(c.s, f);
            if (g == f) continue;
            s64 box = free_vars(f).size() >= 3 ? 16 : 32;
            CAPTURE(name);
            CAPTURE(to_text(f, c.s.vars));
            CAPTURE(to_text(g, c.s.vars));
            CHECK(models_agree_boxed(f, g, box));
        }
    }
}

TEST_CASE("rules are idempotent and the pipeline reaches a fixpoint") {
    Ctx c;
    CorpusOptions opts;
    opts.count = 120;
    opts.seed = 99;
    auto corpus = make_corpus(c.s, opts);

    using Rule = Formula (*)(FormulaStore&, Formula);
    Rule rules[] = {&push_negations, &antiprenex,   &var_minimize,
                    &simplify_bool,  &bounds_prune, &iso_conflict};

    for (Formula f : corpus) {
        for (Rule rule : rules) {
            Formula once = rule(c.s, f);
            CHECK(rule(c.s, once) == once);
        }
        Formula fixed = rewrite_pipeline(c.s, f);
        CHECK(rewrite_pipeline(c.s, fixed) == fixed);
        Formula again = fixed;
        for (Rule rule : rules) again = rule(c.s, again);
        CHECK(again == fixed);
    }
}

TEST_CASE("pipeline preserves binary models on the corpus") {
    Ctx c;
    CorpusOptions opts;
    opts.count = 120;
    opts.seed = 7;
    auto corpus = make_corpus(c.s, opts);
    for (Formula f : corpus) {
        Formula g = rewrite_pipeline(c.s, f);
        if (g == f) continue;
        s64 box = free_vars(f).size() >= 3 ? 16 : 32;
        CAPTURE(to_text(f, c.s.vars));
        CAPTURE(to_text(g, c.s.vars));
        CHECK(models_agree_boxed(f, g, box));
    }
}
