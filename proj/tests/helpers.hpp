#ifndef LIA_TEST_HELPERS_HPP
#define LIA_TEST_HELPERS_HPP

#include "lia/formula.hpp"
#include "lia/eval.hpp"

#include <initializer_list>
#include <utility>
#include <vector>

namespace lia::test {

// A store with a handful of pre-interned variables, declared in a fixed
// order so automaton tracks are stable across tests.
struct Ctx {
    FormulaStore s;
    VarId x, y, z, m, u, v, p, r;

    Ctx() {
        x = s.vars.intern("x");
        y = s.vars.intern("y");
        z = s.vars.intern("z");
        m = s.vars.intern("m");
        u = s.vars.intern("u");
        v = s.vars.intern("v");
        p = s.vars.intern("p");
        r = s.vars.intern("r");
    }

    using Row = std::vector<std::pair<VarId, Int>>;

    Formula leq(Row row, Int c) { return s.leq(std::move(row), std::move(c)); }
    Formula eq(Row row, Int c) { return s.eq(std::move(row), std::move(c)); }
    Formula cong(Row row, Int c, Int mod) {
        return s.cong(std::move(row), std::move(c), std::move(mod));
    }
    // a <= var, i.e. -var <= -a
    Formula geq(VarId var, Int a) { return s.leq({{var, -1}}, -a); }
};

inline std::vector<int> bits(std::initializer_list<int> l) { return std::vector<int>(l); }

}  // namespace lia::test

#endif
