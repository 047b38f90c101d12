#ifndef LIA_CORPUS_HPP
#define LIA_CORPUS_HPP

#include "formula.hpp"

#include <random>
#include <vector>

namespace lia {

struct CorpusOptions {
    u64 seed = 1;
    u32 count = 200;
    u32 max_free_vars = 3;
    u32 max_bound_vars = 2;
    int coeff_range = 4;   // coefficients in [-range, range]
    int const_range = 16;  // constants in [-range, range]
    int max_modulus = 9;
    u32 max_depth = 3;
};

// Deterministic seeded corpus of random LIA formulae. Free variables come
// from {x, y, z}; quantified variables are fresh per formula.
std::vector<Formula> make_corpus(FormulaStore& store, const CorpusOptions& opts);

Formula random_formula(FormulaStore& store, std::mt19937_64& rng, const CorpusOptions& opts);

}  // namespace lia

#endif
