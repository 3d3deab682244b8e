#pragma once

// Brute-force witness searches: monochromatic convex subspaces, homothetic
// grids, homogeneous sets (single level and all levels below a bound), and
// invariance witnesses for the partition properties. Every search returns the
// first witness in a documented canonical order, or nullopt after exhausting
// the candidate family; each witness kind has an independent validator.

#include <cstdint>
#include <optional>
#include <vector>

#include "hjw/coloring.hpp"
#include "hjw/equiv.hpp"
#include "hjw/subspaces.hpp"
#include "hjw/words.hpp"

namespace hjw {

// Combinations of {0..n-1} in lexicographic order of their sorted form.
std::uint64_t binomial(int n, int k);
std::uint64_t comb_rank(const std::vector<int>& combo, int n);
std::vector<int> comb_unrank(std::uint64_t r, int n, int k);
void for_each_combination(int n, int k,
                          const std::function<bool(const std::vector<int>&)>& visit);

// Coloring of [n]^l, the l-element subsets of {0..n-1}, indexed by comb_rank.
struct SetColoring {
    int n = 0;
    int l = 1;
    ColorSet colors{1};
    std::vector<int> table;

    int operator()(const std::vector<int>& combo) const;
    static SetColoring constant(int n, int l, ColorSet colors, int value);
    static SetColoring random(int n, int l, ColorSet colors, std::uint64_t seed);
    template <typename Fn>
    static SetColoring from_function(int n, int l, ColorSet colors, Fn&& fn);

    nlohmann::json to_json() const;
    static SetColoring from_json(const nlohmann::json& j);
};

// Coloring of [n]^{<l}: one SetColoring per level 1..l-1, shared color set.
struct LevelColoring {
    int n = 0;
    int l = 2;  // levels run 1..l-1
    ColorSet colors{1};
    std::vector<std::vector<int>> tables;  // tables[k-1] indexed by comb_rank at level k

    int at(int level, const std::vector<int>& combo) const;
    static LevelColoring constant(int n, int l, ColorSet colors, int value);
    static LevelColoring random(int n, int l, ColorSet colors, std::uint64_t seed);
    template <typename Fn>
    static LevelColoring from_function(int n, int l, ColorSet colors, Fn&& fn);

    nlohmann::json to_json() const;
    static LevelColoring from_json(const nlohmann::json& j);
};

// A sub-ground on which a coloring collapses to the chosen equivalence:
// inner words over {0..|positions|-1} land in the full space through
// assemble_word(inner, injection, fill), and equivalent inner words receive
// equal colors. injection[i] is the target of the i-th position; searches
// produced by this module keep injection = positions (order-preserving).
struct ParWitness {
    std::vector<int> positions;
    std::vector<int> injection;
    PartialWord fill;
    EquivKind kind;
};

// --- searches ---------------------------------------------------------------

// First monochromatic convex subspace of the given dimension, in the
// canonical subspace order of for_each_convex_subspace.
std::optional<ConvexSubspace> find_mono_subspace(const Coloring& c, int dim);

// c colors U_{h,n}: ground h = grid dimension, alphabet n = segment [0,n).
// First monochromatic side^h grid, difference ascending then offsets
// lexicographic, admissible under `headroom`.
std::optional<GridPattern> find_grid_pattern(const Coloring& c, int side,
                                             GridHeadroom headroom = GridHeadroom::strict);

// First A in [n]^target (lex) with c constant on the l-subsets of A.
std::optional<std::vector<int>> find_homogeneous(const SetColoring& c, int target);

// First B in [n]^target (lex) with f constant on each level 1..l-1 of B
// separately (levels may take different colors).
std::optional<std::vector<int>> find_ram_homogeneous(const LevelColoring& f, int target);

// First invariance witness of the given size. alpha_iso: N lexicographic,
// fill = constant base letter, injection = N. full_sym/subgroup: N
// lexicographic, then fills by rank; optionally widened to all injections
// (subsets lex, then images in permutation order) instead of order-preserving
// ones.
std::optional<ParWitness> find_par_witness(const Coloring& c, int size, const EquivKind& kind,
                                           bool widen_injections = false);

// --- validators (independent re-checks, used on every returned witness) ----

bool is_mono_subspace(const Coloring& c, const ConvexSubspace& s);
bool is_mono_grid(const Coloring& c, const GridPattern& g, GridHeadroom headroom);
bool is_homogeneous(const SetColoring& c, const std::vector<int>& a);
bool is_ram_homogeneous(const LevelColoring& f, const std::vector<int>& b);
bool is_par_witness(const Coloring& c, const ParWitness& w);

// Under the base-letter parity coloring, no convex subspace of dimension >= 1
// with all blocks singleton is monochromatic; checked exhaustively over all
// dimensions, block choices, and fixed parts.
struct CounterexampleReport {
    bool ok = true;
    ConvexSubspace offender;  // populated when !ok

    explicit operator bool() const { return ok; }
};
CounterexampleReport singleton_counterexample_check(int ground_length, Alphabet alphabet,
                                                    int base);

template <typename Fn>
SetColoring SetColoring::from_function(int n, int l, ColorSet colors, Fn&& fn) {
    SetColoring c{n, l, colors, {}};
    c.table.reserve(static_cast<std::size_t>(binomial(n, l)));
    for_each_combination(n, l, [&](const std::vector<int>& combo) {
        c.table.push_back(fn(combo));
        return false;
    });
    return c;
}

template <typename Fn>
LevelColoring LevelColoring::from_function(int n, int l, ColorSet colors, Fn&& fn) {
    LevelColoring f{n, l, colors, {}};
    for (int level = 1; level < l; ++level) {
        std::vector<int> table;
        table.reserve(static_cast<std::size_t>(binomial(n, level)));
        for_each_combination(n, level, [&](const std::vector<int>& combo) {
            table.push_back(fn(level, combo));
            return false;
        });
        f.tables.push_back(std::move(table));
    }
    return f;
}

}  // namespace hjw
