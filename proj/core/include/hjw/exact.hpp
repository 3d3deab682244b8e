#pragma once

// Exact partition numbers by adversarial search: for each candidate size n,
// a depth-first search over colorings (cells assigned in rank order) hunts a
// coloring with no witness, propagating witness-avoidance constraints and
// quotienting color and structural symmetries. The least n where the hunt
// exhausts is the value; the last bad coloring is the lower-bound half of the
// certificate.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hjw/coloring.hpp"
#include "hjw/search.hpp"

namespace hjw {

struct NumberKind {
    enum class Tag { hj, vdw, ramsey, level_ramsey, par_alpha, par_full };

    Tag tag = Tag::hj;
    int dim = 1;       // hj: subspace dimension; vdw: grid dimension
    int side = 1;      // vdw: grid side length
    int target = 1;    // ramsey/level_ramsey: homogeneous set size; par_*: |N|
    int levels = 2;    // ramsey: tuple size l; level_ramsey: level bound (levels < l)
    int alphabet = 2;  // hj/par_*: |Lambda|
    int base = 0;      // par_alpha: distinguished letter
    int colors = 2;

    static NumberKind hj(int dim, int alphabet, int colors);
    static NumberKind vdw(int grid_dim, int side, int colors);
    static NumberKind ramsey(int target, int tuple, int colors);
    static NumberKind level_ramsey(int target, int level_bound, int colors);
    static NumberKind par_alpha(int target, int alphabet, int base, int colors);
    static NumberKind par_full(int target, int alphabet, int colors);

    std::string name() const;
    nlohmann::json to_json() const;
    static NumberKind from_json(const nlohmann::json& j);
};

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t wipeouts = 0;         // color-domain emptied by propagation
    std::uint64_t forced_witnesses = 0; // branch where some witness became unavoidable
    std::uint64_t symmetry_prunes = 0;  // lex-leader cuts

    SearchStats& operator+=(const SearchStats& o);
};

struct ExactOptions {
    std::uint64_t node_budget = UINT64_C(1) << 40;
    double time_budget_seconds = 0;  // 0 = unlimited
    int workers = 1;
    std::string checkpoint_path;     // empty = no journal
    std::uint64_t start_floor = 0;   // 0 = kind's natural floor
};

struct Certificate {
    NumberKind kind;
    std::uint64_t value = 0;
    // Bad coloring at value-1 as a dense cell table (absent when value equals
    // the search floor). Cell order is the kind's canonical cell order.
    std::optional<std::vector<int>> bad_coloring;
    SearchStats stats;  // exhaustion statistics at size = value

    nlohmann::json to_json() const;
};

// Best-known bracket when the budget ran out: value >= lower, i.e. every
// size below `lower` has a verified bad coloring; an upper bound is attached
// only when one is known (currently never by the exact engine itself).
struct BudgetExceeded : std::runtime_error {
    BudgetExceeded(std::uint64_t lower_, std::optional<std::uint64_t> upper_,
                   const std::string& message)
        : std::runtime_error(message), lower(lower_), upper(upper_) {}

    std::uint64_t lower = 0;
    std::optional<std::uint64_t> upper;
};

// Scans n = floor, floor+1, ... and returns the first n whose adversarial
// search exhausts without a bad coloring. Deterministic for fixed kind and
// options (any worker count). Throws BudgetExceeded when node or time budget
// runs out first.
Certificate exact_number(const NumberKind& kind, const ExactOptions& options = {});

// One adversarial search at a fixed size; exposed for tests and the CLI.
struct AdversaryResult {
    std::optional<std::vector<int>> bad;  // first bad cell table in canonical order
    SearchStats stats;
};
AdversaryResult find_bad_coloring(const NumberKind& kind, int n, const ExactOptions& options = {});

// The instance family behind a kind at size n, exposed for oracle tests:
// cells are the colored objects in canonical rank order; a witness is present
// in a coloring iff each of its groups is monochromatic. Groups of size one
// are dropped at construction (always monochromatic).
struct WitnessFamily {
    std::uint64_t num_cells = 0;
    int num_colors = 1;
    std::vector<std::vector<std::vector<std::uint32_t>>> witnesses;  // witness -> groups -> cells
    std::vector<std::vector<std::uint32_t>> cell_symmetries;  // cell permutations preserving the family
    std::uint64_t floor = 1;  // scan start for exact_number
};
WitnessFamily build_witness_family(const NumberKind& kind, int n);

// True iff some witness has every group monochromatic under `cells`.
bool family_has_witness(const WitnessFamily& fam, const std::vector<int>& cells);

}  // namespace hjw
