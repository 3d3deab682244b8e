#pragma once

// Constructive extraction pipelines. Each runs in attempt mode: stages that
// need a homogeneous structure may fail on small grounds, and every success
// is re-validated before it is returned. Pipelines emit a JSON trace of
// stage inputs, witnesses, and verdicts.

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "hjw/coloring.hpp"
#include "hjw/equiv.hpp"
#include "hjw/search.hpp"
#include "hjw/subspaces.hpp"

namespace hjw {

// Packs the level prefixes of f (levels 1..l) into one coloring of the
// l-subsets and finds a homogeneous 2l-set for it; the first l+1 elements
// are then homogeneous at every level simultaneously. nullopt when the
// packed search fails.
std::optional<std::vector<int>> ram_from_ramsey(const LevelColoring& f, nlohmann::json* trace = nullptr);

// Collapses c to base-letter isomorphism on some |N| = size: classifies each
// support set u by the full color table of the words supported on u under a
// constant-base fill, finds a level-homogeneous N for the classifier, and
// returns the witness (N, identity, constant-base fill). nullopt when no N
// is level-homogeneous at this ground.
std::optional<ParWitness> par_alpha_extract(const Coloring& c, int base, int size,
                                            nlohmann::json* trace = nullptr);

struct ParChainStage {
    int letter;                  // base letter collapsed at this stage
    std::vector<int> positions;  // N_l as positions of the original ground
    PartialWord fill;            // rho_l on the original ground
};

struct ParFullResult {
    enum class Status { ok, stage_failed, final_check_failed };

    Status status = Status::stage_failed;
    int failed_stage = -1;            // letter index when stage_failed
    std::vector<ParChainStage> chain; // innermost (letter 0) first, when ok
    ParWitness witness;               // full-symmetric witness, when ok
    nlohmann::json trace;
};

// Iterates par_alpha_extract for letters k-1 down to 0, shrinking N and
// extending the fill by a constant letter each stage, then verifies the
// final witness is genuinely full-symmetric-invariant (the construction
// alone does not guarantee it; see final_check_failed). sizes[l] is the
// target |N_l|; defaults shrink by 2 per stage with floor 1.
ParFullResult par_full_extract(const Coloring& c, std::vector<int> sizes = {});

struct HjExtractResult {
    enum class Status { ok, stage1_failed, grid_failed, welldef_violation };

    Status status = Status::grid_failed;
    ParFullResult stage1;
    std::optional<GridPattern> grid;  // over count space, when reached
    std::optional<ConvexSubspace> subspace;
    nlohmann::json trace;
};

// Monochromatic dim-dimensional convex subspace via the three-stage
// construction: (1) full-symmetry collapse onto N with fill rho; (2) the
// count-class coloring over letter-count vectors, checked well-defined, then
// a just-fitting grid of side dim+1; (3) block allocation inside N, blocks of
// size d = grid difference, offsets spent as constant-letter prefixes.
// stage1_sizes is forwarded to par_full_extract.
HjExtractResult hj_extract(const Coloring& c, int dim, std::vector<int> stage1_sizes = {});

// An m-dimensional subspace whose position classes may interleave (hence not
// convex): class j moves position j of every moving m-block in lockstep.
struct NonConvexSubspace {
    std::vector<std::vector<int>> classes;
    PartialWord fixed;
    bool convex = false;
};

std::vector<Word> enumerate_nonconvex(const NonConvexSubspace& s, const Alphabet& alphabet);
bool is_mono_nonconvex(const Coloring& c, const NonConvexSubspace& s);

struct DimReduceResult {
    enum class Status { ok, no_line };

    Status status = Status::no_line;
    std::optional<NonConvexSubspace> subspace;
    nlohmann::json trace;
};

// Packs consecutive m-blocks of positions into one super-letter, finds a
// monochromatic line in the packed space, and unpacks its moving blocks into
// m independently-moving position classes. Ground length must be divisible
// by m.
DimReduceResult hj_dim_reduce(const Coloring& c, int m);

}  // namespace hjw
