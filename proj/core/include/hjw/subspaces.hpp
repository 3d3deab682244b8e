#pragma once

// Lines, convex m-dimensional subspaces, and homothetic grid patterns.
//
// A convex subspace is an ordered list of pairwise order-separated blocks plus
// a fixed partial word on the complement: every point of block e varies in
// lockstep, distinct blocks vary independently. A line is the one-dimensional
// case without the order requirement (a single block never violates it).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hjw/words.hpp"

namespace hjw {

struct Line {
    std::vector<int> moving;  // non-empty, strictly increasing
    PartialWord fixed;        // on the complement of `moving`
};

struct ConvexSubspace {
    std::vector<std::vector<int>> blocks;  // each non-empty, strictly increasing
    PartialWord fixed;                     // on the complement of the union

    int dim() const { return static_cast<int>(blocks.size()); }
    int ground_length() const;
    // Block number holding `pos`, or -1 for fixed positions.
    int block_index(int pos) const;
};

// Grid {offsets[e] + difference * i_e | i_e < side} inside [0,n)^h.
struct GridPattern {
    long long difference = 0;  // d > 0
    std::vector<long long> offsets;
    int side = 0;
};

// Admissible headroom for a grid inside [0,n):
//   strict: offsets[e] + d*side     < n  (one spare step past the last point)
//   fit:    offsets[e] + d*(side-1) < n  (the grid itself just fits)
enum class GridHeadroom { strict, fit };

struct SubspaceReport {
    bool ok = true;
    std::string violation;  // names the failed clause; empty when ok

    explicit operator bool() const { return ok; }
};

// Checks: blocks non-empty, sorted, pairwise order-separated (all of block e
// precede all of block e+1), fixed.domain exactly the complement.
SubspaceReport validate_subspace(const ConvexSubspace& s);

// The point of s selected by one inner letter per block.
Word subspace_point(const ConvexSubspace& s, const Word& inner);

// All k^dim points, ordered by the rank of the inner word.
std::vector<Word> enumerate_subspace(const ConvexSubspace& s, const Alphabet& alphabet);

ConvexSubspace line_as_subspace(const Line& l);
std::vector<Word> enumerate_line(const Line& l, const Alphabet& alphabet);

// True iff all grid offsets admit `side` steps of `difference` within [0,n)
// under the given headroom rule.
bool grid_in_range(const GridPattern& g, int n, GridHeadroom headroom);

// All side^h grid points as words over ground h, alphabet n, ordered by the
// rank of the step-index tuple.
std::vector<Word> enumerate_grid(const GridPattern& g, int grid_dim);

// Visits every valid ConvexSubspace of the given dimension over ground m with
// alphabet k, in canonical order: block tuples lexicographically (each block
// as a sorted position sequence, earlier blocks more significant), then fixed
// parts by rank ascending. Stops early when the visitor returns true.
void for_each_convex_subspace(const Ground& ground, const Alphabet& alphabet, int dim,
                              const std::function<bool(const ConvexSubspace&)>& visit);

// Visits block tuples only (no fixed parts), same lexicographic order.
void for_each_block_tuple(int ground_length, int dim,
                          const std::function<bool(const std::vector<std::vector<int>>&)>& visit);

}  // namespace hjw
