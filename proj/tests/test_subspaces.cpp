#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "hjw/errors.hpp"
#include "hjw/subspaces.hpp"
#include "hjw/words.hpp"

using namespace hjw;

namespace {

// Oracle: substitute inner letters by hand, position by position.
Word oracle_point(const ConvexSubspace& s, const Word& inner, int m) {
    Word w(static_cast<std::size_t>(m), -1);
    for (std::size_t e = 0; e < s.blocks.size(); ++e)
        for (int pos : s.blocks[e]) w[static_cast<std::size_t>(pos)] = inner[e];
    for (std::size_t i = 0; i < s.fixed.domain.size(); ++i)
        w[static_cast<std::size_t>(s.fixed.domain[i])] = s.fixed.letters[i];
    return w;
}

// Oracle: count convex subspaces by direct recursion over order-separated
// blocks, then multiply by the fixed-part choices.
void oracle_blocks(int m, int dim, int from, std::vector<std::vector<int>>& acc,
                   std::uint64_t fixed_choices_base, int k, std::uint64_t& count) {
    if (static_cast<int>(acc.size()) == dim) {
        int used = 0;
        for (const auto& b : acc) used += static_cast<int>(b.size());
        std::uint64_t fixed = 1;
        for (int i = 0; i < m - used; ++i) fixed *= fixed_choices_base;
        count += fixed;
        (void)k;
        return;
    }
    // choose the next block: any non-empty subset of {from..m-1} whose maximum
    // precedes every later block; enumerate by (subset, max)
    for (int maxpos = from; maxpos < m; ++maxpos) {
        // subsets of {from..maxpos} containing maxpos
        const int span = maxpos - from;
        for (std::uint64_t mask = 0; mask < (UINT64_C(1) << span); ++mask) {
            std::vector<int> block;
            for (int i = 0; i < span; ++i)
                if (mask & (UINT64_C(1) << i)) block.push_back(from + i);
            block.push_back(maxpos);
            acc.push_back(block);
            oracle_blocks(m, dim, maxpos + 1, acc, fixed_choices_base, k, count);
            acc.pop_back();
        }
    }
}

std::uint64_t oracle_subspace_count(int m, int k, int dim) {
    std::uint64_t count = 0;
    std::vector<std::vector<int>> acc;
    oracle_blocks(m, dim, 0, acc, static_cast<std::uint64_t>(k), k, count);
    return count;
}

}  // namespace

TEST_CASE("validate_subspace names each violated clause") {
    ConvexSubspace s;
    s.blocks = {{0, 1}};
    s.fixed = PartialWord::of({{2, 0}});
    CHECK(validate_subspace(s));

    ConvexSubspace empty_block;
    empty_block.blocks = {{}};
    CHECK(!validate_subspace(empty_block));

    ConvexSubspace unordered;
    unordered.blocks = {{2}, {0}};
    unordered.fixed = PartialWord::of({{1, 0}});
    CHECK(!validate_subspace(unordered));  // block 0 must precede block 1

    ConvexSubspace interleaved;
    interleaved.blocks = {{0, 2}, {1}};
    CHECK(!validate_subspace(interleaved));

    ConvexSubspace wrong_fixed;
    wrong_fixed.blocks = {{0}};
    wrong_fixed.fixed = PartialWord::of({{0, 0}});
    CHECK(!validate_subspace(wrong_fixed));
}

TEST_CASE("subspace points agree with hand substitution") {
    ConvexSubspace s;
    s.blocks = {{0, 1}, {3}};
    s.fixed = PartialWord::of({{2, 2}});
    const int m = 4;
    const Alphabet a{3};
    const auto pts = enumerate_subspace(s, a);
    CHECK(pts.size() == 9);  // k^dim
    for (std::uint64_t r = 0; r < 9; ++r) {
        const Word inner = unrank_word(r, Ground{2}, a);
        CHECK(pts[r] == oracle_point(s, inner, m));
    }

    // distinct inner words give distinct points
    const std::set<Word> distinct(pts.begin(), pts.end());
    CHECK(distinct.size() == pts.size());
}

TEST_CASE("lines are one-block subspaces") {
    Line l;
    l.moving = {1, 2};
    l.fixed = PartialWord::of({{0, 1}});
    const ConvexSubspace s = line_as_subspace(l);
    CHECK(s.dim() == 1);
    CHECK(enumerate_line(l, Alphabet{2}) == enumerate_subspace(s, Alphabet{2}));
}

TEST_CASE("for_each_convex_subspace visits exactly the valid subspaces") {
    for (int m = 1; m <= 4; ++m) {
        for (int k = 2; k <= 3; ++k) {
            for (int dim = 1; dim <= std::min(m, 3); ++dim) {
                std::uint64_t seen = 0;
                std::set<std::vector<std::vector<int>>> block_tuples;
                for_each_convex_subspace(Ground{m}, Alphabet{k}, dim,
                                         [&](const ConvexSubspace& s) {
                                             CHECK(validate_subspace(s));
                                             CHECK(s.dim() == dim);
                                             block_tuples.insert(s.blocks);
                                             ++seen;
                                             return false;
                                         });
                CHECK(seen == oracle_subspace_count(m, k, dim));
            }
        }
    }
}

TEST_CASE("subspace enumeration order is blocks-lex then fixed-rank") {
    std::vector<ConvexSubspace> seen;
    for_each_convex_subspace(Ground{2}, Alphabet{2}, 1, [&](const ConvexSubspace& s) {
        seen.push_back(s);
        return false;
    });
    // ground 2, dim 1: blocks {0}, {0,1}, {1}; singleton blocks carry 2 fills
    REQUIRE(seen.size() == 5);
    CHECK(seen[0].blocks == std::vector<std::vector<int>>{{0}});
    CHECK(seen[0].fixed.letters == std::vector<int>{0});
    CHECK(seen[1].blocks == std::vector<std::vector<int>>{{0}});
    CHECK(seen[1].fixed.letters == std::vector<int>{1});
    CHECK(seen[2].blocks == std::vector<std::vector<int>>{{0, 1}});
    CHECK(seen[3].blocks == std::vector<std::vector<int>>{{1}});
    CHECK(seen[4].blocks == std::vector<std::vector<int>>{{1}});
}

TEST_CASE("early stop halts the subspace visitor") {
    int calls = 0;
    for_each_convex_subspace(Ground{3}, Alphabet{2}, 1, [&](const ConvexSubspace&) {
        ++calls;
        return calls == 2;
    });
    CHECK(calls == 2);
}

TEST_CASE("grid admissibility separates strict from fit headroom") {
    GridPattern g;
    g.difference = 3;
    g.offsets = {0};
    g.side = 3;
    // last point at 0 + 3*2 = 6
    CHECK(grid_in_range(g, 7, GridHeadroom::fit));
    CHECK(!grid_in_range(g, 7, GridHeadroom::strict));
    CHECK(grid_in_range(g, 10, GridHeadroom::strict));

    GridPattern neg;
    neg.difference = 0;
    neg.offsets = {0};
    neg.side = 2;
    CHECK(!grid_in_range(neg, 10, GridHeadroom::fit));  // difference must be positive
}

TEST_CASE("grid points are the offset + step*difference table") {
    GridPattern g;
    g.difference = 2;
    g.offsets = {1, 0};
    g.side = 3;
    const auto pts = enumerate_grid(g, 2);
    REQUIRE(pts.size() == 9);
    // inner rank order: coordinate 0 least significant
    CHECK(pts[0] == Word{1, 0});
    CHECK(pts[1] == Word{3, 0});
    CHECK(pts[2] == Word{5, 0});
    CHECK(pts[3] == Word{1, 2});
    CHECK(pts[8] == Word{5, 4});
}
