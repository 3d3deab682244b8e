#include "hjw/subspaces.hpp"

#include <algorithm>

namespace hjw {

int ConvexSubspace::ground_length() const {
    std::size_t total = fixed.size();
    for (const auto& b : blocks) total += b.size();
    return static_cast<int>(total);
}

int ConvexSubspace::block_index(int pos) const {
    for (std::size_t e = 0; e < blocks.size(); ++e)
        if (std::binary_search(blocks[e].begin(), blocks[e].end(), pos))
            return static_cast<int>(e);
    return -1;
}

SubspaceReport validate_subspace(const ConvexSubspace& s) {
    for (const auto& b : s.blocks) {
        if (b.empty()) return {false, "empty block"};
        for (std::size_t i = 0; i + 1 < b.size(); ++i)
            if (b[i] >= b[i + 1]) return {false, "block positions not strictly increasing"};
    }
    for (std::size_t e = 0; e + 1 < s.blocks.size(); ++e)
        if (s.blocks[e].back() >= s.blocks[e + 1].front())
            return {false, "block order: a later block starts at or before an earlier one"};
    // Overlap between non-adjacent blocks is already excluded by the order
    // clause; what remains is overlap or gaps against the fixed part.
    std::vector<int> covered;
    for (const auto& b : s.blocks) covered.insert(covered.end(), b.begin(), b.end());
    covered.insert(covered.end(), s.fixed.domain.begin(), s.fixed.domain.end());
    std::sort(covered.begin(), covered.end());
    for (std::size_t i = 0; i + 1 < covered.size(); ++i)
        if (covered[i] == covered[i + 1]) return {false, "blocks and fixed part overlap"};
    for (std::size_t i = 0; i < covered.size(); ++i)
        if (covered[i] != static_cast<int>(i))
            return {false, "blocks and fixed part do not partition the ground"};
    return {true, ""};
}

Word subspace_point(const ConvexSubspace& s, const Word& inner) {
    const int m = s.ground_length();
    Word w(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < s.fixed.domain.size(); ++i)
        w[static_cast<std::size_t>(s.fixed.domain[i])] = s.fixed.letters[i];
    for (std::size_t e = 0; e < s.blocks.size(); ++e)
        for (int pos : s.blocks[e]) w[static_cast<std::size_t>(pos)] = inner[e];
    return w;
}

std::vector<Word> enumerate_subspace(const ConvexSubspace& s, const Alphabet& alphabet) {
    const Ground inner_ground{s.dim()};
    const std::uint64_t count = space_size(inner_ground, alphabet);
    std::vector<Word> points;
    points.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t r = 0; r < count; ++r)
        points.push_back(subspace_point(s, unrank_word(r, inner_ground, alphabet)));
    return points;
}

ConvexSubspace line_as_subspace(const Line& l) { return ConvexSubspace{{l.moving}, l.fixed}; }

std::vector<Word> enumerate_line(const Line& l, const Alphabet& alphabet) {
    return enumerate_subspace(line_as_subspace(l), alphabet);
}

bool grid_in_range(const GridPattern& g, int n, GridHeadroom headroom) {
    if (g.difference <= 0 || g.side < 1) return false;
    const long long steps = headroom == GridHeadroom::strict ? g.side : g.side - 1;
    for (long long off : g.offsets)
        if (off < 0 || off + g.difference * steps >= n) return false;
    return true;
}

std::vector<Word> enumerate_grid(const GridPattern& g, int grid_dim) {
    std::vector<Word> points;
    Word idx(static_cast<std::size_t>(grid_dim), 0);
    for (;;) {
        Word p(static_cast<std::size_t>(grid_dim));
        for (int e = 0; e < grid_dim; ++e)
            p[static_cast<std::size_t>(e)] =
                static_cast<int>(g.offsets[static_cast<std::size_t>(e)] + g.difference * idx[static_cast<std::size_t>(e)]);
        points.push_back(std::move(p));
        int e = 0;
        while (e < grid_dim && ++idx[static_cast<std::size_t>(e)] == g.side) idx[static_cast<std::size_t>(e++)] = 0;
        if (e == grid_dim) break;
    }
    return points;
}

namespace {

// Non-empty subsets of pool[from..] in lexicographic order of their sorted
// form; `prefix` accumulates the current subset.
bool visit_subsets(const std::vector<int>& pool, std::size_t from, std::vector<int>& prefix,
                   const std::function<bool(const std::vector<int>&)>& visit) {
    for (std::size_t i = from; i < pool.size(); ++i) {
        prefix.push_back(pool[i]);
        if (visit(prefix)) return true;
        if (visit_subsets(pool, i + 1, prefix, visit)) return true;
        prefix.pop_back();
    }
    return false;
}

bool visit_tuples(int ground_length, int dim, int start, std::vector<std::vector<int>>& blocks,
                  const std::function<bool(const std::vector<std::vector<int>>&)>& visit) {
    if (static_cast<int>(blocks.size()) == dim) return visit(blocks);
    std::vector<int> pool;
    for (int p = start; p < ground_length; ++p) pool.push_back(p);
    std::vector<int> prefix;
    return visit_subsets(pool, 0, prefix, [&](const std::vector<int>& subset) {
        blocks.push_back(subset);
        const bool stop = visit_tuples(ground_length, dim, subset.back() + 1, blocks, visit);
        blocks.pop_back();
        return stop;
    });
}

}  // namespace

void for_each_block_tuple(int ground_length, int dim,
                          const std::function<bool(const std::vector<std::vector<int>>&)>& visit) {
    if (dim < 1 || dim > ground_length) return;
    std::vector<std::vector<int>> blocks;
    visit_tuples(ground_length, dim, 0, blocks, visit);
}

void for_each_convex_subspace(const Ground& ground, const Alphabet& alphabet, int dim,
                              const std::function<bool(const ConvexSubspace&)>& visit) {
    for_each_block_tuple(ground.length, dim, [&](const std::vector<std::vector<int>>& blocks) {
        std::vector<int> in_blocks;
        for (const auto& b : blocks) in_blocks.insert(in_blocks.end(), b.begin(), b.end());
        std::sort(in_blocks.begin(), in_blocks.end());
        const std::vector<int> rest = complement_positions(in_blocks, ground.length);
        const Ground fixed_ground{static_cast<int>(rest.size())};
        const std::uint64_t fills = space_size(fixed_ground, alphabet);
        for (std::uint64_t r = 0; r < fills; ++r) {
            const Word letters = unrank_word(r, fixed_ground, alphabet);
            ConvexSubspace s{blocks, PartialWord{rest, letters}};
            if (visit(s)) return true;
        }
        return false;
    });
}

}  // namespace hjw
