#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "hjw/coloring.hpp"
#include "hjw/equiv.hpp"
#include "hjw/errors.hpp"
#include "hjw/words.hpp"

using namespace hjw;

namespace {

std::vector<Word> all_words(int m, int k) {
    std::vector<Word> out;
    const std::uint64_t n = space_size(Ground{m}, Alphabet{k});
    for (std::uint64_t r = 0; r < n; ++r) out.push_back(unrank_word(r, Ground{m}, Alphabet{k}));
    return out;
}

// Oracle: equal letter multisets.
bool oracle_full_sym(Word a, Word b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

// Oracle: equal support size and equal off-base letter sequences in position
// order.
bool oracle_alpha(const Word& a, const Word& b, int base) {
    std::vector<int> sa, sb;
    for (int x : a)
        if (x != base) sa.push_back(x);
    for (int x : b)
        if (x != base) sb.push_back(x);
    return sa == sb;
}

// Oracle: orbit closure by breadth-first application of the generators.
std::set<Word> oracle_orbit(const Word& w, const std::vector<std::vector<int>>& gens) {
    std::set<Word> seen{w};
    std::vector<Word> frontier{w};
    while (!frontier.empty()) {
        std::vector<Word> next;
        for (const Word& u : frontier) {
            for (const auto& pi : gens) {
                Word v(u.size());
                for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[pi[i]];
                if (seen.insert(v).second) next.push_back(v);
            }
        }
        frontier = std::move(next);
    }
    return seen;
}

}  // namespace

TEST_CASE("apply_perm composes as w o pi") {
    CHECK(apply_perm({4, 5, 6}, {2, 0, 1}) == Word{6, 4, 5});
    CHECK(apply_perm({1, 2}, {0, 1}) == Word{1, 2});
}

TEST_CASE("full-symmetric orbits are all distinct rearrangements") {
    const PermGroup sym = PermGroup::full_sym(3);
    for (const Word& w : all_words(3, 3)) {
        const auto orb = orbit_of(w, sym);
        // oracle: distinct permutations via next_permutation
        Word s = w;
        std::sort(s.begin(), s.end());
        std::set<Word> expect;
        do expect.insert(s);
        while (std::next_permutation(s.begin(), s.end()));
        CHECK(orb.size() == expect.size());
        CHECK(std::set<Word>(orb.begin(), orb.end()) == expect);
        CHECK(std::is_sorted(orb.begin(), orb.end()));
    }
}

TEST_CASE("subgroup orbits equal the generator closure") {
    const std::vector<std::vector<int>> gens{{1, 0, 2, 3}, {0, 1, 3, 2}};
    const PermGroup h = PermGroup::of(4, gens);
    for (const Word& w : all_words(4, 2)) {
        const auto orb = orbit_of(w, h);
        const auto expect = oracle_orbit(w, gens);
        CHECK(std::set<Word>(orb.begin(), orb.end()) == expect);
    }
}

TEST_CASE("related matches the multiset and alpha oracles") {
    const auto words = all_words(3, 3);
    const EquivKind full = EquivKind::full_sym();
    for (const Word& a : words) {
        for (const Word& b : words) {
            CHECK(related(a, b, full) == oracle_full_sym(a, b));
            for (int base = 0; base < 3; ++base)
                CHECK(related(a, b, EquivKind::alpha_iso(base)) == oracle_alpha(a, b, base));
        }
    }
    CHECK_THROWS_AS(related({0}, {0, 1}, full), GroundMismatch);
}

TEST_CASE("canonical_sorted is the sorted word") {
    CHECK(canonical_sorted({2, 0, 1}) == Word{0, 1, 2});
    CHECK(canonical_sorted({}) == Word{});
}

TEST_CASE("class representatives are canonical: related iff equal representative") {
    const auto words = all_words(3, 2);
    const std::vector<EquivKind> kinds{
        EquivKind::full_sym(), EquivKind::alpha_iso(0), EquivKind::alpha_iso(1),
        EquivKind::subgroup(PermGroup::of(3, {{1, 0, 2}}))};
    const Alphabet a{2};
    for (const auto& kind : kinds) {
        for (const Word& w : words) {
            const Word rep = class_representative(w, kind, a);
            CHECK(related(w, rep, kind));
            for (const Word& u : words) {
                const Word urep = class_representative(u, kind, a);
                CHECK(related(w, u, kind) == (rep == urep));
            }
        }
    }
}

TEST_CASE("invariant_check accepts class-constant colorings and pinpoints violations") {
    const Ground g{3};
    const Alphabet a{2};
    const ColorSet c{2};

    // constant colorings are invariant under everything
    CHECK(invariant_check(Coloring::constant(g, a, c, 1), EquivKind::full_sym()));
    CHECK(invariant_check(Coloring::constant(g, a, c, 0), EquivKind::alpha_iso(0)));

    // parity of the base-letter count is a multiset invariant
    CHECK(invariant_check(Coloring::parity(g, a, c, 0), EquivKind::full_sym()));
    CHECK(invariant_check(Coloring::parity(g, a, c, 1), EquivKind::full_sym()));

    // a coloring split by position is not
    const Coloring by_first =
        Coloring::from_function(g, a, c, [](const Word& w) { return w[0]; });
    const auto rep = invariant_check(by_first, EquivKind::full_sym());
    CHECK(!rep);
    CHECK(related(rep.first, rep.second, EquivKind::full_sym()));
    CHECK(by_first(rep.first) != by_first(rep.second));
}
