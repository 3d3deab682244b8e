#pragma once

// Permutation actions on words and the three equivalence relations used by
// the partition properties: full-symmetric (equal letter multisets), subgroup
// orbits, and base-letter isomorphism (equal support size and off-base letter
// sequence).

#include <optional>
#include <vector>

#include "hjw/coloring.hpp"
#include "hjw/words.hpp"

namespace hjw {

struct PermGroup {
    int ground_length = 0;
    std::vector<std::vector<int>> generators;
    bool full = false;  // Sym(ground), short-circuits multiset comparison

    static PermGroup full_sym(int ground_length);
    static PermGroup of(int ground_length, std::vector<std::vector<int>> generators);
};

struct EquivKind {
    enum class Tag { full_sym, subgroup, alpha_iso };

    Tag tag = Tag::full_sym;
    PermGroup group;  // subgroup only
    int base = -1;    // alpha_iso only

    static EquivKind full_sym();
    static EquivKind subgroup(PermGroup g);
    static EquivKind alpha_iso(int base);
};

// result[a] = w[pi[a]]; pi must permute w's positions.
Word apply_perm(const Word& w, const std::vector<int>& pi);

// Closure of {w} under the group's generators (all rearrangements for the
// full-symmetric marker), sorted lexicographically by letters.
std::vector<Word> orbit_of(const Word& w, const PermGroup& h);

// Whether w1 and w2 fall in the same class. Throws GroundMismatch on length
// disagreement. full_sym: equal multiset; subgroup: orbit membership;
// alpha_iso: equal support size and equal off-base letter sequence.
bool related(const Word& w1, const Word& w2, const EquivKind& kind);

// The unique non-decreasing word with w's letter counts; constant exactly on
// full-symmetric classes.
Word canonical_sorted(const Word& w);

// Canonical class representative under `kind`: full_sym -> canonical_sorted;
// subgroup -> orbit member of least rank; alpha_iso -> support moved to the
// initial positions, values kept.
Word class_representative(const Word& w, const EquivKind& kind, const Alphabet& alphabet);

struct InvariantReport {
    bool ok = true;
    Word first;   // counterexample pair when !ok: related words with
    Word second;  // different colors, first found in rank order

    explicit operator bool() const { return ok; }
};

// Checks that c is constant on every class of `kind`.
InvariantReport invariant_check(const Coloring& c, const EquivKind& kind);

}  // namespace hjw
