#pragma once

// Words over a finite alphabet on a finite ground of positions, their ranks,
// and support forms. Grounds are canonicalized to {0..m-1}; alphabets to
// {0..k-1} with the natural order. Ranks are little-endian: position 0 is the
// least significant digit.

#include <cstdint>
#include <vector>

#include "hjw/errors.hpp"

namespace hjw {

struct Alphabet {
    int size;  // letters 0..size-1, ordered
};

struct Ground {
    int length;  // positions 0..length-1, ordered; 0 is allowed
};

// One letter per position; the empty word is the sole inhabitant of U over an
// empty ground.
using Word = std::vector<int>;

// Letters on a subset of the ground. domain is strictly increasing and
// letters[i] belongs to position domain[i].
struct PartialWord {
    std::vector<int> domain;
    std::vector<int> letters;

    bool has(int pos) const;
    int at(int pos) const;  // throws DomainMismatch if pos not in domain
    std::size_t size() const { return domain.size(); }

    static PartialWord of(std::vector<std::pair<int, int>> entries);
};

// Checks domain sortedness and letter bounds; throws BadParams on violation.
void validate_partial_word(const PartialWord& p, const Alphabet& alphabet);

// w written as base everywhere except on `support`, where it takes `values`.
// support is strictly increasing and every value differs from base.
struct SupportForm {
    int base;
    std::vector<int> support;
    std::vector<int> values;
};

// k^m as a 64-bit count; throws BadParams once the space no longer fits.
std::uint64_t space_size(const Ground& ground, const Alphabet& alphabet);

// Little-endian mixed positional rank: sum of w[a] * k^a.
std::uint64_t rank_word(const Word& w, const Alphabet& alphabet);

// Inverse of rank_word; throws RankOutOfRange if r >= k^m.
Word unrank_word(std::uint64_t r, const Ground& ground, const Alphabet& alphabet);

// Unique decomposition w = base off support, values on it.
SupportForm support_form(const Word& w, int base);

// Rebuilds the word of length `ground.length` described by a SupportForm.
Word word_from_support(const SupportForm& f, const Ground& ground);

// (inner o injection^-1) on the injection's range, fill elsewhere.
// injection[i] is the ground-M position carrying inner[i]. Throws
// DomainMismatch when range and fill overlap or fail to cover M.
Word assemble_word(const Word& inner, const std::vector<int>& injection,
                   const PartialWord& fill, const Ground& m_ground);

// Merge of two partial words with disjoint domains.
PartialWord merge_partial(const PartialWord& a, const PartialWord& b);

// Complement of a sorted position set within {0..m-1}.
std::vector<int> complement_positions(const std::vector<int>& positions, int m);

}  // namespace hjw
