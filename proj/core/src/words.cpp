#include "hjw/words.hpp"

#include <algorithm>
#include <string>

namespace hjw {

bool PartialWord::has(int pos) const {
    return std::binary_search(domain.begin(), domain.end(), pos);
}

int PartialWord::at(int pos) const {
    auto it = std::lower_bound(domain.begin(), domain.end(), pos);
    if (it == domain.end() || *it != pos)
        throw DomainMismatch("partial word has no letter at position " + std::to_string(pos));
    return letters[static_cast<std::size_t>(it - domain.begin())];
}

PartialWord PartialWord::of(std::vector<std::pair<int, int>> entries) {
    std::sort(entries.begin(), entries.end());
    PartialWord p;
    p.domain.reserve(entries.size());
    p.letters.reserve(entries.size());
    for (auto& [pos, letter] : entries) {
        if (!p.domain.empty() && p.domain.back() == pos)
            throw DomainMismatch("duplicate position " + std::to_string(pos));
        p.domain.push_back(pos);
        p.letters.push_back(letter);
    }
    return p;
}

void validate_partial_word(const PartialWord& p, const Alphabet& alphabet) {
    if (p.domain.size() != p.letters.size())
        throw BadParams("partial word: domain and letters lengths differ");
    for (std::size_t i = 0; i + 1 < p.domain.size(); ++i)
        if (p.domain[i] >= p.domain[i + 1])
            throw BadParams("partial word: domain not strictly increasing");
    for (int letter : p.letters)
        if (letter < 0 || letter >= alphabet.size)
            throw BadParams("partial word: letter out of alphabet");
}

std::uint64_t space_size(const Ground& ground, const Alphabet& alphabet) {
    if (alphabet.size < 1) throw BadParams("alphabet size must be >= 1");
    if (ground.length < 0) throw BadParams("ground length must be >= 0");
    std::uint64_t size = 1;
    const auto k = static_cast<std::uint64_t>(alphabet.size);
    for (int a = 0; a < ground.length; ++a) {
        if (size > (UINT64_C(1) << 62) / (k ? k : 1))
            throw BadParams("combinatorial space exceeds 2^62 words");
        size *= k;
    }
    return size;
}

std::uint64_t rank_word(const Word& w, const Alphabet& alphabet) {
    std::uint64_t r = 0;
    std::uint64_t weight = 1;
    const auto k = static_cast<std::uint64_t>(alphabet.size);
    for (std::size_t a = 0; a < w.size(); ++a) {
        r += static_cast<std::uint64_t>(w[a]) * weight;
        if (a + 1 < w.size()) weight *= k;
    }
    return r;
}

Word unrank_word(std::uint64_t r, const Ground& ground, const Alphabet& alphabet) {
    const std::uint64_t size = space_size(ground, alphabet);
    if (r >= size)
        throw RankOutOfRange("rank " + std::to_string(r) + " >= space size " + std::to_string(size));
    Word w(static_cast<std::size_t>(ground.length));
    const auto k = static_cast<std::uint64_t>(alphabet.size);
    for (int a = 0; a < ground.length; ++a) {
        w[static_cast<std::size_t>(a)] = static_cast<int>(r % k);
        r /= k;
    }
    return w;
}

SupportForm support_form(const Word& w, int base) {
    SupportForm f;
    f.base = base;
    for (std::size_t a = 0; a < w.size(); ++a) {
        if (w[a] != base) {
            f.support.push_back(static_cast<int>(a));
            f.values.push_back(w[a]);
        }
    }
    return f;
}

Word word_from_support(const SupportForm& f, const Ground& ground) {
    Word w(static_cast<std::size_t>(ground.length), f.base);
    for (std::size_t i = 0; i < f.support.size(); ++i) {
        const int pos = f.support[i];
        if (pos < 0 || pos >= ground.length)
            throw DomainMismatch("support position outside ground");
        w[static_cast<std::size_t>(pos)] = f.values[i];
    }
    return w;
}

Word assemble_word(const Word& inner, const std::vector<int>& injection,
                   const PartialWord& fill, const Ground& m_ground) {
    if (inner.size() != injection.size())
        throw DomainMismatch("inner word and injection have different lengths");
    const auto m = static_cast<std::size_t>(m_ground.length);
    std::vector<char> covered(m, 0);
    Word w(m, -1);
    for (std::size_t i = 0; i < injection.size(); ++i) {
        const int pos = injection[i];
        if (pos < 0 || pos >= m_ground.length || covered[static_cast<std::size_t>(pos)])
            throw DomainMismatch("injection not one-to-one into the ground");
        covered[static_cast<std::size_t>(pos)] = 1;
        w[static_cast<std::size_t>(pos)] = inner[i];
    }
    for (std::size_t i = 0; i < fill.domain.size(); ++i) {
        const int pos = fill.domain[i];
        if (pos < 0 || pos >= m_ground.length || covered[static_cast<std::size_t>(pos)])
            throw DomainMismatch("fill overlaps the injection range");
        covered[static_cast<std::size_t>(pos)] = 1;
        w[static_cast<std::size_t>(pos)] = fill.letters[i];
    }
    for (std::size_t a = 0; a < m; ++a)
        if (!covered[a])
            throw DomainMismatch("injection range and fill do not cover the ground");
    return w;
}

PartialWord merge_partial(const PartialWord& a, const PartialWord& b) {
    std::vector<std::pair<int, int>> entries;
    entries.reserve(a.size() + b.size());
    for (std::size_t i = 0; i < a.domain.size(); ++i) entries.emplace_back(a.domain[i], a.letters[i]);
    for (std::size_t i = 0; i < b.domain.size(); ++i) entries.emplace_back(b.domain[i], b.letters[i]);
    return PartialWord::of(std::move(entries));
}

std::vector<int> complement_positions(const std::vector<int>& positions, int m) {
    std::vector<int> rest;
    std::size_t i = 0;
    for (int pos = 0; pos < m; ++pos) {
        if (i < positions.size() && positions[i] == pos) {
            ++i;
        } else {
            rest.push_back(pos);
        }
    }
    return rest;
}

}  // namespace hjw
