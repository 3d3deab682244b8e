#include "hjw/equiv.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace hjw {

PermGroup PermGroup::full_sym(int ground_length) {
    PermGroup g;
    g.ground_length = ground_length;
    g.full = true;
    return g;
}

PermGroup PermGroup::of(int ground_length, std::vector<std::vector<int>> generators) {
    PermGroup g;
    g.ground_length = ground_length;
    for (const auto& pi : generators) {
        if (static_cast<int>(pi.size()) != ground_length)
            throw BadParams("generator length != ground length");
        std::vector<char> seen(pi.size(), 0);
        for (int v : pi) {
            if (v < 0 || v >= ground_length || seen[static_cast<std::size_t>(v)])
                throw BadParams("generator is not a permutation");
            seen[static_cast<std::size_t>(v)] = 1;
        }
    }
    g.generators = std::move(generators);
    return g;
}

EquivKind EquivKind::full_sym() { return EquivKind{Tag::full_sym, {}, -1}; }

EquivKind EquivKind::subgroup(PermGroup g) { return EquivKind{Tag::subgroup, std::move(g), -1}; }

EquivKind EquivKind::alpha_iso(int base) { return EquivKind{Tag::alpha_iso, {}, base}; }

Word apply_perm(const Word& w, const std::vector<int>& pi) {
    if (pi.size() != w.size()) throw GroundMismatch("permutation and word lengths differ");
    Word out(w.size());
    for (std::size_t a = 0; a < w.size(); ++a) out[a] = w[static_cast<std::size_t>(pi[a])];
    return out;
}

std::vector<Word> orbit_of(const Word& w, const PermGroup& h) {
    if (static_cast<int>(w.size()) != h.ground_length)
        throw GroundMismatch("group ground != word length");
    if (h.full) {
        Word sorted = w;
        std::sort(sorted.begin(), sorted.end());
        std::vector<Word> orbit;
        do {
            orbit.push_back(sorted);
        } while (std::next_permutation(sorted.begin(), sorted.end()));
        return orbit;  // next_permutation emits letter-lex order
    }
    std::set<Word> seen{w};
    std::vector<Word> frontier{w};
    while (!frontier.empty()) {
        std::vector<Word> next;
        for (const Word& v : frontier)
            for (const auto& pi : h.generators) {
                Word image = apply_perm(v, pi);
                if (seen.insert(image).second) next.push_back(std::move(image));
            }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

bool related(const Word& w1, const Word& w2, const EquivKind& kind) {
    if (w1.size() != w2.size()) throw GroundMismatch("words on different grounds");
    switch (kind.tag) {
        case EquivKind::Tag::full_sym:
            return canonical_sorted(w1) == canonical_sorted(w2);
        case EquivKind::Tag::subgroup: {
            const auto orbit = orbit_of(w1, kind.group);
            return std::binary_search(orbit.begin(), orbit.end(), w2);
        }
        case EquivKind::Tag::alpha_iso: {
            const SupportForm f1 = support_form(w1, kind.base);
            const SupportForm f2 = support_form(w2, kind.base);
            return f1.support.size() == f2.support.size() && f1.values == f2.values;
        }
    }
    return false;
}

Word canonical_sorted(const Word& w) {
    Word sorted = w;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

Word class_representative(const Word& w, const EquivKind& kind, const Alphabet& alphabet) {
    switch (kind.tag) {
        case EquivKind::Tag::full_sym:
            return canonical_sorted(w);
        case EquivKind::Tag::subgroup: {
            const auto orbit = orbit_of(w, kind.group);
            Word best = orbit.front();
            std::uint64_t best_rank = rank_word(best, alphabet);
            for (const Word& v : orbit) {
                const std::uint64_t r = rank_word(v, alphabet);
                if (r < best_rank) {
                    best_rank = r;
                    best = v;
                }
            }
            return best;
        }
        case EquivKind::Tag::alpha_iso: {
            SupportForm f = support_form(w, kind.base);
            for (std::size_t i = 0; i < f.support.size(); ++i) f.support[i] = static_cast<int>(i);
            return word_from_support(f, Ground{static_cast<int>(w.size())});
        }
    }
    return w;
}

InvariantReport invariant_check(const Coloring& c, const EquivKind& kind) {
    if (kind.tag == EquivKind::Tag::alpha_iso &&
        (kind.base < 0 || kind.base >= c.alphabet().size))
        throw BadParams("alpha_iso base letter out of alphabet");
    const std::uint64_t n = c.domain_size();
    std::map<Word, std::pair<Word, int>> classes;  // representative -> (first word, color)
    for (std::uint64_t r = 0; r < n; ++r) {
        const Word w = unrank_word(r, c.ground(), c.alphabet());
        const Word rep = class_representative(w, kind, c.alphabet());
        const int color = c.color_at_rank(r);
        auto [it, inserted] = classes.emplace(rep, std::make_pair(w, color));
        if (!inserted && it->second.second != color) return {false, w, it->second.first};
    }
    return {true, {}, {}};
}

}  // namespace hjw
