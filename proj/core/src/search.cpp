#include "hjw/search.hpp"

#include <algorithm>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

namespace hjw {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

std::uint64_t comb_rank(const std::vector<int>& combo, int n) {
    // Lexicographic rank of a sorted k-combination of {0..n-1}: count the
    // combinations that branch off below each chosen element.
    std::uint64_t r = 0;
    const int k = static_cast<int>(combo.size());
    int prev = -1;
    for (int i = 0; i < k; ++i) {
        for (int v = prev + 1; v < combo[static_cast<std::size_t>(i)]; ++v)
            r += binomial(n - 1 - v, k - 1 - i);
        prev = combo[static_cast<std::size_t>(i)];
    }
    return r;
}

std::vector<int> comb_unrank(std::uint64_t r, int n, int k) {
    if (r >= binomial(n, k)) throw RankOutOfRange("combination rank out of range");
    std::vector<int> combo;
    combo.reserve(static_cast<std::size_t>(k));
    int v = 0;
    for (int i = 0; i < k; ++i) {
        for (;; ++v) {
            const std::uint64_t below = binomial(n - 1 - v, k - 1 - i);
            if (r < below) break;
            r -= below;
        }
        combo.push_back(v++);
    }
    return combo;
}

void for_each_combination(int n, int k,
                          const std::function<bool(const std::vector<int>&)>& visit) {
    if (k < 0 || k > n) return;
    std::vector<int> combo(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) combo[static_cast<std::size_t>(i)] = i;
    for (;;) {
        if (visit(combo)) return;
        int i = k - 1;
        while (i >= 0 && combo[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) return;
        ++combo[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
    }
}

int SetColoring::operator()(const std::vector<int>& combo) const {
    return table[static_cast<std::size_t>(comb_rank(combo, n))];
}

SetColoring SetColoring::constant(int n, int l, ColorSet colors, int value) {
    return from_function(n, l, colors, [value](const std::vector<int>&) { return value; });
}

SetColoring SetColoring::random(int n, int l, ColorSet colors, std::uint64_t seed) {
    std::uint64_t next = 0;
    return from_function(n, l, colors, [&](const std::vector<int>&) {
        return static_cast<int>(mix64(seed + (++next) * UINT64_C(0x9E3779B97F4A7C15)) %
                                static_cast<std::uint64_t>(colors.size));
    });
}

nlohmann::json SetColoring::to_json() const {
    return {{"format", 1}, {"n", n}, {"l", l}, {"colors_n", colors.size}, {"table", table}};
}

SetColoring SetColoring::from_json(const nlohmann::json& j) {
    SetColoring c{j.at("n").get<int>(), j.at("l").get<int>(),
                  ColorSet{j.at("colors_n").get<int>()}, j.at("table").get<std::vector<int>>()};
    if (c.table.size() != binomial(c.n, c.l)) throw BadParams("set coloring table size mismatch");
    return c;
}

int LevelColoring::at(int level, const std::vector<int>& combo) const {
    if (level < 1 || level >= l) throw BadParams("level out of range");
    return tables[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(comb_rank(combo, n))];
}

LevelColoring LevelColoring::constant(int n, int l, ColorSet colors, int value) {
    return from_function(n, l, colors, [value](int, const std::vector<int>&) { return value; });
}

LevelColoring LevelColoring::random(int n, int l, ColorSet colors, std::uint64_t seed) {
    std::uint64_t next = 0;
    return from_function(n, l, colors, [&](int, const std::vector<int>&) {
        return static_cast<int>(mix64(seed + (++next) * UINT64_C(0x9E3779B97F4A7C15)) %
                                static_cast<std::uint64_t>(colors.size));
    });
}

nlohmann::json LevelColoring::to_json() const {
    return {{"format", 1}, {"n", n}, {"l", l}, {"colors_n", colors.size}, {"tables", tables}};
}

LevelColoring LevelColoring::from_json(const nlohmann::json& j) {
    LevelColoring f{j.at("n").get<int>(), j.at("l").get<int>(),
                    ColorSet{j.at("colors_n").get<int>()},
                    j.at("tables").get<std::vector<std::vector<int>>>()};
    if (f.tables.size() != static_cast<std::size_t>(f.l - 1))
        throw BadParams("level coloring table count mismatch");
    for (int level = 1; level < f.l; ++level)
        if (f.tables[static_cast<std::size_t>(level - 1)].size() != binomial(f.n, level))
            throw BadParams("level coloring table size mismatch");
    return f;
}

// --- searches ---------------------------------------------------------------

std::optional<ConvexSubspace> find_mono_subspace(const Coloring& c, int dim) {
    if (dim < 1) throw BadParams("subspace dimension must be >= 1");
    std::optional<ConvexSubspace> found;
    for_each_convex_subspace(c.ground(), c.alphabet(), dim, [&](const ConvexSubspace& s) {
        if (is_mono_subspace(c, s)) {
            found = s;
            return true;
        }
        return false;
    });
    return found;
}

std::optional<GridPattern> find_grid_pattern(const Coloring& c, int side, GridHeadroom headroom) {
    const int h = c.ground().length;
    const int n = c.alphabet().size;
    if (h < 1 || side < 1) throw BadParams("grid dimension and side must be >= 1");
    const long long steps = headroom == GridHeadroom::strict ? side : side - 1;
    for (long long d = 1;; ++d) {
        const long long max_offset = n - 1 - d * steps;
        if (max_offset < 0) break;
        GridPattern g{d, std::vector<long long>(static_cast<std::size_t>(h), 0), side};
        for (;;) {
            if (is_mono_grid(c, g, headroom)) return g;
            int e = h - 1;  // offsets advance lexicographically, last coordinate fastest
            while (e >= 0 && g.offsets[static_cast<std::size_t>(e)] == max_offset)
                g.offsets[static_cast<std::size_t>(e--)] = 0;
            if (e < 0) break;
            ++g.offsets[static_cast<std::size_t>(e)];
        }
        if (steps == 0) break;  // side-1 grids do not depend on d
    }
    return std::nullopt;
}

std::optional<std::vector<int>> find_homogeneous(const SetColoring& c, int target) {
    if (c.l > target || target > c.n) return std::nullopt;
    std::optional<std::vector<int>> found;
    for_each_combination(c.n, target, [&](const std::vector<int>& a) {
        if (is_homogeneous(c, a)) {
            found = a;
            return true;
        }
        return false;
    });
    return found;
}

std::optional<std::vector<int>> find_ram_homogeneous(const LevelColoring& f, int target) {
    if (target > f.n) return std::nullopt;
    std::optional<std::vector<int>> found;
    for_each_combination(f.n, target, [&](const std::vector<int>& b) {
        if (is_ram_homogeneous(f, b)) {
            found = b;
            return true;
        }
        return false;
    });
    return found;
}

namespace {

PartialWord constant_fill(const std::vector<int>& domain, int letter) {
    return PartialWord{domain, std::vector<int>(domain.size(), letter)};
}

}  // namespace

std::optional<ParWitness> find_par_witness(const Coloring& c, int size, const EquivKind& kind,
                                           bool widen_injections) {
    const int n = c.ground().length;
    if (size > n) throw BadParams("witness size exceeds the ground");
    std::optional<ParWitness> found;
    for_each_combination(n, size, [&](const std::vector<int>& positions) {
        const std::vector<int> rest = complement_positions(positions, n);
        std::vector<std::vector<int>> injections{positions};
        if (widen_injections && kind.tag != EquivKind::Tag::alpha_iso) {
            injections.clear();
            std::vector<int> image = positions;
            do {
                injections.push_back(image);
            } while (std::next_permutation(image.begin(), image.end()));
        }
        for (const auto& injection : injections) {
            if (kind.tag == EquivKind::Tag::alpha_iso) {
                ParWitness w{positions, injection, constant_fill(rest, kind.base), kind};
                if (is_par_witness(c, w)) {
                    found = std::move(w);
                    return true;
                }
            } else {
                const Ground rest_ground{static_cast<int>(rest.size())};
                const std::uint64_t fills = space_size(rest_ground, c.alphabet());
                for (std::uint64_t r = 0; r < fills; ++r) {
                    ParWitness w{positions, injection,
                                 PartialWord{rest, unrank_word(r, rest_ground, c.alphabet())}, kind};
                    if (is_par_witness(c, w)) {
                        found = std::move(w);
                        return true;
                    }
                }
            }
        }
        return false;
    });
    return found;
}

// --- validators -------------------------------------------------------------

bool is_mono_subspace(const Coloring& c, const ConvexSubspace& s) {
    if (!validate_subspace(s).ok || s.ground_length() != c.ground().length) return false;
    int color = -1;
    for (const Word& p : enumerate_subspace(s, c.alphabet())) {
        const int x = c(p);
        if (color == -1) color = x;
        if (x != color) return false;
    }
    return true;
}

bool is_mono_grid(const Coloring& c, const GridPattern& g, GridHeadroom headroom) {
    if (static_cast<int>(g.offsets.size()) != c.ground().length) return false;
    if (!grid_in_range(g, c.alphabet().size, headroom)) return false;
    int color = -1;
    for (const Word& p : enumerate_grid(g, c.ground().length)) {
        const int x = c(p);
        if (color == -1) color = x;
        if (x != color) return false;
    }
    return true;
}

bool is_homogeneous(const SetColoring& c, const std::vector<int>& a) {
    int color = -1;
    bool mono = true;
    for_each_combination(static_cast<int>(a.size()), c.l, [&](const std::vector<int>& idx) {
        std::vector<int> tuple;
        tuple.reserve(idx.size());
        for (int i : idx) tuple.push_back(a[static_cast<std::size_t>(i)]);
        const int x = c(tuple);
        if (color == -1) color = x;
        if (x != color) {
            mono = false;
            return true;
        }
        return false;
    });
    return mono;
}

bool is_ram_homogeneous(const LevelColoring& f, const std::vector<int>& b) {
    for (int level = 1; level < f.l; ++level) {
        if (static_cast<int>(b.size()) < level) continue;
        int color = -1;
        bool mono = true;
        for_each_combination(static_cast<int>(b.size()), level, [&](const std::vector<int>& idx) {
            std::vector<int> tuple;
            tuple.reserve(idx.size());
            for (int i : idx) tuple.push_back(b[static_cast<std::size_t>(i)]);
            const int x = f.at(level, tuple);
            if (color == -1) color = x;
            if (x != color) {
                mono = false;
                return true;
            }
            return false;
        });
        if (!mono) return false;
    }
    return true;
}

bool is_par_witness(const Coloring& c, const ParWitness& w) {
    const int m = static_cast<int>(w.positions.size());
    const Ground inner_ground{m};
    const std::uint64_t count = space_size(inner_ground, c.alphabet());
    // Group inner words by class representative; all members must land on one
    // color through assemble_word.
    std::map<Word, int> class_color;
    for (std::uint64_t r = 0; r < count; ++r) {
        const Word inner = unrank_word(r, inner_ground, c.alphabet());
        const Word rep = class_representative(inner, w.kind, c.alphabet());
        const int color = c(assemble_word(inner, w.injection, w.fill, c.ground()));
        auto [it, inserted] = class_color.emplace(rep, color);
        if (!inserted && it->second != color) return false;
    }
    return true;
}

CounterexampleReport singleton_counterexample_check(int ground_length, Alphabet alphabet,
                                                    int base) {
    if (ground_length < 1 || alphabet.size < 2) throw BadParams("need ground >= 1 and alphabet >= 2");
    const Coloring c = Coloring::parity(Ground{ground_length}, alphabet, ColorSet{2}, base);
    CounterexampleReport report;
    for (int dim = 1; dim <= ground_length && report.ok; ++dim) {
        for_each_convex_subspace(Ground{ground_length}, alphabet, dim, [&](const ConvexSubspace& s) {
            for (const auto& b : s.blocks)
                if (b.size() != 1) return false;
            if (is_mono_subspace(c, s)) {
                report = {false, s};
                return true;
            }
            return false;
        });
    }
    return report;
}

}  // namespace hjw
