#include "hjw/pipelines.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "hjw/words.hpp"

namespace hjw {

namespace {

std::vector<int> prefix_of(const std::vector<int>& combo, int j) {
    return std::vector<int>(combo.begin(), combo.begin() + j);
}

nlohmann::json grid_to_json(const GridPattern& g) {
    return {{"difference", g.difference}, {"offsets", g.offsets}, {"side", g.side}};
}

}  // namespace

std::optional<std::vector<int>> ram_from_ramsey(const LevelColoring& f, nlohmann::json* trace) {
    const int n = f.n;
    const int l = f.l - 1;  // top level of f
    const int c = f.colors.size;

    // One packed color per tuple of prefix colors at levels 1..l; the level-l
    // component is the color of the whole l-subset.
    std::uint64_t packed = 1;
    for (int j = 0; j < l; ++j) {
        packed *= static_cast<std::uint64_t>(c);
        if (packed > (1u << 30)) throw BadParams("packed color space too large");
    }
    const std::vector<int> radices(static_cast<std::size_t>(l), c);
    const SetColoring g = SetColoring::from_function(
        n, l, ColorSet{static_cast<int>(packed)}, [&](const std::vector<int>& u) {
            std::vector<int> values(static_cast<std::size_t>(l));
            for (int j = 1; j <= l; ++j)
                values[static_cast<std::size_t>(j - 1)] = f.at(j, prefix_of(u, j));
            return static_cast<int>(pack_values(values, radices));
        });

    const auto a = find_homogeneous(g, 2 * l);
    if (trace) {
        *trace = {{"ground", n},
                  {"top_level", l},
                  {"colors", c},
                  {"packed_colors", packed},
                  {"target", 2 * l},
                  {"homogeneous_set", a ? nlohmann::json(*a) : nlohmann::json(nullptr)}};
    }
    if (!a) return std::nullopt;

    // Any j-subset of the prefix extends to an l-subset of A by padding past
    // its maximum; homogeneity of the pack pins the level-j color.
    std::vector<int> b(a->begin(), a->begin() + (l + 1));
    if (!is_ram_homogeneous(f, b))
        throw std::logic_error("packed extraction produced a non-homogeneous set");
    if (trace) {
        (*trace)["result"] = b;
        (*trace)["verified"] = true;
    }
    return b;
}

std::optional<ParWitness> par_alpha_extract(const Coloring& c, int base, int size,
                                            nlohmann::json* trace) {
    const int n = c.ground().length;
    const int k = c.alphabet().size;
    if (base < 0 || base >= k) throw BadParams("base letter outside the alphabet");
    if (size < 1) throw BadParams("target size must be positive");

    std::vector<int> off_base;
    for (int a = 0; a < k; ++a)
        if (a != base) off_base.push_back(a);

    // Classify each support set u by the full color table of the words that
    // are base off u, indexed by the rank of the off-base value sequence.
    // Class ids are interned per level.
    LevelColoring classifier;
    classifier.n = n;
    classifier.l = size + 1;
    int max_classes = 1;
    std::vector<int> class_counts;
    for (int j = 1; j <= size; ++j) {
        std::map<std::vector<int>, int> interned;
        std::vector<int> table;
        std::uint64_t fills = 1;
        for (int t = 0; t < j; ++t) fills *= static_cast<std::uint64_t>(off_base.size());
        for_each_combination(n, j, [&](const std::vector<int>& u) {
            std::vector<int> colors_of_u;
            colors_of_u.reserve(static_cast<std::size_t>(fills));
            for (std::uint64_t r = 0; r < fills; ++r) {
                Word w(static_cast<std::size_t>(n), base);
                std::uint64_t rest = r;
                for (int t = 0; t < j; ++t) {
                    w[static_cast<std::size_t>(u[static_cast<std::size_t>(t)])] =
                        off_base[static_cast<std::size_t>(rest % off_base.size())];
                    rest /= off_base.size();
                }
                colors_of_u.push_back(c(w));
            }
            const auto [it, fresh] =
                interned.emplace(std::move(colors_of_u), static_cast<int>(interned.size()));
            (void)fresh;
            table.push_back(it->second);
            return false;
        });
        class_counts.push_back(static_cast<int>(interned.size()));
        max_classes = std::max(max_classes, static_cast<int>(interned.size()));
        classifier.tables.push_back(std::move(table));
    }
    classifier.colors = ColorSet{max_classes};

    const auto found = find_ram_homogeneous(classifier, size);
    if (trace) {
        *trace = {{"ground", n},
                  {"alphabet", k},
                  {"base", base},
                  {"size", size},
                  {"class_counts", class_counts},
                  {"homogeneous_set",
                   found ? nlohmann::json(*found) : nlohmann::json(nullptr)}};
    }
    if (!found) return std::nullopt;

    ParWitness w;
    w.positions = *found;
    w.injection = *found;
    const std::vector<int> rest = complement_positions(*found, n);
    w.fill.domain = rest;
    w.fill.letters.assign(rest.size(), base);
    w.kind = EquivKind::alpha_iso(base);
    if (!is_par_witness(c, w))
        throw std::logic_error("classifier-homogeneous set fails invariance");
    if (trace) (*trace)["verified"] = true;
    return w;
}

ParFullResult par_full_extract(const Coloring& c, std::vector<int> sizes) {
    const int n = c.ground().length;
    const int k = c.alphabet().size;
    if (sizes.empty()) {
        sizes.resize(static_cast<std::size_t>(k));
        for (int l = 0; l < k; ++l)
            sizes[static_cast<std::size_t>(l)] = std::max(n - 2 * (k - l), 1);
    }
    if (static_cast<int>(sizes.size()) != k) throw BadParams("one stage size per letter");
    for (int s : sizes)
        if (s < 1) throw BadParams("stage sizes must be positive");

    ParFullResult res;
    res.trace["stages"] = nlohmann::json::array();
    Coloring cur = c;
    std::vector<int> orig(static_cast<std::size_t>(n));  // current index -> original position
    std::iota(orig.begin(), orig.end(), 0);
    std::vector<PartialWord> stage_fills;  // original coordinates

    for (int letter = k - 1; letter >= 0; --letter) {
        nlohmann::json stage_trace;
        const auto w =
            par_alpha_extract(cur, letter, sizes[static_cast<std::size_t>(letter)], &stage_trace);
        nlohmann::json entry{{"letter", letter}, {"trace", std::move(stage_trace)}};
        if (!w) {
            entry["ok"] = false;
            res.trace["stages"].push_back(std::move(entry));
            res.status = ParFullResult::Status::stage_failed;
            res.failed_stage = letter;
            return res;
        }
        ParChainStage st;
        st.letter = letter;
        for (int p : w->positions)
            st.positions.push_back(orig[static_cast<std::size_t>(p)]);
        for (std::size_t i = 0; i < w->fill.domain.size(); ++i) {
            st.fill.domain.push_back(orig[static_cast<std::size_t>(w->fill.domain[i])]);
            st.fill.letters.push_back(w->fill.letters[i]);
        }
        entry["ok"] = true;
        entry["positions"] = st.positions;
        res.trace["stages"].push_back(std::move(entry));
        stage_fills.push_back(st.fill);
        cur = induced_coloring(cur, w->fill);
        orig = st.positions;
        res.chain.push_back(std::move(st));
    }
    std::reverse(res.chain.begin(), res.chain.end());  // innermost (letter 0) first

    ParWitness w;
    w.positions = orig;
    w.injection = orig;
    PartialWord fill;
    for (const auto& f : stage_fills) fill = merge_partial(fill, f);
    w.fill = std::move(fill);
    w.kind = EquivKind::full_sym();
    // The stage chain alone does not prove full-symmetric invariance; the
    // final check is what separates ok from final_check_failed.
    const bool ok = is_par_witness(c, w);
    res.trace["final_check"] = ok;
    res.witness = std::move(w);
    res.status = ok ? ParFullResult::Status::ok : ParFullResult::Status::final_check_failed;
    return res;
}

HjExtractResult hj_extract(const Coloring& c, int dim, std::vector<int> stage1_sizes) {
    if (dim < 1) throw BadParams("subspace dimension must be positive");
    const int k = c.alphabet().size;
    if (k < 2) throw BadParams("the grid stage needs at least two letters");

    HjExtractResult res;
    res.stage1 = par_full_extract(c, std::move(stage1_sizes));
    res.trace["stage1"] = res.stage1.trace;
    if (res.stage1.status != ParFullResult::Status::ok) {
        res.status = HjExtractResult::Status::stage1_failed;
        return res;
    }
    const std::vector<int>& positions = res.stage1.witness.positions;
    const int n2 = static_cast<int>(positions.size());
    const Coloring c2 = induced_coloring(c, res.stage1.witness.fill);
    res.trace["collapsed_ground"] = n2;

    // Full-symmetric invariance should make the color a function of the
    // letter-count vector; verify instead of assuming.
    {
        std::map<Word, std::pair<int, std::uint64_t>> seen;
        const std::uint64_t total = c2.domain_size();
        for (std::uint64_t r = 0; r < total; ++r) {
            const Word w = unrank_word(r, c2.ground(), c2.alphabet());
            const int col = c2.color_at_rank(r);
            const auto [it, fresh] =
                seen.emplace(canonical_sorted(w), std::make_pair(col, r));
            if (!fresh && it->second.first != col) {
                res.status = HjExtractResult::Status::welldef_violation;
                res.trace["welldef"] = false;
                res.trace["violation"] = {{"first_rank", it->second.second},
                                          {"second_rank", r}};
                return res;
            }
        }
        res.trace["welldef"] = true;
    }

    // Count-class coloring: position j of a count word holds the count of
    // letter j+1 (letter 0 absorbs the remainder). The shrunken alphabet
    // keeps every count word feasible: h*(n1-1) <= n2-1.
    const int h = k - 1;
    const int n1 = (n2 - 1) / h + 1;
    const Coloring gamma =
        Coloring::from_function(Ground{h}, Alphabet{n1}, c2.colors(), [&](const Word& x) {
            int used = 0;
            for (int j = 0; j < h; ++j) used += x[static_cast<std::size_t>(j)];
            Word rep;
            rep.reserve(static_cast<std::size_t>(n2));
            rep.assign(static_cast<std::size_t>(n2 - used), 0);
            for (int j = 0; j < h; ++j)
                rep.insert(rep.end(), static_cast<std::size_t>(x[static_cast<std::size_t>(j)]),
                           j + 1);
            return c2(rep);
        });
    res.trace["count_alphabet"] = n1;

    const auto grid = find_grid_pattern(gamma, dim + 1, GridHeadroom::fit);
    res.trace["grid"] = grid ? grid_to_json(*grid) : nlohmann::json(nullptr);
    if (!grid) {
        res.status = HjExtractResult::Status::grid_failed;
        return res;
    }
    if (!is_mono_grid(gamma, *grid, GridHeadroom::fit))
        throw std::logic_error("grid search returned a non-monochromatic grid");
    res.grid = grid;

    // Allocate the collapsed ground left to right: constant prefixes realize
    // the offsets, then dim blocks of size d, zeros on the tail. A point
    // whose blocks pick letters y has count vector offsets + d * counts(y),
    // a grid point, so the subspace inherits the grid's color.
    const long long d = grid->difference;
    long long pre = 0;
    for (const long long off : grid->offsets) pre += off;
    if (pre + d * dim >= n2) throw std::logic_error("grid does not fit the collapsed ground");

    ConvexSubspace inner;
    std::vector<int> fixed_positions;
    std::vector<int> fixed_letters;
    int at = 0;
    for (int j = 0; j < h; ++j)
        for (long long t = 0; t < grid->offsets[static_cast<std::size_t>(j)]; ++t) {
            fixed_positions.push_back(at++);
            fixed_letters.push_back(j + 1);
        }
    for (int e = 0; e < dim; ++e) {
        std::vector<int> block;
        for (long long t = 0; t < d; ++t) block.push_back(at++);
        inner.blocks.push_back(std::move(block));
    }
    while (at < n2) {
        fixed_positions.push_back(at++);
        fixed_letters.push_back(0);
    }

    ConvexSubspace outer;
    for (const auto& b : inner.blocks) {
        std::vector<int> mapped;
        mapped.reserve(b.size());
        for (int p : b) mapped.push_back(positions[static_cast<std::size_t>(p)]);
        outer.blocks.push_back(std::move(mapped));
    }
    PartialWord mapped_fixed;
    for (std::size_t i = 0; i < fixed_positions.size(); ++i) {
        mapped_fixed.domain.push_back(
            positions[static_cast<std::size_t>(fixed_positions[i])]);
        mapped_fixed.letters.push_back(fixed_letters[i]);
    }
    outer.fixed = merge_partial(mapped_fixed, res.stage1.witness.fill);

    const auto report = validate_subspace(outer);
    if (!report)
        throw std::logic_error("allocation produced an invalid subspace: " + report.violation);
    if (!is_mono_subspace(c, outer))
        throw std::logic_error("allocated subspace is not monochromatic");
    res.subspace = std::move(outer);
    res.trace["verified"] = true;
    res.status = HjExtractResult::Status::ok;
    return res;
}

std::vector<Word> enumerate_nonconvex(const NonConvexSubspace& s, const Alphabet& alphabet) {
    const int m = static_cast<int>(s.classes.size());
    std::size_t total = s.fixed.domain.size();
    for (const auto& cl : s.classes) {
        if (cl.empty()) throw BadParams("empty position class");
        total += cl.size();
    }
    const int len = static_cast<int>(total);
    std::vector<char> covered(total, 0);
    const auto cover = [&](int p) {
        if (p < 0 || p >= len || covered[static_cast<std::size_t>(p)])
            throw BadParams("classes and fixed part must partition the ground");
        covered[static_cast<std::size_t>(p)] = 1;
    };
    for (const auto& cl : s.classes)
        for (int p : cl) cover(p);
    for (int p : s.fixed.domain) cover(p);

    std::vector<Word> out;
    const std::uint64_t count = space_size(Ground{m}, alphabet);
    out.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t r = 0; r < count; ++r) {
        const Word inner = unrank_word(r, Ground{m}, alphabet);
        Word w(total, 0);
        for (int j = 0; j < m; ++j)
            for (int p : s.classes[static_cast<std::size_t>(j)])
                w[static_cast<std::size_t>(p)] = inner[static_cast<std::size_t>(j)];
        for (std::size_t i = 0; i < s.fixed.domain.size(); ++i)
            w[static_cast<std::size_t>(s.fixed.domain[i])] = s.fixed.letters[i];
        out.push_back(std::move(w));
    }
    return out;
}

bool is_mono_nonconvex(const Coloring& c, const NonConvexSubspace& s) {
    std::size_t total = s.fixed.domain.size();
    for (const auto& cl : s.classes) total += cl.size();
    if (static_cast<int>(total) != c.ground().length)
        throw SpaceMismatch("subspace ground differs from the coloring's");
    const auto points = enumerate_nonconvex(s, c.alphabet());
    const int col = c(points.front());
    for (const auto& w : points)
        if (c(w) != col) return false;
    return true;
}

DimReduceResult hj_dim_reduce(const Coloring& c, int m) {
    if (m < 1) throw BadParams("block size must be positive");
    const int n = c.ground().length;
    const int k = c.alphabet().size;
    if (n % m != 0) throw BadParams("ground length must be divisible by the block size");
    std::uint64_t packed = 1;
    for (int i = 0; i < m; ++i) {
        packed *= static_cast<std::uint64_t>(k);
        if (packed > (1u << 22)) throw BadParams("packed alphabet too large");
    }
    const int np = n / m;

    DimReduceResult res;
    // Super letters pack one m-block of positions, low position least
    // significant, matching the rank convention.
    const Coloring packed_c = Coloring::from_function(
        Ground{np}, Alphabet{static_cast<int>(packed)}, c.colors(), [&](const Word& pw) {
            Word w(static_cast<std::size_t>(n), 0);
            for (int P = 0; P < np; ++P) {
                int rest = pw[static_cast<std::size_t>(P)];
                for (int i = 0; i < m; ++i) {
                    w[static_cast<std::size_t>(P * m + i)] = rest % k;
                    rest /= k;
                }
            }
            return c(w);
        });
    res.trace["packed_ground"] = np;
    res.trace["packed_alphabet"] = packed;

    const auto line = find_mono_subspace(packed_c, 1);
    res.trace["line_found"] = line.has_value();
    if (!line) {
        res.status = DimReduceResult::Status::no_line;
        return res;
    }
    res.trace["moving"] = line->blocks[0];

    NonConvexSubspace s;
    s.classes.assign(static_cast<std::size_t>(m), {});
    for (int i = 0; i < m; ++i)
        for (int P : line->blocks[0])
            s.classes[static_cast<std::size_t>(i)].push_back(P * m + i);
    for (std::size_t q = 0; q < line->fixed.domain.size(); ++q) {
        const int Q = line->fixed.domain[q];
        int rest = line->fixed.letters[q];
        for (int i = 0; i < m; ++i) {
            s.fixed.domain.push_back(Q * m + i);
            s.fixed.letters.push_back(rest % k);
            rest /= k;
        }
    }
    std::vector<std::pair<int, int>> spans;  // (min, max) per class
    for (const auto& cl : s.classes) spans.emplace_back(cl.front(), cl.back());
    std::sort(spans.begin(), spans.end());
    s.convex = true;
    for (std::size_t i = 0; i + 1 < spans.size(); ++i)
        if (spans[i].second >= spans[i + 1].first) s.convex = false;

    if (!is_mono_nonconvex(c, s))
        throw std::logic_error("unpacked subspace is not monochromatic");
    res.trace["verified"] = true;
    res.subspace = std::move(s);
    res.status = DimReduceResult::Status::ok;
    return res;
}

}  // namespace hjw
