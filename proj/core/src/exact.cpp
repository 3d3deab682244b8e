#include "hjw/exact.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "hjw/equiv.hpp"
#include "hjw/errors.hpp"
#include "hjw/subspaces.hpp"
#include "hjw/words.hpp"

namespace hjw {

namespace {

// Capacity of the exact engine: the cell table is dense and the search is
// exponential, so anything past these caps is out of reach regardless.
constexpr std::uint64_t kCellCap = UINT64_C(1) << 15;
constexpr std::uint64_t kEntryCap = UINT64_C(1) << 24;

// Frontier sizing is a function of the instance alone, never of the worker
// count: certificates and statistics must be byte-identical for any number of
// workers.
constexpr std::size_t kFrontierTarget = 32;
constexpr std::size_t kFrontierCap = 4096;

std::uint64_t kind_floor(const NumberKind& k) {
    switch (k.tag) {
        case NumberKind::Tag::hj:
            return static_cast<std::uint64_t>(k.dim);
        case NumberKind::Tag::vdw:
            return static_cast<std::uint64_t>(k.side);
        case NumberKind::Tag::ramsey:
        case NumberKind::Tag::level_ramsey:
        case NumberKind::Tag::par_alpha:
        case NumberKind::Tag::par_full:
            return static_cast<std::uint64_t>(k.target);
    }
    return 1;
}

void validate_kind(const NumberKind& k) {
    if (k.colors < 1 || k.colors > 30) throw BadParams("color count must be between 1 and 30");
    switch (k.tag) {
        case NumberKind::Tag::hj:
            if (k.dim < 1) throw BadParams("subspace dimension must be positive");
            if (k.alphabet < 1) throw BadParams("alphabet must be nonempty");
            break;
        case NumberKind::Tag::vdw:
            if (k.dim < 1) throw BadParams("grid dimension must be positive");
            if (k.side < 1) throw BadParams("grid side must be positive");
            break;
        case NumberKind::Tag::ramsey:
            if (k.levels < 1) throw BadParams("tuple size must be positive");
            if (k.target < k.levels) throw BadParams("target must be at least the tuple size");
            break;
        case NumberKind::Tag::level_ramsey:
            if (k.levels < 1) throw BadParams("level bound must be positive");
            if (k.target < 1) throw BadParams("target must be positive");
            break;
        case NumberKind::Tag::par_alpha:
            if (k.target < 1) throw BadParams("target size must be positive");
            if (k.alphabet < 1) throw BadParams("alphabet must be nonempty");
            if (k.base < 0 || k.base >= k.alphabet)
                throw BadParams("base letter must lie in the alphabet");
            break;
        case NumberKind::Tag::par_full:
            if (k.target < 1) throw BadParams("target size must be positive");
            if (k.alphabet < 1) throw BadParams("alphabet must be nonempty");
            break;
    }
}

[[noreturn]] void throw_capacity() {
    throw BudgetExceeded(0, std::nullopt, "instance exceeds the exact engine's capacity");
}

std::uint64_t cells_or_capacity(const Ground& g, const Alphabet& a) {
    try {
        return space_size(g, a);
    } catch (const BadParams&) {
        throw_capacity();
    }
}

// C(n, k), throwing once the running value is already past the cell cap.
// Partial products C(n-k+i, i) increase with i, so early bailout is sound.
std::uint64_t binomial_capped(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        if (r > kCellCap) throw_capacity();
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

nlohmann::json stats_to_json(const SearchStats& s) {
    return nlohmann::json{{"nodes", s.nodes},
                          {"wipeouts", s.wipeouts},
                          {"forced_witnesses", s.forced_witnesses},
                          {"symmetry_prunes", s.symmetry_prunes}};
}

SearchStats stats_from_json(const nlohmann::json& j) {
    SearchStats s;
    s.nodes = j.at("nodes").get<std::uint64_t>();
    s.wipeouts = j.at("wipeouts").get<std::uint64_t>();
    s.forced_witnesses = j.at("forced_witnesses").get<std::uint64_t>();
    s.symmetry_prunes = j.at("symmetry_prunes").get<std::uint64_t>();
    return s;
}

Certificate certificate_from_json(const nlohmann::json& j) {
    Certificate c;
    c.kind = NumberKind::from_json(j.at("kind"));
    c.value = j.at("value").get<std::uint64_t>();
    if (!j.at("bad_coloring").is_null())
        c.bad_coloring = j.at("bad_coloring").get<std::vector<int>>();
    c.stats = stats_from_json(j.at("stats"));
    return c;
}

// Cell permutation induced by relabeling letters of ground-g words.
std::vector<std::uint32_t> word_cell_perm(const Ground& g, const Alphabet& a,
                                          const std::vector<int>& letter_map) {
    const std::uint64_t n = space_size(g, a);
    std::vector<std::uint32_t> perm(n);
    for (std::uint64_t r = 0; r < n; ++r) {
        Word w = unrank_word(r, g, a);
        for (int& x : w) x = letter_map[static_cast<std::size_t>(x)];
        perm[r] = static_cast<std::uint32_t>(rank_word(w, a));
    }
    return perm;
}

bool is_identity(const std::vector<std::uint32_t>& p) {
    for (std::uint32_t i = 0; i < p.size(); ++i)
        if (p[i] != i) return false;
    return true;
}

// Every pruning generator must map the witness family onto itself; a wrong
// generator would silently drop valid colorings, so this is checked at build.
void verify_symmetries(const WitnessFamily& fam) {
    if (fam.cell_symmetries.empty()) return;
    auto canon = [](std::vector<std::vector<std::uint32_t>> w) {
        for (auto& g : w) std::sort(g.begin(), g.end());
        std::sort(w.begin(), w.end());
        return w;
    };
    std::set<std::vector<std::vector<std::uint32_t>>> all;
    for (const auto& w : fam.witnesses) all.insert(canon(w));
    for (const auto& p : fam.cell_symmetries) {
        if (p.size() != fam.num_cells)
            throw std::logic_error("cell symmetry has the wrong arity");
        std::vector<std::uint32_t> sorted = p;
        std::sort(sorted.begin(), sorted.end());
        for (std::uint32_t i = 0; i < sorted.size(); ++i)
            if (sorted[i] != i) throw std::logic_error("cell symmetry is not a permutation");
        for (const auto& w : fam.witnesses) {
            auto img = w;
            for (auto& g : img)
                for (auto& c : g) c = p[c];
            if (!all.count(canon(std::move(img))))
                throw std::logic_error("cell symmetry does not preserve the witness family");
        }
    }
}

}  // namespace

NumberKind NumberKind::hj(int dim, int alphabet, int colors) {
    NumberKind k;
    k.tag = Tag::hj;
    k.dim = dim;
    k.alphabet = alphabet;
    k.colors = colors;
    return k;
}

NumberKind NumberKind::vdw(int grid_dim, int side, int colors) {
    NumberKind k;
    k.tag = Tag::vdw;
    k.dim = grid_dim;
    k.side = side;
    k.colors = colors;
    return k;
}

NumberKind NumberKind::ramsey(int target, int tuple, int colors) {
    NumberKind k;
    k.tag = Tag::ramsey;
    k.target = target;
    k.levels = tuple;
    k.colors = colors;
    return k;
}

NumberKind NumberKind::level_ramsey(int target, int level_bound, int colors) {
    NumberKind k;
    k.tag = Tag::level_ramsey;
    k.target = target;
    k.levels = level_bound;
    k.colors = colors;
    return k;
}

NumberKind NumberKind::par_alpha(int target, int alphabet, int base, int colors) {
    NumberKind k;
    k.tag = Tag::par_alpha;
    k.target = target;
    k.alphabet = alphabet;
    k.base = base;
    k.colors = colors;
    return k;
}

NumberKind NumberKind::par_full(int target, int alphabet, int colors) {
    NumberKind k;
    k.tag = Tag::par_full;
    k.target = target;
    k.alphabet = alphabet;
    k.colors = colors;
    return k;
}

std::string NumberKind::name() const {
    switch (tag) {
        case Tag::hj: return "hj";
        case Tag::vdw: return "vdw";
        case Tag::ramsey: return "ramsey";
        case Tag::level_ramsey: return "level-ramsey";
        case Tag::par_alpha: return "par-alpha";
        case Tag::par_full: return "par-full";
    }
    return "";
}

nlohmann::json NumberKind::to_json() const {
    nlohmann::json j{{"kind", name()}, {"colors", colors}};
    switch (tag) {
        case Tag::hj:
            j["dim"] = dim;
            j["alphabet"] = alphabet;
            break;
        case Tag::vdw:
            j["grid_dim"] = dim;
            j["side"] = side;
            break;
        case Tag::ramsey:
            j["target"] = target;
            j["tuple"] = levels;
            break;
        case Tag::level_ramsey:
            j["target"] = target;
            j["level_bound"] = levels;
            break;
        case Tag::par_alpha:
            j["target"] = target;
            j["alphabet"] = alphabet;
            j["base"] = base;
            break;
        case Tag::par_full:
            j["target"] = target;
            j["alphabet"] = alphabet;
            break;
    }
    return j;
}

NumberKind NumberKind::from_json(const nlohmann::json& j) {
    const std::string which = j.at("kind").get<std::string>();
    const int colors = j.at("colors").get<int>();
    if (which == "hj")
        return hj(j.at("dim").get<int>(), j.at("alphabet").get<int>(), colors);
    if (which == "vdw")
        return vdw(j.at("grid_dim").get<int>(), j.at("side").get<int>(), colors);
    if (which == "ramsey")
        return ramsey(j.at("target").get<int>(), j.at("tuple").get<int>(), colors);
    if (which == "level-ramsey")
        return level_ramsey(j.at("target").get<int>(), j.at("level_bound").get<int>(), colors);
    if (which == "par-alpha")
        return par_alpha(j.at("target").get<int>(), j.at("alphabet").get<int>(),
                         j.at("base").get<int>(), colors);
    if (which == "par-full")
        return par_full(j.at("target").get<int>(), j.at("alphabet").get<int>(), colors);
    throw BadParams("unknown number kind: " + which);
}

SearchStats& SearchStats::operator+=(const SearchStats& o) {
    nodes += o.nodes;
    wipeouts += o.wipeouts;
    forced_witnesses += o.forced_witnesses;
    symmetry_prunes += o.symmetry_prunes;
    return *this;
}

nlohmann::json Certificate::to_json() const {
    nlohmann::json j{{"format", 1},
                     {"kind", kind.to_json()},
                     {"value", value},
                     {"stats", stats_to_json(stats)}};
    j["bad_coloring"] = bad_coloring ? nlohmann::json(*bad_coloring) : nlohmann::json(nullptr);
    return j;
}

WitnessFamily build_witness_family(const NumberKind& kind, int n) {
    validate_kind(kind);
    if (n < 1) throw BadParams("size must be positive");

    WitnessFamily fam;
    fam.num_colors = kind.colors;
    fam.floor = kind_floor(kind);

    std::uint64_t entries = 0;
    auto add_witness = [&fam, &entries](std::vector<std::vector<std::uint32_t>> groups) {
        for (const auto& g : groups) entries += g.size();
        if (entries > kEntryCap) throw_capacity();
        fam.witnesses.push_back(std::move(groups));
    };
    auto checked_cells = [](std::uint64_t cells) {
        if (cells > kCellCap) throw_capacity();
        return cells;
    };

    switch (kind.tag) {
        case NumberKind::Tag::hj: {
            const Ground g{n};
            const Alphabet a{kind.alphabet};
            fam.num_cells = checked_cells(cells_or_capacity(g, a));
            for_each_convex_subspace(g, a, kind.dim, [&](const ConvexSubspace& s) {
                std::vector<std::uint32_t> grp;
                for (const Word& p : enumerate_subspace(s, a))
                    grp.push_back(static_cast<std::uint32_t>(rank_word(p, a)));
                std::vector<std::vector<std::uint32_t>> groups;
                if (grp.size() > 1) groups.push_back(std::move(grp));
                add_witness(std::move(groups));
                return false;
            });
            if (kind.alphabet >= 2) {
                std::vector<int> lm(static_cast<std::size_t>(kind.alphabet));
                for (int i = 0; i < kind.alphabet; ++i) lm[static_cast<std::size_t>(i)] = i;
                std::swap(lm[0], lm[1]);
                auto p = word_cell_perm(g, a, lm);
                if (!is_identity(p)) fam.cell_symmetries.push_back(std::move(p));
            }
            break;
        }

        case NumberKind::Tag::vdw: {
            const int h = kind.dim;
            const Ground g{h};
            const Alphabet a{n};
            fam.num_cells = checked_cells(cells_or_capacity(g, a));
            // Classical headroom: offsets + d*(side-1) stay within range.
            const long long steps = kind.side - 1;
            for (long long d = 1;; ++d) {
                const long long max_off = static_cast<long long>(n) - 1 - d * steps;
                if (max_off < 0) break;
                GridPattern gp{d, std::vector<long long>(static_cast<std::size_t>(h), 0),
                               kind.side};
                for (;;) {
                    std::vector<std::uint32_t> grp;
                    for (const Word& pt : enumerate_grid(gp, h))
                        grp.push_back(static_cast<std::uint32_t>(rank_word(pt, a)));
                    std::vector<std::vector<std::uint32_t>> groups;
                    if (grp.size() > 1) groups.push_back(std::move(grp));
                    add_witness(std::move(groups));
                    int e = h - 1;
                    while (e >= 0 && gp.offsets[static_cast<std::size_t>(e)] == max_off)
                        gp.offsets[static_cast<std::size_t>(e--)] = 0;
                    if (e < 0) break;
                    ++gp.offsets[static_cast<std::size_t>(e)];
                }
                if (steps == 0) break;  // single-point grids do not depend on d
            }
            if (n >= 2) {
                std::vector<int> lm(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) lm[static_cast<std::size_t>(i)] = n - 1 - i;
                auto p = word_cell_perm(g, a, lm);
                if (!is_identity(p)) fam.cell_symmetries.push_back(std::move(p));
            }
            break;
        }

        case NumberKind::Tag::ramsey: {
            const int l = kind.levels;
            fam.num_cells = checked_cells(binomial_capped(n, l));
            if (n >= kind.target) {
                for_each_combination(n, kind.target, [&](const std::vector<int>& A) {
                    std::vector<std::uint32_t> grp;
                    for_each_combination(kind.target, l, [&](const std::vector<int>& idx) {
                        std::vector<int> t(idx.size());
                        for (std::size_t i = 0; i < idx.size(); ++i)
                            t[i] = A[static_cast<std::size_t>(idx[i])];
                        grp.push_back(static_cast<std::uint32_t>(comb_rank(t, n)));
                        return false;
                    });
                    std::vector<std::vector<std::uint32_t>> groups;
                    if (grp.size() > 1) groups.push_back(std::move(grp));
                    add_witness(std::move(groups));
                    return false;
                });
            }
            if (n >= 2) {
                std::vector<std::uint32_t> p(fam.num_cells);
                std::uint64_t r = 0;
                for_each_combination(n, l, [&](const std::vector<int>& t) {
                    std::vector<int> rev(t.size());
                    for (std::size_t i = 0; i < t.size(); ++i)
                        rev[t.size() - 1 - i] = n - 1 - t[i];
                    p[r++] = static_cast<std::uint32_t>(comb_rank(rev, n));
                    return false;
                });
                if (!is_identity(p)) fam.cell_symmetries.push_back(std::move(p));
            }
            break;
        }

        case NumberKind::Tag::level_ramsey: {
            const int l = kind.levels;
            std::vector<std::uint64_t> offset(static_cast<std::size_t>(std::max(l, 1)), 0);
            std::uint64_t cells = 0;
            for (int j = 1; j < l; ++j) {
                offset[static_cast<std::size_t>(j)] = cells;
                cells += binomial_capped(n, j);
                if (cells > kCellCap) throw_capacity();
            }
            fam.num_cells = checked_cells(cells);
            if (n >= kind.target) {
                for_each_combination(n, kind.target, [&](const std::vector<int>& B) {
                    std::vector<std::vector<std::uint32_t>> groups;
                    for (int j = 1; j < l && j <= kind.target; ++j) {
                        std::vector<std::uint32_t> grp;
                        for_each_combination(kind.target, j, [&](const std::vector<int>& idx) {
                            std::vector<int> t(idx.size());
                            for (std::size_t i = 0; i < idx.size(); ++i)
                                t[i] = B[static_cast<std::size_t>(idx[i])];
                            grp.push_back(static_cast<std::uint32_t>(
                                offset[static_cast<std::size_t>(j)] + comb_rank(t, n)));
                            return false;
                        });
                        if (grp.size() > 1) groups.push_back(std::move(grp));
                    }
                    add_witness(std::move(groups));
                    return false;
                });
            }
            if (n >= 2 && fam.num_cells > 0) {
                std::vector<std::uint32_t> p(fam.num_cells);
                for (int j = 1; j < l; ++j) {
                    std::uint64_t r = offset[static_cast<std::size_t>(j)];
                    for_each_combination(n, j, [&](const std::vector<int>& t) {
                        std::vector<int> rev(t.size());
                        for (std::size_t i = 0; i < t.size(); ++i)
                            rev[t.size() - 1 - i] = n - 1 - t[i];
                        p[r++] = static_cast<std::uint32_t>(
                            offset[static_cast<std::size_t>(j)] + comb_rank(rev, n));
                        return false;
                    });
                }
                if (!is_identity(p)) fam.cell_symmetries.push_back(std::move(p));
            }
            break;
        }

        case NumberKind::Tag::par_alpha:
        case NumberKind::Tag::par_full: {
            const bool full = kind.tag == NumberKind::Tag::par_full;
            const int m = kind.target;
            const int k = kind.alphabet;
            const Ground gn{n};
            const Alphabet a{k};
            fam.num_cells = checked_cells(cells_or_capacity(gn, a));
            if (m <= n) {
                // Inner-word classes with at least two members; rank order
                // within each class, classes ordered by representative.
                const Ground gm{m};
                const EquivKind ek =
                    full ? EquivKind::full_sym() : EquivKind::alpha_iso(kind.base);
                std::map<Word, std::vector<Word>> classes;
                const std::uint64_t inner_count = cells_or_capacity(gm, a);
                for (std::uint64_t r = 0; r < inner_count; ++r) {
                    Word w = unrank_word(r, gm, a);
                    classes[class_representative(w, ek, a)].push_back(std::move(w));
                }
                std::vector<std::vector<Word>> big;
                for (auto& [rep, members] : classes)
                    if (members.size() > 1) big.push_back(std::move(members));

                auto emit = [&](const std::vector<int>& N, const PartialWord& fill) {
                    std::vector<std::vector<std::uint32_t>> groups;
                    groups.reserve(big.size());
                    for (const auto& members : big) {
                        std::vector<std::uint32_t> grp;
                        grp.reserve(members.size());
                        for (const Word& inner : members)
                            grp.push_back(static_cast<std::uint32_t>(
                                rank_word(assemble_word(inner, N, fill, gn), a)));
                        groups.push_back(std::move(grp));
                    }
                    add_witness(std::move(groups));
                };

                for_each_combination(n, m, [&](const std::vector<int>& N) {
                    const std::vector<int> comp = complement_positions(N, n);
                    if (full) {
                        const Ground gc{static_cast<int>(comp.size())};
                        const std::uint64_t fills = space_size(gc, a);
                        for (std::uint64_t fr = 0; fr < fills; ++fr) {
                            const Word fw = unrank_word(fr, gc, a);
                            std::vector<std::pair<int, int>> ent;
                            ent.reserve(comp.size());
                            for (std::size_t i = 0; i < comp.size(); ++i)
                                ent.emplace_back(comp[i], fw[i]);
                            emit(N, PartialWord::of(std::move(ent)));
                        }
                    } else {
                        std::vector<std::pair<int, int>> ent;
                        ent.reserve(comp.size());
                        for (int pos : comp) ent.emplace_back(pos, kind.base);
                        emit(N, PartialWord::of(std::move(ent)));
                    }
                    return false;
                });
            }
            std::vector<int> lm(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) lm[static_cast<std::size_t>(i)] = i;
            bool have = false;
            if (full) {
                if (k >= 2) {
                    std::swap(lm[0], lm[1]);
                    have = true;
                }
            } else {
                std::vector<int> others;
                for (int i = 0; i < k; ++i)
                    if (i != kind.base) others.push_back(i);
                if (others.size() >= 2) {
                    std::swap(lm[static_cast<std::size_t>(others[0])],
                              lm[static_cast<std::size_t>(others[1])]);
                    have = true;
                }
            }
            if (have) {
                auto p = word_cell_perm(gn, a, lm);
                if (!is_identity(p)) fam.cell_symmetries.push_back(std::move(p));
            }
            break;
        }
    }

    verify_symmetries(fam);
    return fam;
}

bool family_has_witness(const WitnessFamily& fam, const std::vector<int>& cells) {
    if (cells.size() != fam.num_cells) throw BadParams("cell table size mismatch");
    for (int v : cells)
        if (v < 0 || v >= fam.num_colors) throw BadParams("cell color out of range");
    for (const auto& w : fam.witnesses) {
        bool all = true;
        for (const auto& g : w) {
            const int c0 = cells[g[0]];
            for (std::uint32_t cc : g)
                if (cells[cc] != c0) {
                    all = false;
                    break;
                }
            if (!all) break;
        }
        if (all) return true;
    }
    return false;
}

namespace {

class BudgetTracker {
public:
    BudgetTracker(std::uint64_t node_budget, double seconds) : limit_(node_budget) {
        if (seconds > 0) {
            timed_ = true;
            deadline_ = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(seconds));
        }
    }

    bool charge(std::uint64_t k) {
        if (dead_.load(std::memory_order_relaxed)) return false;
        if (k == 0) return true;
        if (used_.fetch_add(k, std::memory_order_relaxed) + k > limit_) {
            dead_.store(true, std::memory_order_relaxed);
            return false;
        }
        if (timed_ && std::chrono::steady_clock::now() > deadline_) {
            timed_out_.store(true, std::memory_order_relaxed);
            dead_.store(true, std::memory_order_relaxed);
            return false;
        }
        return true;
    }

    bool dead() const { return dead_.load(std::memory_order_relaxed); }
    bool timed_out() const { return timed_out_.load(std::memory_order_relaxed); }

private:
    std::uint64_t limit_;
    bool timed_ = false;
    std::chrono::steady_clock::time_point deadline_{};
    std::atomic<std::uint64_t> used_{0};
    std::atomic<bool> dead_{false};
    std::atomic<bool> timed_out_{false};
};

// Thrown inside a level; translated into BudgetExceeded with the bracket by
// the caller, which knows the current size.
struct BudgetOut {
    bool found_bad = false;
    bool timed_out = false;
};

void cas_min(std::atomic<std::int64_t>& a, std::int64_t v) {
    std::int64_t cur = a.load(std::memory_order_relaxed);
    while (v < cur && !a.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
    }
}

// Adversarial assignment state. Cells are assigned strictly in rank order;
// pushes propagate witness-avoidance constraints and enforce two canonical
// forms: colors first used in increasing order, and the assignment prefix
// lexicographically no larger than its image under each family symmetry.
class Engine {
public:
    explicit Engine(const WitnessFamily& fam) : fam_(&fam), colors_(fam.num_colors) {
        full_mask_ = colors_ >= 32 ? 0xffffffffu : ((1u << colors_) - 1);
        wit_.reserve(fam.witnesses.size());
        for (const auto& w : fam.witnesses) {
            std::vector<GroupState> gs;
            gs.reserve(w.size());
            for (const auto& g : w) gs.push_back(GroupState{g, 0, -1, false});
            wit_.push_back(std::move(gs));
        }
        wit_broken_.assign(wit_.size(), 0);
        wit_det_.assign(wit_.size(), 0);
        cell_groups_.assign(fam.num_cells, {});
        for (std::uint32_t wi = 0; wi < wit_.size(); ++wi)
            for (std::uint32_t gi = 0; gi < wit_[wi].size(); ++gi)
                for (std::uint32_t cell : wit_[wi][gi].cells)
                    cell_groups_[cell].emplace_back(wi, gi);
        domain_.assign(fam.num_cells, full_mask_);
        assign_.assign(fam.num_cells, -1);
    }

    void set_stats(SearchStats* s) { stats_ = s; }
    std::uint64_t num_cells() const { return fam_->num_cells; }
    int depth() const { return static_cast<int>(undos_.size()); }
    std::vector<int> assignment() const { return assign_; }

    // Colors worth branching on at the next cell: unforbidden values that are
    // either already in use or the least unused one.
    std::uint32_t branch_mask() const {
        const int cell = depth();
        const int limit = std::min(max_used_, colors_ - 1);
        const std::uint32_t canonical =
            limit >= 31 ? 0xffffffffu : ((2u << limit) - 1);
        return domain_[static_cast<std::size_t>(cell)] & canonical;
    }

    // Assigns the next cell; on any prune the partial effects are rolled back
    // and false is returned.
    bool push(int x) {
        const int cell = depth();
        undos_.push_back(Undo{cell, max_used_, gtrail_.size(), wtrail_.size(), dtrail_.size()});
        assign_[static_cast<std::size_t>(cell)] = x;
        if (x >= max_used_) max_used_ = x + 1;

        bool forced = false;
        for (const auto& [wi, gi] : cell_groups_[static_cast<std::size_t>(cell)]) {
            GroupState& G = wit_[wi][gi];
            gtrail_.push_back(GroupChange{wi, gi, G.color, G.broken});
            ++G.assigned;
            if (!G.broken) {
                if (G.color < 0) {
                    G.color = x;
                } else if (G.color != x) {
                    G.broken = true;
                    wtrail_.push_back(WitChange{wi, wit_broken_[wi], wit_det_[wi]});
                    ++wit_broken_[wi];
                }
            }
            if (!G.broken && G.assigned == G.cells.size()) {
                wtrail_.push_back(WitChange{wi, wit_broken_[wi], wit_det_[wi]});
                ++wit_det_[wi];
                if (wit_broken_[wi] == 0 && wit_det_[wi] == wit_[wi].size()) forced = true;
            }
        }
        if (forced) {
            if (stats_) ++stats_->forced_witnesses;
            pop();
            return false;
        }

        // Last-breaker rule: when every group of a witness but one is settled
        // monochromatic and that one has a single open cell, the open cell
        // must avoid the group's color.
        for (const auto& [wi, gi] : cell_groups_[static_cast<std::size_t>(cell)]) {
            (void)gi;
            if (wit_broken_[wi] != 0) continue;
            if (wit_det_[wi] + 1 != wit_[wi].size()) continue;
            for (GroupState& G : wit_[wi]) {
                if (G.broken || G.assigned == G.cells.size()) continue;
                if (G.assigned + 1 == G.cells.size()) {
                    std::uint32_t open = 0;
                    for (std::uint32_t c2 : G.cells)
                        if (assign_[c2] < 0) {
                            open = c2;
                            break;
                        }
                    const std::uint32_t bit = 1u << G.color;
                    if (domain_[open] & bit) {
                        dtrail_.push_back(DomChange{open, domain_[open]});
                        domain_[open] &= ~bit;
                        if (domain_[open] == 0) {
                            if (stats_) ++stats_->wipeouts;
                            pop();
                            return false;
                        }
                    }
                }
                break;  // exactly one group of this witness is undetermined
            }
        }

        // Lex-leader cut against each symmetry generator on the decided prefix.
        for (const auto& p : fam_->cell_symmetries) {
            for (int j = 0; j <= cell; ++j) {
                const std::uint32_t pj = p[static_cast<std::size_t>(j)];
                if (pj > static_cast<std::uint32_t>(cell)) break;  // undecided
                const int lhs = assign_[static_cast<std::size_t>(j)];
                const int rhs = assign_[pj];
                if (lhs < rhs) break;
                if (lhs > rhs) {
                    if (stats_) ++stats_->symmetry_prunes;
                    pop();
                    return false;
                }
            }
        }
        return true;
    }

    void pop() {
        const Undo u = undos_.back();
        undos_.pop_back();
        while (dtrail_.size() > u.doms_from) {
            const DomChange d = dtrail_.back();
            dtrail_.pop_back();
            domain_[d.cell] = d.prev;
        }
        while (wtrail_.size() > u.wits_from) {
            const WitChange w = wtrail_.back();
            wtrail_.pop_back();
            wit_broken_[w.w] = w.prev_broken;
            wit_det_[w.w] = w.prev_det;
        }
        while (gtrail_.size() > u.groups_from) {
            const GroupChange g = gtrail_.back();
            gtrail_.pop_back();
            GroupState& G = wit_[g.w][g.g];
            --G.assigned;
            G.color = g.prev_color;
            G.broken = g.prev_broken;
        }
        max_used_ = u.prev_max_used;
        assign_[static_cast<std::size_t>(u.cell)] = -1;
    }

    void reset() {
        while (!undos_.empty()) pop();
    }

    // Replays a recorded branch-value prefix without counting statistics.
    bool replay(const std::vector<int>& values) {
        SearchStats* saved = stats_;
        stats_ = nullptr;
        bool ok = true;
        for (int v : values)
            if (!push(v)) {
                ok = false;
                break;
            }
        stats_ = saved;
        return ok;
    }

private:
    struct GroupState {
        std::vector<std::uint32_t> cells;
        std::size_t assigned;
        int color;
        bool broken;
    };
    struct GroupChange {
        std::uint32_t w, g;
        int prev_color;
        bool prev_broken;
    };
    struct WitChange {
        std::uint32_t w;
        std::uint32_t prev_broken, prev_det;
    };
    struct DomChange {
        std::uint32_t cell;
        std::uint32_t prev;
    };
    struct Undo {
        int cell;
        int prev_max_used;
        std::size_t groups_from, wits_from, doms_from;
    };

    const WitnessFamily* fam_;
    int colors_;
    std::uint32_t full_mask_;
    std::vector<std::vector<GroupState>> wit_;
    std::vector<std::uint32_t> wit_broken_;  // broken groups per witness
    std::vector<std::uint32_t> wit_det_;     // settled monochromatic groups per witness
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> cell_groups_;
    std::vector<std::uint32_t> domain_;
    std::vector<int> assign_;
    int max_used_ = 0;  // used colors form {0..max_used_-1} under canonical branching
    SearchStats* stats_ = nullptr;
    std::vector<GroupChange> gtrail_;
    std::vector<WitChange> wtrail_;
    std::vector<DomChange> dtrail_;
    std::vector<Undo> undos_;
};

enum class SubtreeOutcome { exhausted, found, budget, cancelled };

// Depth-first search below the engine's current depth. Counts attempted
// assignments as nodes; polls budget and the cancellation watermark.
SubtreeOutcome dfs_subtree(Engine& e, SearchStats& st, BudgetTracker& budget,
                           const std::atomic<std::int64_t>& watermark, std::int64_t my_index,
                           std::vector<int>& out) {
    const int total = static_cast<int>(e.num_cells());
    if (e.depth() == total) {
        out = e.assignment();
        return SubtreeOutcome::found;
    }
    std::uint64_t batch = 0;
    auto flush = [&]() {
        const bool ok = budget.charge(batch);
        batch = 0;
        return ok;
    };
    std::vector<std::uint32_t> pending;
    pending.push_back(e.branch_mask());
    while (!pending.empty()) {
        std::uint32_t& top = pending.back();
        if (top == 0) {
            pending.pop_back();
            if (!pending.empty()) e.pop();
            continue;
        }
        const int x = std::countr_zero(top);
        top &= top - 1;
        ++st.nodes;
        if (++batch >= 256) {
            if (!flush()) return SubtreeOutcome::budget;
            if (watermark.load(std::memory_order_relaxed) < my_index)
                return SubtreeOutcome::cancelled;
        }
        if (e.push(x)) {
            if (e.depth() == total) {
                out = e.assignment();
                flush();
                return SubtreeOutcome::found;
            }
            pending.push_back(e.branch_mask());
        }
    }
    flush();
    return SubtreeOutcome::exhausted;
}

// Append-only JSONL journal of per-node outcomes, replayed on resume. The
// header binds the journal to one search; node work recorded by an earlier
// (possibly interrupted) run is reused instead of recomputed.
class Journal {
public:
    struct NodeRec {
        bool bad = false;
        std::vector<int> cells;
        SearchStats stats;
    };
    struct LevelRec {
        bool has_bad = false;
        std::vector<int> cells;
        SearchStats stats;
    };

    Journal() = default;

    Journal(const std::string& path, const NumberKind& kind) {
        if (path.empty()) return;
        active_ = true;
        const nlohmann::json kind_json = kind.to_json();
        bool have_header = false;
        {
            std::ifstream in(path);
            std::string line;
            bool first = true;
            while (in.good() && std::getline(in, line)) {
                if (line.empty()) continue;
                nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
                if (j.is_discarded()) continue;  // torn tail write
                const std::string type = j.value("type", "");
                if (first) {
                    if (type != "header" || j.value("format", 0) != 1)
                        throw BadParams("checkpoint file is not a search journal");
                    if (j.at("kind") != kind_json)
                        throw BadParams("checkpoint journal belongs to a different search");
                    have_header = true;
                    first = false;
                    continue;
                }
                try {
                    if (type == "level") {
                        meta_[j.at("n").get<std::uint64_t>()] = {
                            j.at("depth").get<int>(), j.at("frontier").get<std::uint64_t>()};
                    } else if (type == "node") {
                        NodeRec r;
                        r.bad = j.at("bad").get<bool>();
                        if (r.bad) r.cells = j.at("cells").get<std::vector<int>>();
                        r.stats = stats_from_json(j.at("stats"));
                        nodes_[{j.at("n").get<std::uint64_t>(), j.at("i").get<std::uint64_t>()}] =
                            std::move(r);
                    } else if (type == "level_done") {
                        LevelRec r;
                        r.has_bad = j.at("bad").get<bool>();
                        if (r.has_bad) r.cells = j.at("cells").get<std::vector<int>>();
                        r.stats = stats_from_json(j.at("stats"));
                        levels_[j.at("n").get<std::uint64_t>()] = std::move(r);
                    } else if (type == "done") {
                        done_ = certificate_from_json(j.at("certificate"));
                    }
                } catch (const nlohmann::json::exception&) {
                    // Malformed entry: drop it and recompute that work.
                }
            }
        }
        out_.open(path, std::ios::app);
        if (!out_) throw BadParams("cannot open checkpoint file: " + path);
        if (!have_header)
            append(nlohmann::json{{"type", "header"}, {"format", 1}, {"kind", kind_json}});
    }

    bool active() const { return active_; }

    std::optional<Certificate> done() const { return done_; }

    std::optional<LevelRec> level_done(std::uint64_t n) const {
        auto it = levels_.find(n);
        if (it == levels_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<NodeRec> node(std::uint64_t n, std::uint64_t i) const {
        auto it = nodes_.find({n, i});
        if (it == nodes_.end()) return std::nullopt;
        return it->second;
    }

    void begin_level(std::uint64_t n, int depth, std::uint64_t frontier) {
        if (!active_) return;
        auto it = meta_.find(n);
        if (it != meta_.end()) {
            if (it->second != std::make_pair(depth, frontier))
                throw BadParams("checkpoint journal does not match this search");
            return;
        }
        append(nlohmann::json{
            {"type", "level"}, {"n", n}, {"depth", depth}, {"frontier", frontier}});
    }

    void write_node(std::uint64_t n, std::uint64_t i, bool bad, const std::vector<int>& cells,
                    const SearchStats& st) {
        if (!active_) return;
        nlohmann::json j{
            {"type", "node"}, {"n", n}, {"i", i}, {"bad", bad}, {"stats", stats_to_json(st)}};
        if (bad) j["cells"] = cells;
        append(j);
    }

    void write_level_done(std::uint64_t n, const std::optional<std::vector<int>>& bad,
                          const SearchStats& st) {
        if (!active_) return;
        if (levels_.count(n)) return;
        nlohmann::json j{{"type", "level_done"},
                         {"n", n},
                         {"bad", bad.has_value()},
                         {"stats", stats_to_json(st)}};
        if (bad) j["cells"] = *bad;
        append(j);
    }

    void write_done(const Certificate& c) {
        if (!active_ || done_) return;
        append(nlohmann::json{{"type", "done"}, {"certificate", c.to_json()}});
    }

private:
    void append(const nlohmann::json& j) {
        std::lock_guard<std::mutex> lk(mu_);
        out_ << j.dump() << '\n';
        out_.flush();
    }

    bool active_ = false;
    std::ofstream out_;
    std::mutex mu_;
    std::map<std::pair<std::uint64_t, std::uint64_t>, NodeRec> nodes_;
    std::map<std::uint64_t, std::pair<int, std::uint64_t>> meta_;
    std::map<std::uint64_t, LevelRec> levels_;
    std::optional<Certificate> done_;
};

struct LevelResult {
    std::optional<std::vector<int>> bad;
    SearchStats stats;
};

// One adversarial search at a fixed size. A sequential expansion grows a
// deterministic frontier; workers then claim frontier nodes in order. The
// reported coloring is the first bad one in global depth-first order, and
// statistics sum the shared prefix plus every node up to the first hit, so
// results do not depend on the worker count.
LevelResult run_level(const WitnessFamily& fam, std::uint64_t n, const ExactOptions& opts,
                      BudgetTracker& budget, Journal& journal) {
    // A witness with no groups is present in every coloring: nothing to search.
    for (const auto& w : fam.witnesses)
        if (w.empty()) return {std::nullopt, SearchStats{}};

    SearchStats prefix;
    Engine ex(fam);
    ex.set_stats(&prefix);
    std::vector<std::vector<int>> frontier(1);
    int fdepth = 0;
    while (static_cast<std::uint64_t>(fdepth) < fam.num_cells &&
           frontier.size() < kFrontierTarget &&
           frontier.size() * static_cast<std::size_t>(fam.num_colors) <= kFrontierCap) {
        std::vector<std::vector<int>> next;
        for (const auto& node : frontier) {
            if (!ex.replay(node)) throw std::logic_error("frontier replay failed");
            std::uint32_t mask = ex.branch_mask();
            while (mask != 0) {
                const int x = std::countr_zero(mask);
                mask &= mask - 1;
                ++prefix.nodes;
                if (!budget.charge(1)) throw BudgetOut{false, budget.timed_out()};
                if (ex.push(x)) {
                    next.push_back(node);
                    next.back().push_back(x);
                    ex.pop();
                }
            }
            ex.reset();
        }
        frontier = std::move(next);
        ++fdepth;
        if (frontier.empty()) return {std::nullopt, prefix};
    }

    journal.begin_level(n, fdepth, frontier.size());

    enum class RState { pending, none, bad, cancelled, skipped };
    struct Rec {
        RState state = RState::pending;
        SearchStats stats;
        std::vector<int> cells;
    };
    std::vector<Rec> recs(frontier.size());
    std::atomic<std::size_t> claim{0};
    std::atomic<std::int64_t> watermark{std::numeric_limits<std::int64_t>::max()};
    std::exception_ptr first_error;
    std::mutex error_mu;

    auto work = [&]() {
        Engine eng(fam);
        for (;;) {
            const std::size_t j = claim.fetch_add(1, std::memory_order_relaxed);
            if (j >= frontier.size()) return;
            if (auto pre = journal.node(n, j)) {
                if (pre->bad && family_has_witness(fam, pre->cells))
                    throw BadParams("checkpoint journal records an invalid coloring");
                recs[j].state = pre->bad ? RState::bad : RState::none;
                recs[j].stats = pre->stats;
                recs[j].cells = std::move(pre->cells);
                if (recs[j].state == RState::bad) cas_min(watermark, static_cast<std::int64_t>(j));
                continue;
            }
            if (budget.dead()) {
                recs[j].state = RState::skipped;
                continue;
            }
            if (static_cast<std::int64_t>(j) > watermark.load(std::memory_order_relaxed)) {
                recs[j].state = RState::cancelled;
                continue;
            }
            eng.reset();
            if (!eng.replay(frontier[j])) throw std::logic_error("frontier replay failed");
            SearchStats st;
            eng.set_stats(&st);
            std::vector<int> out;
            switch (dfs_subtree(eng, st, budget, watermark, static_cast<std::int64_t>(j), out)) {
                case SubtreeOutcome::found:
                    recs[j].state = RState::bad;
                    recs[j].stats = st;
                    recs[j].cells = std::move(out);
                    cas_min(watermark, static_cast<std::int64_t>(j));
                    journal.write_node(n, j, true, recs[j].cells, st);
                    break;
                case SubtreeOutcome::exhausted:
                    recs[j].state = RState::none;
                    recs[j].stats = st;
                    journal.write_node(n, j, false, {}, st);
                    break;
                case SubtreeOutcome::budget:
                    recs[j].state = RState::skipped;
                    break;
                case SubtreeOutcome::cancelled:
                    recs[j].state = RState::cancelled;
                    break;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(opts.workers));
    for (int t = 0; t < opts.workers; ++t)
        pool.emplace_back([&]() {
            try {
                work();
            } catch (...) {
                std::lock_guard<std::mutex> lk(error_mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    // Ordered reduction: the hit is the least frontier index with a bad
    // coloring; an unfinished node before any hit leaves the level open.
    SearchStats total = prefix;
    for (std::size_t j = 0; j < recs.size(); ++j) {
        switch (recs[j].state) {
            case RState::none:
                total += recs[j].stats;
                break;
            case RState::bad:
                total += recs[j].stats;
                if (family_has_witness(fam, recs[j].cells))
                    throw std::logic_error("engine produced a coloring with a witness");
                return {std::move(recs[j].cells), total};
            case RState::cancelled:
            case RState::skipped:
            case RState::pending:
                throw BudgetOut{
                    watermark.load() != std::numeric_limits<std::int64_t>::max(),
                    budget.timed_out()};
        }
    }
    return {std::nullopt, total};
}

}  // namespace

Certificate exact_number(const NumberKind& kind, const ExactOptions& options) {
    validate_kind(kind);
    if (options.workers < 1 || options.workers > 64)
        throw BadParams("workers must be between 1 and 64");

    BudgetTracker budget(options.node_budget, options.time_budget_seconds);
    Journal journal(options.checkpoint_path, kind);
    if (auto done = journal.done()) return *done;

    const std::uint64_t floor = std::max<std::uint64_t>(kind_floor(kind), options.start_floor);
    std::optional<std::vector<int>> last_bad;

    auto finish = [&](std::uint64_t value, const SearchStats& st) {
        Certificate cert;
        cert.kind = kind;
        cert.value = value;
        if (value > floor) {
            if (!last_bad) throw BadParams("checkpoint journal is missing the final bad coloring");
            // Re-verify the lower half of the certificate before signing off.
            const WitnessFamily prev =
                build_witness_family(kind, static_cast<int>(value) - 1);
            if (family_has_witness(prev, *last_bad))
                throw std::logic_error("recorded bad coloring admits a witness");
            cert.bad_coloring = last_bad;
        }
        cert.stats = st;
        journal.write_done(cert);
        return cert;
    };

    for (std::uint64_t n = floor;; ++n) {
        if (n > (UINT64_C(1) << 30))
            throw BudgetExceeded(n, std::nullopt, "exact search ran away; giving up");
        if (auto lv = journal.level_done(n)) {
            if (lv->has_bad) {
                last_bad = std::move(lv->cells);
                continue;
            }
            return finish(n, lv->stats);
        }
        WitnessFamily fam;
        try {
            fam = build_witness_family(kind, static_cast<int>(n));
        } catch (const BudgetExceeded& e) {
            throw BudgetExceeded(n, std::nullopt, e.what());
        }
        try {
            LevelResult res = run_level(fam, n, options, budget, journal);
            journal.write_level_done(n, res.bad, res.stats);
            if (res.bad) {
                last_bad = std::move(res.bad);
                continue;
            }
            return finish(n, res.stats);
        } catch (const BudgetOut& b) {
            throw BudgetExceeded(n + (b.found_bad ? 1 : 0), std::nullopt,
                                 b.timed_out ? "time budget exceeded during exact search"
                                             : "node budget exceeded during exact search");
        }
    }
}

AdversaryResult find_bad_coloring(const NumberKind& kind, int n, const ExactOptions& options) {
    validate_kind(kind);
    if (n < 1) throw BadParams("size must be positive");
    if (options.workers < 1 || options.workers > 64)
        throw BadParams("workers must be between 1 and 64");
    const WitnessFamily fam = build_witness_family(kind, n);
    BudgetTracker budget(options.node_budget, options.time_budget_seconds);
    Journal inert;  // single-size searches are not journaled
    try {
        LevelResult res = run_level(fam, static_cast<std::uint64_t>(n), options, budget, inert);
        return {std::move(res.bad), res.stats};
    } catch (const BudgetOut& b) {
        throw BudgetExceeded(0, std::nullopt,
                             b.timed_out ? "time budget exceeded during adversarial search"
                                         : "node budget exceeded during adversarial search");
    }
}

}  // namespace hjw
